use thiserror::Error;

/// Errors raised while constructing or combining operators and states.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix shape {rows}x{cols} does not match {len} entries")]
    ShapeMismatch { rows: usize, cols: usize, len: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },
    #[error("operation requires a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("zero-sized dimension")]
    EmptyDimension,
    #[error("non-finite entry at index {0}")]
    NonFinite(usize),
    #[error("state vector is not normalized (squared norm {0})")]
    NotNormalized(f64),
    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),
    #[error("trace is {0}, expected 1")]
    NotUnitTrace(f64),
    #[error("matrix is not positive semi-definite (min eigenvalue {0:e})")]
    NotPositive(f64),
    #[error("matrix is not unitary (max deviation {0:e})")]
    NotUnitary(f64),
    #[error("invalid projective measurement: {0}")]
    InvalidMeasurement(String),
    #[error("probabilities are invalid: {0}")]
    InvalidDistribution(String),
    #[error("rank partition {ranks:?} does not sum to {dim}")]
    InvalidPartition { ranks: Vec<usize>, dim: usize },
    #[error("invalid configuration field `{field}`: {reason}")]
    InvalidConfig { field: &'static str, reason: String },
    #[error("outcome has zero probability; post-selection undefined")]
    ZeroProbability,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn mismatch(expected: impl ToString, found: impl ToString) -> Error {
    Error::DimensionMismatch {
        expected: expected.to_string(),
        found: found.to_string(),
    }
}
