use serde::{Deserialize, Serialize};

use super::{Dims, Subsystem};
use crate::error::{mismatch, Error, Result};
use crate::linalg::{partial_trace_first, partial_trace_second, tensor_product, ComplexMatrix, StateVector};

/// Tolerance for the Hermiticity, unit-trace and positivity checks.
pub const DENSITY_TOLERANCE: f64 = 1e-10;

/// Hermitian, positive semi-definite, unit-trace operator with a bipartite
/// dimension annotation.
///
/// Every constructor validates; nothing is silently renormalized.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
    dims: Dims,
}

impl DensityOperator {
    pub fn new(matrix: ComplexMatrix, dims: Dims) -> Result<Self> {
        if dims.first == 0 || dims.second == 0 {
            return Err(Error::EmptyDimension);
        }
        if !matrix.is_square() {
            return Err(Error::NotSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        if matrix.rows() != dims.total() {
            return Err(mismatch(
                format!("{0}x{0} for dims ({1}, {2})", dims.total(), dims.first, dims.second),
                format!("{0}x{0}", matrix.rows()),
            ));
        }
        let herm = matrix.hermiticity_error()?;
        if herm > DENSITY_TOLERANCE {
            return Err(Error::NotHermitian(herm));
        }
        let tr = matrix.trace()?;
        if (tr.re - 1.0).abs() > DENSITY_TOLERANCE || tr.im.abs() > DENSITY_TOLERANCE {
            return Err(Error::NotUnitTrace(tr.re));
        }
        let min_eig = matrix.hermitian_eigenvalues()?[0];
        if min_eig < -DENSITY_TOLERANCE {
            return Err(Error::NotPositive(min_eig));
        }
        Ok(Self { matrix, dims })
    }

    /// Density operator of a single (unannotated) system.
    pub fn single(matrix: ComplexMatrix) -> Result<Self> {
        let n = matrix.rows();
        Self::new(matrix, Dims::single(n))
    }

    /// `|ψ⟩⟨ψ|` for a normalized `psi`.
    pub fn from_state(psi: &StateVector, dims: Dims) -> Result<Self> {
        Self::new(psi.projector(), dims)
    }

    /// `I/d` on a bipartite space.
    pub fn maximally_mixed(dims: Dims) -> Result<Self> {
        let n = dims.total();
        if n == 0 {
            return Err(Error::EmptyDimension);
        }
        Self::new(
            ComplexMatrix::identity(n).scale((1.0 / n as f64).into()),
            dims,
        )
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// Same matrix under a different bipartite annotation.
    pub fn with_dims(self, dims: Dims) -> Result<Self> {
        if dims.total() != self.dim() {
            return Err(mismatch(self.dim(), dims.total()));
        }
        Ok(Self { dims, ..self })
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        // Tr ρ² = Σ |ρ_ij|² for Hermitian ρ.
        self.matrix.as_slice().iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.matrix
            .hermitian_eigenvalues()
            .expect("density operators are square")
    }

    /// Reduced state after tracing out `traced`; the result is annotated as a
    /// single system.
    pub fn trace_out(&self, traced: Subsystem) -> Result<Self> {
        let Dims { first, second } = self.dims;
        let reduced = match traced {
            Subsystem::First => partial_trace_first(&self.matrix, first, second)?,
            Subsystem::Second => partial_trace_second(&self.matrix, first, second)?,
        };
        Self::single(reduced)
    }

    /// `self ⊗ other`, annotated with each factor's total dimension.
    pub fn tensor(&self, other: &Self) -> Self {
        Self {
            matrix: tensor_product(&self.matrix, &other.matrix),
            dims: Dims::new(self.dim(), other.dim()),
        }
    }
}
