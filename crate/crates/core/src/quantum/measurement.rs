use serde::{Deserialize, Serialize};

use super::{DensityOperator, Subsystem, DENSITY_TOLERANCE};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, StateVector};

/// Complete family of mutually orthogonal projectors on one subsystem.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectiveMeasurement {
    subsystem: Subsystem,
    projectors: Vec<ComplexMatrix>,
}

impl ProjectiveMeasurement {
    /// Validates Hermiticity, idempotence, mutual orthogonality and
    /// completeness, each to [`DENSITY_TOLERANCE`].
    pub fn new(subsystem: Subsystem, projectors: Vec<ComplexMatrix>) -> Result<Self> {
        let invalid = |msg: String| Error::InvalidMeasurement(msg);
        let Some(first) = projectors.first() else {
            return Err(invalid("no projectors".into()));
        };
        let dim = first.rows();
        let mut sum = ComplexMatrix::zeros(dim, dim);
        for (i, p) in projectors.iter().enumerate() {
            if !p.is_square() || p.rows() != dim {
                return Err(invalid(format!(
                    "projector {i} is {}x{}, expected {dim}x{dim}",
                    p.rows(),
                    p.cols()
                )));
            }
            let herm = p.hermiticity_error()?;
            if herm > DENSITY_TOLERANCE {
                return Err(invalid(format!("projector {i} not Hermitian ({herm:e})")));
            }
            let idem = p.matmul(p)?.max_abs_diff(p)?;
            if idem > DENSITY_TOLERANCE {
                return Err(invalid(format!("projector {i} not idempotent ({idem:e})")));
            }
            for (j, q) in projectors.iter().enumerate().skip(i + 1) {
                if q.rows() != dim || !q.is_square() {
                    continue;
                }
                let overlap = p.matmul(q)?.max_abs();
                if overlap > DENSITY_TOLERANCE {
                    return Err(invalid(format!(
                        "projectors {i} and {j} not orthogonal ({overlap:e})"
                    )));
                }
            }
            sum = sum.add(p)?;
        }
        let completeness = sum.max_abs_diff(&ComplexMatrix::identity(dim))?;
        if completeness > DENSITY_TOLERANCE {
            return Err(invalid(format!("projectors do not sum to I ({completeness:e})")));
        }
        Ok(Self {
            subsystem,
            projectors,
        })
    }

    /// Rank-1 measurement in the orthonormal basis `basis`.
    pub fn from_basis(subsystem: Subsystem, basis: &[StateVector]) -> Result<Self> {
        Self::new(subsystem, basis.iter().map(StateVector::projector).collect())
    }

    /// Measurement in the computational basis.
    pub fn computational(subsystem: Subsystem, dim: usize) -> Result<Self> {
        let basis = (0..dim)
            .map(|k| StateVector::basis(dim, k))
            .collect::<Result<Vec<_>>>()?;
        Self::from_basis(subsystem, &basis)
    }

    /// The same projectors acting on the other tensor factor.
    pub fn on(self, subsystem: Subsystem) -> Self {
        Self { subsystem, ..self }
    }

    pub fn subsystem(&self) -> Subsystem {
        self.subsystem
    }

    pub fn projectors(&self) -> &[ComplexMatrix] {
        &self.projectors
    }

    /// Dimension of the measured subsystem.
    pub fn dim(&self) -> usize {
        self.projectors[0].rows()
    }

    pub fn outcomes(&self) -> usize {
        self.projectors.len()
    }

    /// Ranks of the projectors, in order.
    pub fn ranks(&self) -> Vec<usize> {
        self.projectors
            .iter()
            .map(|p| p.trace().map(|t| t.re.round() as usize).unwrap_or(0))
            .collect()
    }

    /// Conjugates every projector, `P ↦ U P U†`.
    pub fn conjugated_by(&self, u: &ComplexMatrix) -> Result<Self> {
        let ud = u.dagger();
        let projectors = self
            .projectors
            .iter()
            .map(|p| u.matmul(p)?.matmul(&ud))
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.subsystem, projectors)
    }

    pub(crate) fn check_against(&self, rho: &DensityOperator) -> Result<()> {
        let expected = rho.dims().of(self.subsystem);
        if self.dim() != expected {
            return Err(crate::error::mismatch(
                format!("{:?} subsystem of dimension {expected}", self.subsystem),
                format!("measurement of dimension {}", self.dim()),
            ));
        }
        Ok(())
    }
}

/// Probabilities of the outcomes of a measurement.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutcomeDistribution {
    pub labels: Vec<String>,
    pub probabilities: Vec<f64>,
}

impl OutcomeDistribution {
    /// Validates the sum (to 1e-10) and lower bound (−1e-12), then clamps tiny
    /// negative round-off to zero.
    pub fn new(labels: Vec<String>, probabilities: Vec<f64>) -> Result<Self> {
        if labels.len() != probabilities.len() {
            return Err(Error::InvalidDistribution(format!(
                "{} labels for {} probabilities",
                labels.len(),
                probabilities.len()
            )));
        }
        if probabilities.is_empty() {
            return Err(Error::InvalidDistribution("empty".into()));
        }
        let total: f64 = probabilities.iter().sum();
        if !total.is_finite() || (total - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidDistribution(format!("sum is {total}")));
        }
        if let Some(p) = probabilities.iter().find(|&&p| p < -1e-12) {
            return Err(Error::InvalidDistribution(format!("negative probability {p}")));
        }
        let probabilities = probabilities.into_iter().map(|p| p.max(0.0)).collect();
        Ok(Self {
            labels,
            probabilities,
        })
    }

    /// Labels outcomes by index.
    pub fn indexed(probabilities: Vec<f64>) -> Result<Self> {
        let labels = (0..probabilities.len()).map(|i| i.to_string()).collect();
        Self::new(labels, probabilities)
    }

    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::C64;

    #[test]
    fn computational_measurement_is_valid() {
        let m = ProjectiveMeasurement::computational(Subsystem::First, 3).unwrap();
        assert_eq!(m.outcomes(), 3);
        assert_eq!(m.ranks(), vec![1, 1, 1]);
    }

    #[test]
    fn rejects_incomplete_family() {
        let h = StateVector::basis(2, 0).unwrap();
        let err = ProjectiveMeasurement::from_basis(Subsystem::First, &[h]).unwrap_err();
        assert!(matches!(err, Error::InvalidMeasurement(ref m) if m.contains("sum")));
    }

    #[test]
    fn rejects_non_orthogonal_family() {
        let h = StateVector::basis(2, 0).unwrap();
        let d = StateVector::normalize(vec![C64::new(1.0, 0.0), C64::new(1.0, 0.0)]).unwrap();
        let err = ProjectiveMeasurement::from_basis(Subsystem::First, &[h, d]).unwrap_err();
        assert!(matches!(err, Error::InvalidMeasurement(ref m) if m.contains("orthogonal")));
    }

    #[test]
    fn rejects_non_idempotent() {
        let half = ComplexMatrix::identity(2).scale(0.5.into());
        let err = ProjectiveMeasurement::new(Subsystem::First, vec![half.clone(), half]).unwrap_err();
        assert!(matches!(err, Error::InvalidMeasurement(ref m) if m.contains("idempotent")));
    }

    #[test]
    fn rejects_empty_and_mixed_sizes() {
        assert!(ProjectiveMeasurement::new(Subsystem::First, vec![]).is_err());
        let err = ProjectiveMeasurement::new(
            Subsystem::First,
            vec![ComplexMatrix::identity(2), ComplexMatrix::identity(3)],
        );
        assert!(err.is_err());
    }

    #[test]
    fn distribution_clamps_round_off() {
        let d = OutcomeDistribution::indexed(vec![1.0 + 5e-13, -5e-13]).unwrap();
        assert_eq!(d.probabilities[1], 0.0);
        assert!(OutcomeDistribution::indexed(vec![0.6, 0.6]).is_err());
        assert!(OutcomeDistribution::indexed(vec![1.1, -0.1]).is_err());
    }
}
