use super::{embed, DensityOperator, OutcomeDistribution, ProjectiveMeasurement, Subsystem};
use crate::error::{mismatch, Error, Result};
use crate::linalg::ComplexMatrix;

/// Non-selective post-measurement state `Σᵢ Pᵢ ρ Pᵢ`, with each projector
/// embedded on its tagged subsystem.
pub fn lueders_channel(rho: &DensityOperator, m: &ProjectiveMeasurement) -> Result<DensityOperator> {
    m.check_against(rho)?;
    let dims = rho.dims();
    let n = dims.total();
    let mut out = ComplexMatrix::zeros(n, n);
    for p in m.projectors() {
        let big = embed(p, m.subsystem(), dims);
        out = out.add(&big.matmul(rho.matrix())?.matmul(&big)?)?;
    }
    DensityOperator::new(out, dims)
}

/// Born weights `pᵢ = Tr(Pᵢ ρ)`.
pub fn born_probabilities(
    rho: &DensityOperator,
    m: &ProjectiveMeasurement,
) -> Result<OutcomeDistribution> {
    m.check_against(rho)?;
    let probabilities = m
        .projectors()
        .iter()
        .map(|p| {
            let big = embed(p, m.subsystem(), rho.dims());
            Ok(big.matmul(rho.matrix())?.trace()?.re)
        })
        .collect::<Result<Vec<_>>>()?;
    OutcomeDistribution::indexed(probabilities)
}

/// `(U ⊗ I) ρ (U ⊗ I)†` or `(I ⊗ U) ρ (I ⊗ U)†`.
pub fn apply_local_unitary(
    rho: &DensityOperator,
    u: &ComplexMatrix,
    subsystem: Subsystem,
) -> Result<DensityOperator> {
    let dims = rho.dims();
    let expected = dims.of(subsystem);
    if !u.is_square() || u.rows() != expected {
        return Err(mismatch(
            format!("{expected}x{expected} unitary on {subsystem:?}"),
            format!("{}x{}", u.rows(), u.cols()),
        ));
    }
    let err = u.unitarity_error()?;
    if err > super::DENSITY_TOLERANCE {
        return Err(Error::NotUnitary(err));
    }
    let big = embed(u, subsystem, dims);
    let out = big.matmul(rho.matrix())?.matmul(&big.dagger())?;
    DensityOperator::new(out, dims)
}

/// `½ Σ |λₖ|` over the eigenvalues of `ρ − σ`, clamped to `[0, 1]`.
pub fn trace_distance(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(mismatch(rho.dim(), sigma.dim()));
    }
    let diff = rho.matrix().sub(sigma.matrix())?;
    let norm: f64 = diff.hermitian_eigenvalues()?.iter().map(|l| l.abs()).sum();
    Ok((0.5 * norm).clamp(0.0, 1.0))
}
