//! Seeded random states, unitaries and measurements.
//!
//! All generators draw from [`SeededRng`] (ChaCha20), whose stream is fixed
//! for a given seed on every platform. Complex Gaussian entries are drawn real
//! part first, and matrices are filled column by column, so a rank-1 random
//! density operator and a random pure state built from the same seed coincide.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use super::{DensityOperator, Dims, ProjectiveMeasurement, Subsystem};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, StateVector, C64};

pub type SeededRng = ChaCha20Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    SeededRng::seed_from_u64(seed)
}

/// Derives an independent seed for task `index` from a parent seed
/// (SplitMix64 finalizer over the combined words).
pub fn child_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im)
}

/// `dim × cols` complex Gaussian matrix, returned as its columns.
fn gaussian_columns<R: Rng + ?Sized>(rng: &mut R, dim: usize, cols: usize) -> Vec<Vec<C64>> {
    (0..cols)
        .map(|_| (0..dim).map(|_| complex_normal(rng)).collect())
        .collect()
}

pub fn random_pure_state_with<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Result<StateVector> {
    if dim == 0 {
        return Err(Error::EmptyDimension);
    }
    let v = gaussian_columns(rng, dim, 1).remove(0);
    StateVector::normalize(v)
}

/// Normalized complex Gaussian vector; deterministic in `seed`.
pub fn random_pure_state(dim: usize, seed: u64) -> Result<StateVector> {
    random_pure_state_with(&mut seeded_rng(seed), dim)
}

/// `G G† / Tr(G G†)` for a `dim × rank` complex Gaussian `G`, annotated as a
/// single system.
pub fn random_density_with<R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    rank: usize,
) -> Result<DensityOperator> {
    if dim == 0 || rank == 0 {
        return Err(Error::EmptyDimension);
    }
    let cols = gaussian_columns(rng, dim, rank);
    let mut m = ComplexMatrix::zeros(dim, dim);
    for col in &cols {
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] += col[i] * col[j].conj();
            }
        }
    }
    let tr = m.trace()?.re;
    DensityOperator::new(m.scale((1.0 / tr).into()), Dims::single(dim))
}

pub fn random_density(dim: usize, rank: usize, seed: u64) -> Result<DensityOperator> {
    random_density_with(&mut seeded_rng(seed), dim, rank)
}

/// Haar-distributed unitary: Gram–Schmidt orthonormalization of the columns
/// of a complex Gaussian matrix.
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let columns = orthonormalize(gaussian_columns(rng, dim, dim));
    let mut u = ComplexMatrix::zeros(dim.max(1), dim.max(1));
    for (j, col) in columns.iter().enumerate() {
        for (i, &z) in col.iter().enumerate() {
            u[(i, j)] = z;
        }
    }
    u
}

/// Modified Gram–Schmidt with one re-orthogonalization pass.
fn orthonormalize(mut columns: Vec<Vec<C64>>) -> Vec<Vec<C64>> {
    for k in 0..columns.len() {
        let (done, rest) = columns.split_at_mut(k);
        let v = &mut rest[0];
        for _ in 0..2 {
            for q in done.iter() {
                let overlap: C64 = q.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
                v.iter_mut().zip(q).for_each(|(x, &qi)| *x -= overlap * qi);
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        v.iter_mut().for_each(|z| *z /= norm);
    }
    columns
}

/// Projective measurement whose projectors span consecutive column groups
/// (sized by `ranks`) of a Haar-random unitary. Tagged as acting on the first
/// subsystem; use [`ProjectiveMeasurement::on`] to retarget.
pub fn random_projective_measurement_with<R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    ranks: &[usize],
) -> Result<ProjectiveMeasurement> {
    if dim == 0 || ranks.contains(&0) || ranks.iter().sum::<usize>() != dim {
        return Err(Error::InvalidPartition {
            ranks: ranks.to_vec(),
            dim,
        });
    }
    let u = haar_unitary(rng, dim);
    if ranks.len() == 1 {
        // The only complete single-outcome family is the identity itself.
        return ProjectiveMeasurement::new(Subsystem::First, vec![ComplexMatrix::identity(dim)]);
    }
    let mut projectors = Vec::with_capacity(ranks.len());
    let mut start = 0;
    for &r in ranks {
        let mut p = ComplexMatrix::zeros(dim, dim);
        for k in start..start + r {
            for i in 0..dim {
                for j in 0..dim {
                    p[(i, j)] += u[(i, k)] * u[(j, k)].conj();
                }
            }
        }
        projectors.push(p);
        start += r;
    }
    ProjectiveMeasurement::new(Subsystem::First, projectors)
}

pub fn random_projective_measurement(
    dim: usize,
    ranks: &[usize],
    seed: u64,
) -> Result<ProjectiveMeasurement> {
    random_projective_measurement_with(&mut seeded_rng(seed), dim, ranks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_dimensional_state_has_unit_modulus() {
        for seed in 0..10 {
            let s = random_pure_state(1, seed).unwrap();
            assert!((s.amplitudes()[0].norm() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn fixed_seed_is_byte_stable() {
        let a = random_pure_state(4, 42).unwrap();
        let b = random_pure_state(4, 42).unwrap();
        let bits = |s: &StateVector| -> Vec<(u64, u64)> {
            s.amplitudes().iter().map(|z| (z.re.to_bits(), z.im.to_bits())).collect()
        };
        assert_eq!(bits(&a), bits(&b));
        assert_ne!(bits(&a), bits(&random_pure_state(4, 43).unwrap()));
    }

    #[test]
    fn norms_over_many_seeds() {
        for seed in 0..1000 {
            let s = random_pure_state(4, seed).unwrap();
            let n: f64 = s.amplitudes().iter().map(|z| z.norm_sqr()).sum();
            assert!((n - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn scalar_density() {
        let rho = random_density(1, 1, 5).unwrap();
        assert!((rho.matrix()[(0, 0)] - C64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn rank_one_density_matches_pure_state() {
        for seed in [0, 1, 99] {
            let rho = random_density(5, 1, seed).unwrap();
            let psi = random_pure_state(5, seed).unwrap();
            let pure = DensityOperator::from_state(&psi, Dims::single(5)).unwrap();
            assert!(rho.matrix().approx_eq(pure.matrix(), 1e-14));
        }
    }

    #[test]
    fn density_eigenvalues_non_negative() {
        for seed in 0..1000 {
            let rho = random_density(8, 1 + (seed as usize % 8), seed).unwrap();
            assert!(rho.eigenvalues()[0] >= -1e-12);
        }
    }

    #[test]
    fn haar_unitary_is_unitary() {
        let mut rng = seeded_rng(3);
        for dim in [1, 2, 7, 32, 64] {
            assert!(haar_unitary(&mut rng, dim).unitarity_error().unwrap() < 1e-12);
        }
    }

    #[test]
    fn measurement_partitions() {
        let full = random_projective_measurement(3, &[3], 1).unwrap();
        assert_eq!(full.projectors()[0], ComplexMatrix::identity(3));

        let pair = random_projective_measurement(2, &[1, 1], 7).unwrap();
        assert_eq!(pair.ranks(), vec![1, 1]);
        let sum = pair.projectors()[0].add(&pair.projectors()[1]).unwrap();
        assert!(sum.approx_eq(&ComplexMatrix::identity(2), 1e-12));

        let blocks = random_projective_measurement(4, &[2, 2], 8).unwrap();
        for p in blocks.projectors() {
            assert!(p.matmul(p).unwrap().max_abs_diff(p).unwrap() <= 1e-10);
        }
        assert_eq!(blocks.ranks(), vec![2, 2]);
    }

    #[test]
    fn bad_partitions_rejected() {
        for ranks in [&[1, 1][..], &[2, 0, 1], &[]] {
            assert!(matches!(
                random_projective_measurement(3, ranks, 0),
                Err(Error::InvalidPartition { .. })
            ));
        }
    }

    #[test]
    fn child_seeds_differ() {
        let seeds: std::collections::HashSet<u64> = (0..1000).map(|i| child_seed(42, i)).collect();
        assert_eq!(seeds.len(), 1000);
        assert_ne!(child_seed(0, 0), child_seed(1, 0));
    }
}
