//! Explicit index-loop reference implementations. These never call the
//! library's matrix products, Kronecker products or partial traces.

#![allow(dead_code)]

use nosig_core::C64;

/// Dense row-major square matrix as nested vectors.
pub type Dense = Vec<Vec<C64>>;

pub fn to_dense(m: &nosig_core::ComplexMatrix) -> Dense {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m[(i, j)]).collect())
        .collect()
}

/// `Σₖ (Pₖ ⊗ I) ρ (Pₖ ⊗ I)` with `(Pₖ ⊗ I)[(a,b),(c,d)] = Pₖ[a,c]·δ_bd`,
/// expanded entry by entry.
pub fn lueders_first(rho: &Dense, projectors: &[Dense], d1: usize, d2: usize) -> Dense {
    let n = d1 * d2;
    let mut out = vec![vec![C64::new(0.0, 0.0); n]; n];
    for p in projectors {
        for a in 0..d1 {
            for b in 0..d2 {
                for c in 0..d1 {
                    for d in 0..d2 {
                        let mut acc = C64::new(0.0, 0.0);
                        for k in 0..d1 {
                            for m in 0..d1 {
                                acc += p[a][k] * rho[k * d2 + b][m * d2 + d] * p[m][c];
                            }
                        }
                        out[a * d2 + b][c * d2 + d] += acc;
                    }
                }
            }
        }
    }
    out
}

/// `out[j][l] = Σᵢ ρ[(i,j)][(i,l)]`.
pub fn trace_out_first(rho: &Dense, d1: usize, d2: usize) -> Dense {
    let mut out = vec![vec![C64::new(0.0, 0.0); d2]; d2];
    for (j, row) in out.iter_mut().enumerate() {
        for (l, entry) in row.iter_mut().enumerate() {
            for i in 0..d1 {
                *entry += rho[i * d2 + j][i * d2 + l];
            }
        }
    }
    out
}

pub fn max_abs_diff(a: &Dense, b: &Dense) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Identity deviation computed entirely by the loops above.
pub fn identity_deviation(rho: &Dense, projectors: &[Dense], d1: usize, d2: usize) -> f64 {
    let after = lueders_first(rho, projectors, d1, d2);
    max_abs_diff(&trace_out_first(&after, d1, d2), &trace_out_first(rho, d1, d2))
}
