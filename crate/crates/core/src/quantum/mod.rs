//! Quantum states and channels on bipartite systems.
//!
//! Operators on a single subsystem (projectors, local unitaries) are stored on
//! that subsystem's space and embedded as `X ⊗ I` or `I ⊗ X` only when they are
//! applied to a joint state.

mod channel;
mod density;
mod measurement;
mod random;

use serde::{Deserialize, Serialize};

pub use channel::{apply_local_unitary, born_probabilities, lueders_channel, trace_distance};
pub use density::{DensityOperator, DENSITY_TOLERANCE};
pub use measurement::{OutcomeDistribution, ProjectiveMeasurement};
pub use random::{
    child_seed, haar_unitary, random_density, random_density_with, random_projective_measurement,
    random_projective_measurement_with, random_pure_state, random_pure_state_with, seeded_rng,
    SeededRng,
};

use crate::linalg::{tensor_product, ComplexMatrix};

/// Which tensor factor an operator acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Subsystem {
    First,
    Second,
}

/// Bipartite dimension annotation `(dim1, dim2)`; `dim2 = 1` marks a single
/// system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Dims {
    pub first: usize,
    pub second: usize,
}

impl Dims {
    pub const fn new(first: usize, second: usize) -> Self {
        Self { first, second }
    }

    pub const fn single(dim: usize) -> Self {
        Self::new(dim, 1)
    }

    pub const fn total(&self) -> usize {
        self.first * self.second
    }

    pub const fn of(&self, subsystem: Subsystem) -> usize {
        match subsystem {
            Subsystem::First => self.first,
            Subsystem::Second => self.second,
        }
    }
}

/// Lifts a subsystem operator to the joint space.
pub fn embed(op: &ComplexMatrix, subsystem: Subsystem, dims: Dims) -> ComplexMatrix {
    match subsystem {
        Subsystem::First => tensor_product(op, &ComplexMatrix::identity(dims.second)),
        Subsystem::Second => tensor_product(&ComplexMatrix::identity(dims.first), op),
    }
}
