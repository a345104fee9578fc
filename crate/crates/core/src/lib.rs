//! Density-operator simulation of an entangled-photon signalling setup and a
//! randomized verifier for the no-signalling identity
//!
//! ```text
//! Tr₁[ Σᵢ (Pᵢ ⊗ I) ρ (Pᵢ ⊗ I) ] = Tr₁[ ρ ]
//! ```
//!
//! The crate is layered bottom-up:
//!
//! - [`linalg`]: dense complex matrices, tensor products and partial traces.
//! - [`quantum`]: validated density operators, projective measurements, the
//!   non-selective Lüders channel, Born statistics and seeded random states.
//! - [`optics`]: the polarization-entangled photon pair, the sender's
//!   measure/do-nothing choice and the receiver's phase optics.
//! - [`verifier`]: randomized sweeps of the identity above and
//!   information-theoretic witnesses at the receiver.
//!
//! Composite indices are system-1-major: basis state `|i⟩₁|j⟩₂` lives at
//! index `i * dim2 + j`.

pub mod error;
pub mod linalg;
pub mod optics;
pub mod quantum;
pub mod verifier;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, StateVector, C64};
pub use optics::{
    InterferenceInput, PhaseSetting, Polarization, Scenario, ScenarioStates, SenderBit,
};
pub use quantum::{
    DensityOperator, Dims, OutcomeDistribution, ProjectiveMeasurement, SeededRng, Subsystem,
};
pub use verifier::{Verdict, VerificationReport, VerifyConfig};
