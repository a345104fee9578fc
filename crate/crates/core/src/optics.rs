//! The entangled-photon signalling setup.
//!
//! A source emits the polarization pair `(|H⟩₁|V⟩₂ + |V⟩₁|H⟩₂)/√2`. The sender
//! either leaves photon 1 alone ([`SenderBit::Bit0`]) or measures it in the
//! H/V basis ([`SenderBit::Bit1`]). Photon 2 then crosses a polarizing beam
//! splitter whose two arms carry phase shifters; only the polarization degree
//! of freedom is modelled, so "route + shift" collapses to the diagonal
//! unitary `diag(e^{iφ_H}, e^{iφ_V})` on photon 2.
//!
//! Polarization basis convention: `H ↦ 0`, `V ↦ 1`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, StateVector, C64};
use crate::quantum::{
    apply_local_unitary, born_probabilities, lueders_channel, DensityOperator, Dims,
    OutcomeDistribution, ProjectiveMeasurement, Subsystem,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Polarization {
    H,
    V,
}

impl Polarization {
    pub const fn index(self) -> usize {
        match self {
            Polarization::H => 0,
            Polarization::V => 1,
        }
    }

    pub fn ket(self) -> StateVector {
        StateVector::basis(2, self.index()).expect("index < 2")
    }
}

/// The sender's choice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SenderBit {
    /// Photon 1 is left untouched.
    Bit0,
    /// Photon 1 is measured in the H/V basis.
    Bit1,
}

impl SenderBit {
    pub const ALL: [SenderBit; 2] = [SenderBit::Bit0, SenderBit::Bit1];
}

/// Phases attached to the H and V arms of the receiver's interferometer.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseSetting {
    pub h: f64,
    pub v: f64,
}

impl PhaseSetting {
    /// `φ_H = −θ`, `φ_V = +θ`.
    pub fn symmetric(theta: f64) -> Self {
        Self { h: -theta, v: theta }
    }

    pub fn independent(h: f64, v: f64) -> Self {
        Self { h, v }
    }

    fn check(&self) -> Result<()> {
        if self.h.is_finite() && self.v.is_finite() {
            Ok(())
        } else {
            Err(Error::InvalidConfig {
                field: "theta",
                reason: format!("phases must be finite, got ({}, {})", self.h, self.v),
            })
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub bit: SenderBit,
    pub phases: PhaseSetting,
}

impl Scenario {
    pub fn new(bit: SenderBit, theta: f64) -> Self {
        Self {
            bit,
            phases: PhaseSetting::symmetric(theta),
        }
    }

    pub fn with_phases(bit: SenderBit, phases: PhaseSetting) -> Self {
        Self { bit, phases }
    }
}

/// Joint two-photon state and the receiver's reduced state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioStates {
    pub joint: DensityOperator,
    pub receiver: DensityOperator,
}

/// `(|H⟩₁|V⟩₂ + |V⟩₁|H⟩₂)/√2`, amplitudes `(0, 1/√2, 1/√2, 0)`.
pub fn epr_state() -> StateVector {
    let h = Polarization::H.ket();
    let v = Polarization::V.ket();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let amplitudes = h
        .tensor(&v)
        .amplitudes()
        .iter()
        .zip(v.tensor(&h).amplitudes())
        .map(|(a, b)| (a + b) * s)
        .collect();
    StateVector::new(amplitudes).expect("EPR state is normalized")
}

pub fn epr_density() -> DensityOperator {
    DensityOperator::from_state(&epr_state(), Dims::new(2, 2)).expect("valid pure state")
}

/// `diag(e^{iφ_H}, e^{iφ_V})` in (H, V) ordering.
pub fn phase_shifter(phases: PhaseSetting) -> ComplexMatrix {
    ComplexMatrix::from_diagonal(&[C64::from_polar(1.0, phases.h), C64::from_polar(1.0, phases.v)])
}

/// `diag(e^{−iθ}, e^{+iθ})`: H picks up `e^{−iθ}`, V picks up `e^{+iθ}`.
pub fn phase_shifter_unitary(theta: f64) -> ComplexMatrix {
    phase_shifter(PhaseSetting::symmetric(theta))
}

/// `{|H⟩⟨H|, |V⟩⟨V|}`.
pub fn hv_measurement(subsystem: Subsystem) -> ProjectiveMeasurement {
    ProjectiveMeasurement::from_basis(subsystem, &[Polarization::H.ket(), Polarization::V.ket()])
        .expect("H/V basis is orthonormal")
}

/// `{(|H⟩ ± |V⟩)/√2}`, the 50/50 recombiner's output ports.
pub fn diagonal_measurement(subsystem: Subsystem) -> ProjectiveMeasurement {
    ProjectiveMeasurement::from_basis(subsystem, &diagonal_basis())
        .expect("diagonal basis is orthonormal")
}

fn diagonal_basis() -> [StateVector; 2] {
    let plus = StateVector::normalize(vec![1.0.into(), 1.0.into()]).expect("non-zero");
    let minus = StateVector::normalize(vec![1.0.into(), (-1.0).into()]).expect("non-zero");
    [plus, minus]
}

/// Evolves the EPR pair through the sender's choice and the receiver's phase
/// optics. For `Bit1` the H/V measurement on photon 1 is applied first.
pub fn run_scenario(s: &Scenario) -> Result<ScenarioStates> {
    s.phases.check()?;
    let source = epr_density();
    let sent = match s.bit {
        SenderBit::Bit0 => source,
        SenderBit::Bit1 => lueders_channel(&source, &hv_measurement(Subsystem::First))?,
    };
    let joint = apply_local_unitary(&sent, &phase_shifter(s.phases), Subsystem::Second)?;
    let receiver = joint.trace_out(Subsystem::First)?;
    Ok(ScenarioStates { joint, receiver })
}

/// Receiver's reduced state for the symmetric phase setting.
pub fn receiver_state(bit: SenderBit, theta: f64) -> Result<DensityOperator> {
    Ok(run_scenario(&Scenario::new(bit, theta))?.receiver)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InterferenceInput {
    /// `(|H⟩ + |V⟩)/√2` for a lone photon.
    SinglePhotonSuperposition,
    /// Photon 2 of the EPR pair with the sender doing nothing.
    EntangledReceiver,
}

/// Output-port statistics of the interferometer: phase shift, then
/// measurement in the diagonal basis. Outcome 0 is the `+` port.
pub fn interference_probabilities(input: InterferenceInput, theta: f64) -> Result<OutcomeDistribution> {
    let state = match input {
        InterferenceInput::SinglePhotonSuperposition => {
            let [plus, _] = diagonal_basis();
            let shifted = plus.apply(&phase_shifter_unitary(theta))?;
            DensityOperator::from_state(&shifted, Dims::single(2))?
        }
        InterferenceInput::EntangledReceiver => {
            PhaseSetting::symmetric(theta).check()?;
            receiver_state(SenderBit::Bit0, theta)?
        }
    };
    let p = born_probabilities(&state, &diagonal_measurement(Subsystem::First))?;
    OutcomeDistribution::new(vec!["+".into(), "-".into()], p.probabilities)
}

/// Fringe visibility `(p_max − p_min)/(p_max + p_min)` of outcome 0 over
/// `theta_grid`. The grid must cover at least `[0, π]`.
pub fn visibility(input: InterferenceInput, theta_grid: &[f64]) -> Result<f64> {
    let bad_grid = |reason: String| Error::InvalidConfig {
        field: "theta_grid",
        reason,
    };
    if theta_grid.is_empty() {
        return Err(bad_grid("empty grid".into()));
    }
    if theta_grid.iter().any(|t| !t.is_finite()) {
        return Err(bad_grid("non-finite angle".into()));
    }
    let lo = theta_grid.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = theta_grid.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi - lo < PI * (1.0 - 1e-9) {
        return Err(bad_grid(format!("grid spans [{lo}, {hi}], narrower than π")));
    }
    let mut p_min = f64::INFINITY;
    let mut p_max = f64::NEG_INFINITY;
    for &theta in theta_grid {
        let p = interference_probabilities(input, theta)?.probabilities[0];
        p_min = p_min.min(p);
        p_max = p_max.max(p);
    }
    if p_max + p_min == 0.0 {
        return Ok(0.0);
    }
    Ok((p_max - p_min) / (p_max + p_min))
}

/// `steps` equally spaced angles `k·2π/steps` over `[0, 2π)`.
pub fn theta_grid(steps: usize) -> Vec<f64> {
    (0..steps).map(|k| 2.0 * PI * k as f64 / steps as f64).collect()
}
