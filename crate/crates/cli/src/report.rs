//! JSON report schema shared by every subcommand.
//!
//! See `docs/report.schema.json` for the machine-readable schema.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use nosig_core::verifier::DecoderSearch;
use nosig_core::{ComplexMatrix, Verdict, VerificationReport};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub manifest: RunManifest,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scenario_results: Option<ScenarioResults>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep_results: Option<SweepResults>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample_results: Option<CounterexampleResults>,
    pub aggregates: BTreeMap<String, f64>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub config: serde_json::Value,
    pub seed: Option<u64>,
    pub version: String,
    /// Wall-clock seconds; `null` unless timing was requested, so that
    /// reports from identical runs stay byte-identical.
    pub duration_seconds: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioResults {
    /// Joint state after the sender measures photon 1 (θ = 0).
    pub measured_joint: ComplexMatrix,
    /// Receiver state when the sender measures (θ = 0).
    pub receiver_bit1: ComplexMatrix,
    /// Receiver state when the sender does nothing (θ = 0).
    pub receiver_bit0: ComplexMatrix,
    pub per_theta: Vec<ThetaRow>,
    pub independent_phases: Vec<PhaseRow>,
    pub visibility_single_photon: f64,
    pub visibility_entangled: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThetaRow {
    pub theta: f64,
    /// Max entrywise deviation of the unmeasured joint state from the
    /// hand-built four-term operator.
    pub joint_deviation: f64,
    /// Max entrywise deviation of either receiver state from I/2.
    pub receiver_deviation: f64,
    pub trace_distance: f64,
    pub mutual_information_hv: f64,
    pub mutual_information_diagonal: f64,
    pub single_photon_plus: f64,
    pub entangled_plus: f64,
    pub purity_bit0: f64,
    pub purity_bit1: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseRow {
    pub phi_h: f64,
    pub phi_v: f64,
    pub trace_distance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResults {
    pub sweep: VerificationReport,
    pub adversarial: DecoderSearch,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleResults {
    pub channel: String,
    pub note: String,
    /// Receiver deviation when the EPR pair is post-selected on H.
    pub epr_deviation: f64,
    pub epr_receiver: ComplexMatrix,
    pub samples: usize,
    pub deviations: Vec<f64>,
    pub fraction_above_threshold: f64,
    pub threshold: f64,
}

impl Report {
    pub fn to_json(&self) -> serde_json::Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }
}
