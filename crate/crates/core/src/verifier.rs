//! Randomized verification of the no-signalling identity.
//!
//! For a joint state `ρ` and a projective measurement `{Pᵢ}` on system 1 the
//! receiver's reduced state is unchanged by the non-selective measurement:
//!
//! ```text
//! Tr₁[Σᵢ Pᵢ ρ Pᵢ] = Tr₁[Σᵢ Pᵢ² ρ] = Tr₁[Σᵢ Pᵢ ρ] = Tr₁[ρ]
//! ```
//!
//! (cyclicity of the partial trace over system-1 operators, idempotence, then
//! completeness). [`run_sweep`] checks this on seeded random instances;
//! [`receiver_mutual_information`] and [`adversarial_decoder_search`] check
//! that no receiver-side measurement learns anything about the sender's bit.
//! [`post_selected_collapse`] is the deliberately unphysical counterpart used
//! to show the checks are not vacuous.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optics::{run_scenario, PhaseSetting, Scenario, SenderBit};
use crate::quantum::{
    born_probabilities, child_seed, embed, lueders_channel, random_density_with,
    random_projective_measurement_with, random_pure_state_with, seeded_rng, trace_distance,
    DensityOperator, Dims, ProjectiveMeasurement, Subsystem,
};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Largest joint dimension `dim1 · dim2` accepted by a sweep.
pub const MAX_JOINT_DIM: usize = 64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub trials: usize,
    pub dim1: usize,
    pub dim2: usize,
    /// Rank lists for the system-1 measurement; trial `k` uses entry
    /// `k mod len`.
    pub rank_partitions: Vec<Vec<usize>>,
    pub seed: u64,
    pub tolerance: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self::new(1000, 2, 2, 0)
    }
}

impl VerifyConfig {
    /// Config covering every integer partition of `dim1`, at the default
    /// tolerance.
    pub fn new(trials: usize, dim1: usize, dim2: usize, seed: u64) -> Self {
        Self {
            trials,
            dim1,
            dim2,
            rank_partitions: integer_partitions(dim1),
            seed,
            tolerance: DEFAULT_TOLERANCE,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |field: &'static str, reason: String| Err(Error::InvalidConfig { field, reason });
        if self.trials == 0 {
            return bad("trials", "must be at least 1".into());
        }
        if self.dim1 < 2 {
            return bad("dim1", format!("must be at least 2, got {}", self.dim1));
        }
        if self.dim2 < 2 {
            return bad("dim2", format!("must be at least 2, got {}", self.dim2));
        }
        if self.dim1 * self.dim2 > MAX_JOINT_DIM {
            return bad(
                "dim1",
                format!(
                    "joint dimension {}x{} exceeds {MAX_JOINT_DIM}",
                    self.dim1, self.dim2
                ),
            );
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return bad("tolerance", format!("must be positive, got {}", self.tolerance));
        }
        if self.rank_partitions.is_empty() {
            return bad("rank_partitions", "no partitions given".into());
        }
        for ranks in &self.rank_partitions {
            if ranks.contains(&0) || ranks.iter().sum::<usize>() != self.dim1 {
                return Err(Error::InvalidPartition {
                    ranks: ranks.clone(),
                    dim: self.dim1,
                });
            }
        }
        Ok(())
    }
}

/// All partitions of `n` into positive parts, each in non-increasing order,
/// listed from `[n]` down to `[1, …, 1]`.
pub fn integer_partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, max_part: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=rest.min(max_part)).rev() {
            prefix.push(part);
            go(rest - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        go(n, n, &mut Vec::new(), &mut out);
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_ok(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn is_pass(self) -> bool {
        self == Verdict::Pass
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub index: usize,
    pub seed: u64,
    pub dims: Dims,
    pub partition: Vec<usize>,
    pub state_rank: usize,
    /// Entrywise max deviation between the receiver's reduced states with and
    /// without the sender's measurement.
    pub max_deviation: f64,
    pub trace_distance: f64,
    /// Bits a random rank-1 receiver measurement learns about whether the
    /// sender measured.
    pub mutual_information: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub config: VerifyConfig,
    pub trials: Vec<TrialRecord>,
    pub max_deviation: f64,
    pub trace_distance_max: f64,
    pub mutual_information_max: f64,
    pub verdict: Verdict,
}

/// Entrywise max deviation between the system-2 reduced states of `before`
/// and `after`.
pub fn signalling_deviation(before: &DensityOperator, after: &DensityOperator) -> Result<f64> {
    if before.dims() != after.dims() {
        return Err(crate::error::mismatch(
            format!("{:?}", before.dims()),
            format!("{:?}", after.dims()),
        ));
    }
    let a = before.trace_out(Subsystem::First)?;
    let b = after.trace_out(Subsystem::First)?;
    a.matrix().max_abs_diff(b.matrix())
}

/// `max |Tr₁[Σᵢ Pᵢ ρ Pᵢ] − Tr₁[ρ]|` entrywise; zero in exact arithmetic.
pub fn check_identity(rho: &DensityOperator, m: &ProjectiveMeasurement) -> Result<f64> {
    if m.subsystem() != Subsystem::First {
        return Err(Error::InvalidMeasurement(
            "identity check needs a measurement on the first subsystem".into(),
        ));
    }
    let after = lueders_channel(rho, m)?;
    signalling_deviation(rho, &after)
}

fn run_trial(cfg: &VerifyConfig, index: usize) -> Result<TrialRecord> {
    let seed = child_seed(cfg.seed, index as u64);
    let mut rng = seeded_rng(seed);
    let dims = Dims::new(cfg.dim1, cfg.dim2);
    let partition = &cfg.rank_partitions[index % cfg.rank_partitions.len()];

    let state_rank = rng.random_range(1..=dims.total());
    let rho = random_density_with(&mut rng, dims.total(), state_rank)?.with_dims(dims)?;
    let m = random_projective_measurement_with(&mut rng, cfg.dim1, partition)?;
    let after = lueders_channel(&rho, &m)?;

    let max_deviation = signalling_deviation(&rho, &after)?;
    let before_rx = rho.trace_out(Subsystem::First)?;
    let after_rx = after.trace_out(Subsystem::First)?;
    let trace_distance = trace_distance(&before_rx, &after_rx)?;

    let decoder = random_projective_measurement_with(&mut rng, cfg.dim2, &vec![1; cfg.dim2])?;
    let p0 = born_probabilities(&before_rx, &decoder)?;
    let p1 = born_probabilities(&after_rx, &decoder)?;
    let mutual_information = mutual_information_uniform(&p0.probabilities, &p1.probabilities)?;

    Ok(TrialRecord {
        index,
        seed,
        dims,
        partition: partition.clone(),
        state_rank,
        max_deviation,
        trace_distance,
        mutual_information,
    })
}

/// Runs `cfg.trials` independent trials in parallel. Each trial draws from
/// its own child seed, so the report is identical regardless of scheduling.
pub fn run_sweep(cfg: &VerifyConfig) -> Result<VerificationReport> {
    cfg.validate()?;
    let trials = (0..cfg.trials)
        .into_par_iter()
        .map(|i| run_trial(cfg, i))
        .collect::<Result<Vec<_>>>()?;
    let max_of = |f: fn(&TrialRecord) -> f64| trials.iter().map(f).fold(0.0, f64::max);
    let max_deviation = max_of(|t| t.max_deviation);
    let trace_distance_max = max_of(|t| t.trace_distance);
    let mutual_information_max = max_of(|t| t.mutual_information);
    let verdict = Verdict::from_ok(
        max_deviation <= cfg.tolerance
            && trace_distance_max <= cfg.tolerance
            && mutual_information_max <= cfg.tolerance,
    );
    Ok(VerificationReport {
        config: cfg.clone(),
        trials,
        max_deviation,
        trace_distance_max,
        mutual_information_max,
        verdict,
    })
}

/// `I(bit; outcome)` in bits for a uniformly distributed bit with outcome
/// distributions `p0` and `p1`, using `0·log 0 = 0`. Clamped at zero.
pub fn mutual_information_uniform(p0: &[f64], p1: &[f64]) -> Result<f64> {
    if p0.len() != p1.len() {
        return Err(crate::error::mismatch(p0.len(), p1.len()));
    }
    // I = ½ KL(p0 ‖ m) + ½ KL(p1 ‖ m) with m the mixture; exactly zero when
    // p0 == p1.
    let kl_term = |p: f64, m: f64| if p > 0.0 { p * (p / m).log2() } else { 0.0 };
    let info: f64 = p0
        .iter()
        .zip(p1)
        .map(|(&a, &b)| {
            let m = 0.5 * (a + b);
            0.5 * (kl_term(a, m) + kl_term(b, m))
        })
        .sum();
    Ok(info.max(0.0))
}

/// Mutual information between the sender's bit and the outcome of `decoder`
/// on the receiver's photon, for receiver phases `phases`.
pub fn receiver_mutual_information_with_phases(
    phases: PhaseSetting,
    decoder: &ProjectiveMeasurement,
) -> Result<f64> {
    let mut conditionals = Vec::with_capacity(2);
    for bit in SenderBit::ALL {
        let rx = run_scenario(&Scenario::with_phases(bit, phases))?.receiver;
        conditionals.push(born_probabilities(&rx, &decoder.clone().on(Subsystem::First))?);
    }
    mutual_information_uniform(&conditionals[0].probabilities, &conditionals[1].probabilities)
}

/// [`receiver_mutual_information_with_phases`] for the symmetric phases
/// `(−θ, +θ)`.
pub fn receiver_mutual_information(theta: f64, decoder: &ProjectiveMeasurement) -> Result<f64> {
    receiver_mutual_information_with_phases(PhaseSetting::symmetric(theta), decoder)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecoderSearch {
    pub seed: u64,
    pub decoder_samples: usize,
    pub theta_count: usize,
    /// Largest mutual information (bits) over symmetric and independent
    /// phase settings.
    pub max_mutual_information: f64,
    /// Receiver phases at which the maximum was attained.
    pub phases_at_max: PhaseSetting,
    /// Rank-1 projective decoders only; POVMs are not searched.
    pub decoder_family: String,
}

/// Maximizes [`receiver_mutual_information`] over `decoder_samples` random
/// rank-(1,1) decoders and every angle in `theta_grid`. Each decoder is also
/// tried at one random independent `(φ_H, φ_V)` pair.
pub fn adversarial_decoder_search(
    theta_grid: &[f64],
    decoder_samples: usize,
    seed: u64,
) -> Result<DecoderSearch> {
    if decoder_samples == 0 {
        return Err(Error::InvalidConfig {
            field: "decoder_samples",
            reason: "must be at least 1".into(),
        });
    }
    if theta_grid.is_empty() {
        return Err(Error::InvalidConfig {
            field: "theta_grid",
            reason: "empty grid".into(),
        });
    }
    // Receiver states depend only on θ; evaluate them once per angle.
    let states = theta_grid
        .iter()
        .map(|&t| receiver_pair(PhaseSetting::symmetric(t)).map(|p| (t, p)))
        .collect::<Result<Vec<_>>>()?;
    let per_decoder = (0..decoder_samples)
        .into_par_iter()
        .map(|k| {
            let mut rng = seeded_rng(child_seed(seed, k as u64));
            let decoder = random_projective_measurement_with(&mut rng, 2, &[1, 1])?;
            let mut best = (0.0f64, PhaseSetting::symmetric(theta_grid[0]));
            for (theta, pair) in &states {
                let info = pair_information(pair, &decoder)?;
                if info > best.0 {
                    best = (info, PhaseSetting::symmetric(*theta));
                }
            }
            let two_pi = std::f64::consts::TAU;
            let phases = PhaseSetting::independent(
                rng.random_range(0.0..two_pi),
                rng.random_range(0.0..two_pi),
            );
            let info = pair_information(&receiver_pair(phases)?, &decoder)?;
            if info > best.0 {
                best = (info, phases);
            }
            Ok(best)
        })
        .collect::<Result<Vec<_>>>()?;
    let (max_mutual_information, phases_at_max) = per_decoder
        .into_iter()
        .fold((0.0, PhaseSetting::symmetric(theta_grid[0])), |acc, x| if x.0 > acc.0 { x } else { acc });
    Ok(DecoderSearch {
        seed,
        decoder_samples,
        theta_count: theta_grid.len(),
        max_mutual_information,
        phases_at_max,
        decoder_family: "projective rank-(1,1)".into(),
    })
}

fn receiver_pair(phases: PhaseSetting) -> Result<[DensityOperator; 2]> {
    let rx = |bit| run_scenario(&Scenario::with_phases(bit, phases)).map(|s| s.receiver);
    Ok([rx(SenderBit::Bit0)?, rx(SenderBit::Bit1)?])
}

fn pair_information(pair: &[DensityOperator; 2], decoder: &ProjectiveMeasurement) -> Result<f64> {
    let p0 = born_probabilities(&pair[0], decoder)?;
    let p1 = born_probabilities(&pair[1], decoder)?;
    mutual_information_uniform(&p0.probabilities, &p1.probabilities)
}

/// Selective, renormalized collapse onto one outcome,
/// `Pₖ ρ Pₖ / Tr(Pₖ ρ)`, with no sum over outcomes. This is post-selection,
/// not a physical operation available to the sender.
pub fn post_selected_collapse(
    rho: &DensityOperator,
    m: &ProjectiveMeasurement,
    outcome: usize,
) -> Result<DensityOperator> {
    let p = m.projectors().get(outcome).ok_or_else(|| {
        Error::InvalidMeasurement(format!("outcome {outcome} of {}", m.outcomes()))
    })?;
    let big = embed(p, m.subsystem(), rho.dims());
    let collapsed = big.matmul(rho.matrix())?.matmul(&big)?;
    let weight = collapsed.trace()?.re;
    if weight <= 1e-14 {
        return Err(Error::ZeroProbability);
    }
    DensityOperator::new(collapsed.scale((1.0 / weight).into()), rho.dims())
}

/// Receiver deviations produced by post-selecting outcome 0 of a random
/// rank-1 measurement on system 1, for `samples` random pure states at dims
/// (4, 4).
pub fn collapse_deviations(samples: usize, seed: u64) -> Result<Vec<f64>> {
    let dims = Dims::new(4, 4);
    (0..samples)
        .map(|k| {
            let mut rng = seeded_rng(child_seed(seed, k as u64));
            let psi = random_pure_state_with(&mut rng, dims.total())?;
            let rho = DensityOperator::from_state(&psi, dims)?;
            let m = random_projective_measurement_with(&mut rng, dims.first, &[1; 4])?;
            let collapsed = post_selected_collapse(&rho, &m, 0)?;
            signalling_deviation(&rho, &collapsed)
        })
        .collect()
}
