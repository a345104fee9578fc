use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde_json::json;

use nosig_core::optics::{
    diagonal_measurement, epr_density, hv_measurement, interference_probabilities, run_scenario,
    theta_grid, visibility,
};
use nosig_core::quantum::{lueders_channel, trace_distance};
use nosig_core::verifier::{
    adversarial_decoder_search, collapse_deviations, post_selected_collapse, receiver_mutual_information,
    run_sweep, signalling_deviation,
};
use nosig_core::{
    ComplexMatrix, InterferenceInput, PhaseSetting, Scenario, SenderBit, Subsystem, Verdict,
    VerifyConfig, C64,
};

use crate::report::{
    CounterexampleResults, PhaseRow, Report, RunManifest, ScenarioResults, SweepResults, ThetaRow,
    VERSION,
};

/// Bound on exact identities of hand-built states.
pub const EXACT_TOLERANCE: f64 = 1e-12;
/// Bound on visibilities.
pub const VISIBILITY_TOLERANCE: f64 = 1e-10;
/// Post-selection deviation that counts as detectable signalling.
pub const COLLAPSE_THRESHOLD: f64 = 0.1;

fn manifest(command: &str, config: serde_json::Value, seed: Option<u64>) -> RunManifest {
    RunManifest {
        command: command.into(),
        config,
        seed,
        version: VERSION.into(),
        duration_seconds: None,
    }
}

fn half_identity() -> ComplexMatrix {
    ComplexMatrix::identity(2).scale(C64::new(0.5, 0.0))
}

fn four_term(theta: f64) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(4, 4);
    m[(1, 1)] = C64::new(0.5, 0.0);
    m[(2, 2)] = C64::new(0.5, 0.0);
    m[(1, 2)] = C64::from_polar(0.5, 2.0 * theta);
    m[(2, 1)] = C64::from_polar(0.5, -2.0 * theta);
    m
}

pub fn reproduce(theta_steps: usize) -> nosig_core::Result<Report> {
    if theta_steps < 2 {
        return Err(nosig_core::Error::InvalidConfig {
            field: "theta_steps",
            reason: format!("must be at least 2, got {theta_steps}"),
        });
    }
    let grid = theta_grid(theta_steps);
    let measured_joint = lueders_channel(&epr_density(), &hv_measurement(Subsystem::First))?;
    let mut two_term = ComplexMatrix::zeros(4, 4);
    two_term[(1, 1)] = C64::new(0.5, 0.0);
    two_term[(2, 2)] = C64::new(0.5, 0.0);
    let measured_deviation = measured_joint.matrix().max_abs_diff(&two_term)?;

    let mut per_theta = Vec::with_capacity(grid.len());
    for &theta in &grid {
        let b0 = run_scenario(&Scenario::new(SenderBit::Bit0, theta))?;
        let b1 = run_scenario(&Scenario::new(SenderBit::Bit1, theta))?;
        let half = half_identity();
        per_theta.push(ThetaRow {
            theta,
            joint_deviation: b0.joint.matrix().max_abs_diff(&four_term(theta))?,
            receiver_deviation: b0
                .receiver
                .matrix()
                .max_abs_diff(&half)?
                .max(b1.receiver.matrix().max_abs_diff(&half)?),
            trace_distance: trace_distance(&b0.receiver, &b1.receiver)?,
            mutual_information_hv: receiver_mutual_information(theta, &hv_measurement(Subsystem::First))?,
            mutual_information_diagonal: receiver_mutual_information(
                theta,
                &diagonal_measurement(Subsystem::First),
            )?,
            single_photon_plus: interference_probabilities(InterferenceInput::SinglePhotonSuperposition, theta)?
                .probabilities[0],
            entangled_plus: interference_probabilities(InterferenceInput::EntangledReceiver, theta)?
                .probabilities[0],
            purity_bit0: b0.joint.purity(),
            purity_bit1: b1.joint.purity(),
        });
    }

    let mut independent_phases = Vec::with_capacity(grid.len());
    for (k, &phi_h) in grid.iter().enumerate() {
        let phi_v = grid[(5 * k + 3) % grid.len()];
        let phases = PhaseSetting::independent(phi_h, phi_v);
        let r0 = run_scenario(&Scenario::with_phases(SenderBit::Bit0, phases))?.receiver;
        let r1 = run_scenario(&Scenario::with_phases(SenderBit::Bit1, phases))?.receiver;
        independent_phases.push(PhaseRow {
            phi_h,
            phi_v,
            trace_distance: trace_distance(&r0, &r1)?,
        });
    }

    let visibility_single_photon = visibility(InterferenceInput::SinglePhotonSuperposition, &grid)?;
    let visibility_entangled = visibility(InterferenceInput::EntangledReceiver, &grid)?;

    let max_of = |f: fn(&ThetaRow) -> f64| per_theta.iter().map(f).fold(0.0, f64::max);
    let mut aggregates = BTreeMap::new();
    aggregates.insert("measured_joint_deviation".into(), measured_deviation);
    aggregates.insert("joint_deviation_max".into(), max_of(|r| r.joint_deviation));
    aggregates.insert("receiver_deviation_max".into(), max_of(|r| r.receiver_deviation));
    aggregates.insert("trace_distance_max".into(), max_of(|r| r.trace_distance));
    aggregates.insert(
        "independent_phase_trace_distance_max".into(),
        independent_phases.iter().map(|r| r.trace_distance).fold(0.0, f64::max),
    );
    aggregates.insert(
        "mutual_information_max".into(),
        max_of(|r| r.mutual_information_hv.max(r.mutual_information_diagonal)),
    );
    aggregates.insert("visibility_single_photon".into(), visibility_single_photon);
    aggregates.insert("visibility_entangled".into(), visibility_entangled);

    let exact_ok = [
        "measured_joint_deviation",
        "joint_deviation_max",
        "receiver_deviation_max",
        "trace_distance_max",
        "independent_phase_trace_distance_max",
        "mutual_information_max",
    ]
    .iter()
    .all(|k| aggregates[*k] <= EXACT_TOLERANCE);
    let verdict = Verdict::from_ok(
        exact_ok
            && (visibility_single_photon - 1.0).abs() <= VISIBILITY_TOLERANCE
            && visibility_entangled.abs() <= VISIBILITY_TOLERANCE,
    );

    let theta0 = |bit| run_scenario(&Scenario::new(bit, 0.0)).map(|s| s.receiver.into_matrix());
    Ok(Report {
        manifest: manifest("reproduce", json!({ "theta_steps": theta_steps }), None),
        scenario_results: Some(ScenarioResults {
            measured_joint: measured_joint.into_matrix(),
            receiver_bit1: theta0(SenderBit::Bit1)?,
            receiver_bit0: theta0(SenderBit::Bit0)?,
            per_theta,
            independent_phases,
            visibility_single_photon,
            visibility_entangled,
        }),
        sweep_results: None,
        counterexample_results: None,
        aggregates,
        verdict,
    })
}

/// Settings for the decoder search that accompanies a sweep.
#[derive(Clone, Copy, Debug)]
pub struct DecoderSettings {
    pub samples: usize,
    pub thetas: usize,
}

pub fn verify(cfg: &VerifyConfig, decoders: DecoderSettings) -> nosig_core::Result<Report> {
    cfg.validate()?;
    if decoders.thetas == 0 {
        return Err(nosig_core::Error::InvalidConfig {
            field: "decoder_thetas",
            reason: "must be at least 1".into(),
        });
    }
    let sweep = run_sweep(cfg)?;
    let adversarial = adversarial_decoder_search(&theta_grid(decoders.thetas), decoders.samples, cfg.seed)?;

    let mut aggregates = BTreeMap::new();
    aggregates.insert("max_deviation".into(), sweep.max_deviation);
    aggregates.insert("trace_distance_max".into(), sweep.trace_distance_max);
    aggregates.insert("mutual_information_max".into(), sweep.mutual_information_max);
    aggregates.insert(
        "adversarial_mutual_information_max".into(),
        adversarial.max_mutual_information,
    );
    let verdict = Verdict::from_ok(
        sweep.verdict.is_pass() && adversarial.max_mutual_information <= EXACT_TOLERANCE,
    );
    let config = json!({
        "trials": cfg.trials,
        "dim1": cfg.dim1,
        "dim2": cfg.dim2,
        "rank_partitions": cfg.rank_partitions,
        "seed": cfg.seed,
        "tolerance": cfg.tolerance,
        "decoder_samples": decoders.samples,
        "decoder_thetas": decoders.thetas,
    });
    Ok(Report {
        manifest: manifest("verify", config, Some(cfg.seed)),
        scenario_results: None,
        sweep_results: Some(SweepResults { sweep, adversarial }),
        counterexample_results: None,
        aggregates,
        verdict,
    })
}

pub const COLLAPSE_NOTE: &str = "UNPHYSICAL POST-SELECTION: the state is collapsed onto one \
outcome and renormalized without summing over outcomes. The receiver's reduced state then \
depends on the sender's choice, which is exactly what the non-selective measurement rules out.";

pub fn counterexample_demo(samples: usize, seed: u64) -> nosig_core::Result<Report> {
    if samples == 0 {
        return Err(nosig_core::Error::InvalidConfig {
            field: "samples",
            reason: "must be at least 1".into(),
        });
    }
    let epr = epr_density();
    let collapsed = post_selected_collapse(&epr, &hv_measurement(Subsystem::First), 0)?;
    let epr_deviation = signalling_deviation(&epr, &collapsed)?;
    let epr_receiver = collapsed.trace_out(Subsystem::First)?.into_matrix();

    let deviations = collapse_deviations(samples, seed)?;
    let above = deviations.iter().filter(|&&d| d > COLLAPSE_THRESHOLD).count();
    let fraction_above_threshold = above as f64 / samples as f64;

    let mut aggregates = BTreeMap::new();
    aggregates.insert("epr_deviation".into(), epr_deviation);
    aggregates.insert("fraction_above_threshold".into(), fraction_above_threshold);
    aggregates.insert(
        "min_deviation".into(),
        deviations.iter().copied().fold(f64::INFINITY, f64::min),
    );
    aggregates.insert("max_deviation".into(), deviations.iter().copied().fold(0.0, f64::max));

    Ok(Report {
        manifest: manifest(
            "counterexample-demo",
            json!({ "samples": samples, "seed": seed, "dims": [4, 4] }),
            Some(seed),
        ),
        scenario_results: None,
        sweep_results: None,
        counterexample_results: Some(CounterexampleResults {
            channel: "post-selected collapse rho -> P0 rho P0 / Tr(P0 rho)".into(),
            note: COLLAPSE_NOTE.into(),
            epr_deviation,
            epr_receiver,
            samples,
            deviations,
            fraction_above_threshold,
            threshold: COLLAPSE_THRESHOLD,
        }),
        aggregates,
        verdict: Verdict::from_ok(epr_deviation > COLLAPSE_THRESHOLD),
    })
}

fn fmt_matrix(m: &ComplexMatrix) -> String {
    let mut s = String::new();
    for i in 0..m.rows() {
        s.push_str("    [");
        for j in 0..m.cols() {
            let z = m[(i, j)];
            let _ = write!(s, " {:+.6}{:+.6}i", z.re, z.im);
        }
        s.push_str(" ]\n");
    }
    s
}

/// Human-readable rendering; shares every number with the JSON report.
pub fn render_text(report: &Report) -> String {
    let mut s = String::new();
    let m = &report.manifest;
    let _ = writeln!(s, "nosig {} {}", m.version, m.command);
    if let Some(seed) = m.seed {
        let _ = writeln!(s, "seed: {seed}");
    }
    if let Some(r) = &report.scenario_results {
        let _ = writeln!(s, "\nreceiver state, sender measures (theta = 0):\n{}", fmt_matrix(&r.receiver_bit1));
        let _ = writeln!(s, "receiver state, sender does nothing (theta = 0):\n{}", fmt_matrix(&r.receiver_bit0));
        let _ = writeln!(s, "{:>10} {:>12} {:>12} {:>12} {:>10} {:>10}", "theta", "trace_dist", "rx_dev", "MI(bits)", "p+ single", "p+ ent");
        for row in &r.per_theta {
            let _ = writeln!(
                s,
                "{:>10.6} {:>12.3e} {:>12.3e} {:>12.3e} {:>10.6} {:>10.6}",
                row.theta,
                row.trace_distance,
                row.receiver_deviation,
                row.mutual_information_hv.max(row.mutual_information_diagonal),
                row.single_photon_plus,
                row.entangled_plus
            );
        }
        let _ = writeln!(
            s,
            "\nvisibility: single photon {:.12}, entangled receiver {:.12}",
            r.visibility_single_photon, r.visibility_entangled
        );
    }
    if let Some(r) = &report.sweep_results {
        let cfg = &r.sweep.config;
        let _ = writeln!(
            s,
            "\nsweep: {} trials at dims ({}, {}), {} rank partitions, tolerance {:e}",
            cfg.trials,
            cfg.dim1,
            cfg.dim2,
            cfg.rank_partitions.len(),
            cfg.tolerance
        );
        let _ = writeln!(
            s,
            "decoder search: {} decoders x {} angles ({})",
            r.adversarial.decoder_samples, r.adversarial.theta_count, r.adversarial.decoder_family
        );
    }
    if let Some(r) = &report.counterexample_results {
        let _ = writeln!(s, "\nchannel: {}\n{}", r.channel, r.note);
        let _ = writeln!(s, "\nEPR pair post-selected on H, receiver state:\n{}", fmt_matrix(&r.epr_receiver));
        let _ = writeln!(s, "deviation: {:.6}", r.epr_deviation);
        let _ = writeln!(
            s,
            "random pure states at (4, 4): {:.1}% of {} samples exceed {}",
            100.0 * r.fraction_above_threshold,
            r.samples,
            r.threshold
        );
    }
    let _ = writeln!(s, "\naggregates:");
    for (k, v) in &report.aggregates {
        let _ = writeln!(s, "  {k:<40} {v:.6e}");
    }
    if let Some(d) = m.duration_seconds {
        let _ = writeln!(s, "duration: {d:.3} s");
    }
    let verdict = match report.verdict {
        Verdict::Pass => "PASS",
        Verdict::Fail => "FAIL",
    };
    let _ = writeln!(s, "verdict: {verdict}");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduce_passes_and_rejects_short_grid() {
        let r = reproduce(8).unwrap();
        assert!(r.verdict.is_pass());
        assert!(r.aggregates["trace_distance_max"] <= EXACT_TOLERANCE);
        assert!(reproduce(1).is_err());
    }

    #[test]
    fn verify_small_config() {
        let r = verify(&VerifyConfig::new(10, 2, 2, 1), DecoderSettings { samples: 5, thetas: 4 }).unwrap();
        assert!(r.verdict.is_pass());
        assert_eq!(r.manifest.seed, Some(1));
    }

    #[test]
    fn counterexample_exceeds_threshold() {
        let r = counterexample_demo(10, 0).unwrap();
        assert!(r.aggregates["epr_deviation"] > COLLAPSE_THRESHOLD);
        assert!(render_text(&r).contains("UNPHYSICAL POST-SELECTION"));
    }

    #[test]
    fn report_round_trips() {
        let r = verify(&VerifyConfig::new(5, 3, 2, 4), DecoderSettings { samples: 3, thetas: 3 }).unwrap();
        let back = Report::from_json(&r.to_json().unwrap()).unwrap();
        assert_eq!(back, r);
        let r = reproduce(4).unwrap();
        assert_eq!(Report::from_json(&r.to_json().unwrap()).unwrap(), r);
    }
}
