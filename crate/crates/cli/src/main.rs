use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use nosig_cli::commands::{self, DecoderSettings};
use nosig_cli::Report;
use nosig_core::verifier::DEFAULT_TOLERANCE;
use nosig_core::VerifyConfig;

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

/// Reproduce the entangled-photon signalling calculation and verify the
/// no-signalling identity on random instances.
#[derive(Parser, Debug)]
#[command(name = "nosig", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(clap::Args, Debug)]
struct Output {
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Record wall-clock duration in the JSON manifest (breaks byte-identical
    /// reruns).
    #[arg(long)]
    timing: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate both sender choices over a phase grid and check the receiver
    /// cannot tell them apart.
    Reproduce {
        #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u64).range(2..))]
        theta_steps: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Randomized sweep of the no-signalling identity plus a decoder search.
    Verify {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 2)]
        dim1: usize,
        #[arg(long, default_value_t = 2)]
        dim2: usize,
        /// Overridden by NOSIG_SEED when set.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tolerance: f64,
        /// Rank partition of dim1, e.g. `2,1,1`; repeatable. Defaults to all
        /// partitions.
        #[arg(long = "partition", value_delimiter = ';')]
        partitions: Vec<String>,
        #[arg(long, default_value_t = 500)]
        decoder_samples: usize,
        #[arg(long, default_value_t = 32)]
        decoder_thetas: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Show that post-selected collapse would let the receiver see the
    /// sender's choice.
    CounterexampleDemo {
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// Overridden by NOSIG_SEED when set.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Internal(String),
}

impl From<nosig_core::Error> for Failure {
    fn from(e: nosig_core::Error) -> Self {
        use nosig_core::Error::*;
        match e {
            InvalidConfig { .. } | InvalidPartition { .. } => Failure::Usage(e.to_string()),
            other => Failure::Internal(other.to_string()),
        }
    }
}

fn seed_override(flag: u64) -> Result<u64, Failure> {
    match std::env::var("NOSIG_SEED") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("invalid configuration field `seed`: NOSIG_SEED={v:?} is not an unsigned integer"))),
        Err(_) => Ok(flag),
    }
}

fn parse_partition(s: &str) -> Result<Vec<usize>, Failure> {
    s.split(',')
        .map(|p| p.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| Failure::Usage(format!("invalid configuration field `partition`: {s:?}")))
}

fn emit(report: &mut Report, out: &Output, started: Instant) -> Result<(), Failure> {
    let elapsed = started.elapsed().as_secs_f64();
    let body = match out.format {
        Format::Json => {
            if out.timing {
                report.manifest.duration_seconds = Some(elapsed);
            }
            report
                .to_json()
                .map_err(|e| Failure::Internal(format!("serializing report: {e}")))?
        }
        Format::Text => {
            let mut r = report.clone();
            r.manifest.duration_seconds = Some(elapsed);
            commands::render_text(&r)
        }
    };
    match &out.output {
        Some(path) => write_report(path, &body),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn write_report(path: &Path, body: &str) -> Result<(), Failure> {
    std::fs::write(path, body)
        .map_err(|e| Failure::Usage(format!("cannot write report to {}: {e}", path.display())))?;
    eprintln!("report written to {}", path.display());
    Ok(())
}

fn run(cli: Cli) -> Result<Report, Failure> {
    let started = Instant::now();
    let (mut report, out) = match cli.command {
        Command::Reproduce { theta_steps, out } => (commands::reproduce(theta_steps as usize)?, out),
        Command::Verify {
            trials,
            dim1,
            dim2,
            seed,
            tolerance,
            partitions,
            decoder_samples,
            decoder_thetas,
            out,
        } => {
            let mut cfg = VerifyConfig::new(trials, dim1, dim2, seed_override(seed)?);
            cfg.tolerance = tolerance;
            if !partitions.is_empty() {
                cfg.rank_partitions = partitions
                    .iter()
                    .map(|p| parse_partition(p))
                    .collect::<Result<_, _>>()?;
            }
            let decoders = DecoderSettings {
                samples: decoder_samples,
                thetas: decoder_thetas,
            };
            (commands::verify(&cfg, decoders)?, out)
        }
        Command::CounterexampleDemo { samples, seed, out } => {
            (commands::counterexample_demo(samples, seed_override(seed)?)?, out)
        }
    };
    emit(&mut report, &out, started)?;
    Ok(report)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(report) if report.verdict.is_pass() => ExitCode::SUCCESS,
        Ok(_) => {
            eprintln!("verdict: FAIL");
            ExitCode::from(EXIT_FAIL)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_FAIL)
        }
    }
}
