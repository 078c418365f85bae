//! Command-line front end: run one experiment, list the experiments, or
//! run the acceptance battery.  Exit status is zero exactly when every
//! executed check passed.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use tsaw::harness::acceptance::{run_acceptance, summary_lines};
use tsaw::harness::config::ExperimentConfig;
use tsaw::harness::experiments::run_experiment;
use tsaw::harness::EXPERIMENTS;

/// Self-repelling walk lab: simulation experiments and acceptance battery.
#[derive(Parser)]
#[command(name = "tsaw", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one named experiment and report its checks.
    Run {
        /// Experiment name; see `tsaw list`.
        experiment: String,
        /// JSON config file; defaults to the experiment's preset.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Master seed behind all replica randomness.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Directory for report.json, checks.csv, and CSV artifacts.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the experiment names.
    List,
    /// Run the acceptance battery.
    Verify {
        /// Skip the heaviest criterion (the local-limit pair).
        #[arg(long)]
        quick: bool,
        /// Master seed behind all replica randomness.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Directory for per-experiment outputs and the battery summary.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    match dispatch(Cli::parse().command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(command: Command) -> Result<bool, Box<dyn std::error::Error>> {
    match command {
        Command::Run { experiment, config, seed, out } => {
            let mut cfg = match config {
                Some(path) => ExperimentConfig::load(&path)?,
                None => ExperimentConfig::preset(&experiment)?,
            };
            cfg.experiment = experiment;
            let report = run_experiment(&cfg, seed, out.as_deref())?;
            if out.is_none() {
                print!("{}", report.to_json()?);
            } else {
                for check in &report.checks {
                    println!("{}: {}", check.name, if check.passed { "pass" } else { "FAIL" });
                }
            }
            eprintln!(
                "{} finished in {:.1}s: {}",
                report.experiment,
                report.wall_clock_seconds,
                if report.passed { "pass" } else { "FAIL" }
            );
            Ok(report.passed)
        }
        Command::List => {
            for name in EXPERIMENTS {
                println!("{name}");
            }
            Ok(true)
        }
        Command::Verify { quick, seed, out } => {
            let run = run_acceptance(seed, quick, out.as_deref())?;
            for line in summary_lines(&run) {
                println!("{line}");
            }
            println!("acceptance: {}", if run.passed { "pass" } else { "FAIL" });
            Ok(run.passed)
        }
    }
}
