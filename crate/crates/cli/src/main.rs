//! Command-line front end: closed-form bound reports, parameter sweeps,
//! Monte Carlo runs, oracle verification and SVG plotting.
//!
//! Exit codes: 0 success, 2 configuration error, 3 domain error,
//! 4 bound/verification failure.

mod commands;
mod config;

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug, Parser)]
#[command(
    name = "covert-photon",
    version,
    about = "Covert optical communication bounds and simulation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Worker pool size (defaults to the number of cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate every applicable closed-form bound as a JSON report.
    Bounds {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Sweep covert throughput over a grid of (n, epsilon, delta) to CSV.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run Monte Carlo scenarios and check each against its analytic bound.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cross-check closed forms against independent numerical oracles.
    Verify {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Test hook: zero every tolerance so all checks fail.
        #[arg(long, hide = true)]
        corrupt_tolerances: bool,
    },
    /// Render a sweep CSV as a static SVG chart.
    Plot {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Input CSV (overrides the config's output.csv).
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Errors carrying their process exit code.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Domain(String),
    Check(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Domain(_) => 3,
            CliError::Check(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Domain(m) | CliError::Check(m) => m,
        }
    }
}

impl From<String> for CliError {
    fn from(message: String) -> Self {
        CliError::Config(message)
    }
}

impl From<covert_photon_core::bounds::BoundsError> for CliError {
    fn from(e: covert_photon_core::bounds::BoundsError) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl From<covert_photon_core::fock::FockError> for CliError {
    fn from(e: covert_photon_core::fock::FockError) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl From<covert_photon_core::sim::SimError> for CliError {
    fn from(e: covert_photon_core::sim::SimError) -> Self {
        CliError::Domain(e.to_string())
    }
}

/// Seed precedence: --seed flag, then config, then COVERT_PHOTON_SEED, then 0.
fn resolve_seed(flag: Option<u64>, from_config: Option<u64>) -> u64 {
    flag.or(from_config)
        .or_else(|| {
            std::env::var("COVERT_PHOTON_SEED")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        // Ignore a pool that is already initialized.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    let result = match cli.command {
        Command::Bounds { config, seed } => commands::bounds::run(&config, seed),
        Command::Sweep { config, out } => commands::sweep::run(&config, out.as_deref()),
        Command::Simulate {
            config,
            seed,
            trials,
            out,
        } => commands::simulate::run(&config, seed, trials, out.as_deref()),
        Command::Verify {
            config,
            corrupt_tolerances,
        } => commands::verify::run(config.as_deref(), corrupt_tolerances),
        Command::Plot { config, csv, out } => {
            commands::plot::run(config.as_deref(), csv.as_deref(), out.as_deref())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
