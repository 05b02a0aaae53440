//! `chaoslab` — chaos-game experiments from JSON configs.
//!
//! Exit codes: 0 success, 1 criterion failure (a convergence check that did
//! not meet its tolerance), 2 usage or configuration error.

// `!(x > 0.0)` rejects NaN tolerances too; `x <= 0.0` would not.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod ppm;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, unreadable or invalid config, I/O trouble. Exit code 2.
    Usage(String),
    /// The experiment ran but failed its convergence criterion. Exit code 1.
    Criterion(String),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn criterion(msg: impl Into<String>) -> Self {
        CliError::Criterion(msg.into())
    }
}

#[derive(Parser)]
#[command(
    name = "chaoslab",
    version,
    about = "Chaos game laboratory for iterated function systems"
)]
struct Cli {
    /// Overrides the stream seed from the config (stochastic streams only).
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Render the pruned orbit tail as a binary PPM image.
    Render {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write a CSV convergence profile (K, hausdorff) against the
    /// deterministic attractor reference.
    Converge {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Emit symbols from the configured stream, one per line.
    Seqgen {
        #[arg(long)]
        config: PathBuf,
        /// How many symbols to emit.
        #[arg(long)]
        count: usize,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the data-driven chaos game on a string file: image plus
    /// occupancy histogram.
    Cgr {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Attractor/repeller escape experiment; writes a structured report.
    Rapunzel {
        #[arg(long, conflicts_with = "builtin")]
        config: Option<PathBuf>,
        /// Use a built-in system instead of a config: "mobius" or "affine".
        #[arg(long)]
        builtin: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Push the attractor reference through an address prefix; writes the
    /// fibre cloud as CSV and prints its diameter.
    Fibre {
        #[arg(long)]
        config: PathBuf,
        /// Comma-separated address symbols, e.g. "1,3,2".
        #[arg(long)]
        rho: String,
        #[arg(long)]
        out: PathBuf,
    },
}

fn configure_threads() {
    if let Ok(value) = std::env::var("CHAOSGAME_THREADS") {
        if let Ok(n) = value.trim().parse::<usize>() {
            if n >= 1 {
                // Ignore the error if a pool already exists.
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let seed = cli.seed;
    match &cli.command {
        Command::Render { config, out } => commands::cmd_render(config, out, seed),
        Command::Converge { config, out } => commands::cmd_converge(config, out, seed),
        Command::Seqgen { config, count, out } => {
            commands::cmd_seqgen(config, *count, out.as_deref(), seed)
        }
        Command::Cgr { config, out } => commands::cmd_cgr(config, out, seed),
        Command::Rapunzel {
            config,
            builtin,
            out,
        } => commands::cmd_rapunzel(config.as_ref(), builtin.as_deref(), out, seed),
        Command::Fibre { config, rho, out } => commands::cmd_fibre(config, rho, out, seed),
    }
}

fn main() -> ExitCode {
    configure_threads();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Criterion(msg)) => {
            eprintln!("criterion failure: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
