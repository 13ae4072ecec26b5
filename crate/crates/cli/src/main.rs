#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! `hbac` command-line front end.
//!
//! Exit codes: 0 success, 1 invalid input, 2 non-convergence or best-effort result.

mod cmd;
mod output;
mod plot;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use hbac::config::Config;

use output::{Format, Output};

#[derive(Parser, Debug)]
#[command(
    name = "hbac",
    version,
    about = "Heat-bath algorithmic cooling toolkit"
)]
struct Cli {
    /// TOML config; the built-in malonic-acid reference when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Seed for randomized searches; overrides the config value.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Partner-pairing cooling trajectories and asymptotic limits.
    Ppa(cmd::ppa::Args),
    /// Swap-transfer timing and toggling-frame average Hamiltonian.
    Spin(cmd::spin::Args),
    /// Strongly-modulating pulse search for a register gate.
    Pulse(cmd::pulse::Args),
    /// Six-step protocol with the error model, optionally fitted to data.
    Experiment(cmd::experiment::Args),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Done,
    BestEffort,
}

fn run(cli: Cli) -> Result<Status> {
    let mut config = match &cli.config {
        Some(path) => Config::from_path(path)?,
        None => Config::reference(),
    };
    if let Some(seed) = cli.seed {
        config.pulse.optimizer.seed = seed;
    }
    let name = match cli.command {
        Command::Ppa(_) => "ppa",
        Command::Spin(_) => "spin",
        Command::Pulse(_) => "pulse",
        Command::Experiment(_) => "experiment",
    };
    let out = Output::new(&cli.out, cli.format, name, &config)
        .with_context(|| format!("cannot write to {}", cli.out.display()))?;
    match cli.command {
        Command::Ppa(args) => cmd::ppa::run(&args, &config, &out),
        Command::Spin(args) => cmd::spin::run(&args, &config, &out),
        Command::Pulse(args) => cmd::pulse::run(&args, &config, &out),
        Command::Experiment(args) => cmd::experiment::run(&args, &config, &out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(Status::Done) => ExitCode::SUCCESS,
        Ok(Status::BestEffort) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
