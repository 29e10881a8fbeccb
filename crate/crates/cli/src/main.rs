//! `fenton-minimax`: solve, cross-check and verify sum-of-translates minimax
//! problems from a JSON config.

mod commands;
mod config;
mod error;
mod sweep;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use commands::{Overrides, Sink};
use config::{Command, Format, RunConfig};
use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "fenton-minimax", version, about)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// Run configuration (JSON, "schema": 1). Optional for `verify`.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Grid step of the brute-force oracle.
    #[arg(long)]
    h: Option<f64>,
    /// Check id to run; repeatable.
    #[arg(long = "check")]
    checks: Vec<String>,
    /// Run every registered check.
    #[arg(long)]
    all: bool,
    /// Trials per configuration, overriding each check's default.
    #[arg(long)]
    trials: Option<usize>,
    /// Replace the field by its upper semicontinuous regularization.
    #[arg(long)]
    usc_regularize: bool,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let config = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None if cli.command == Command::Verify => RunConfig::empty(),
        None => return Err(CliError::Config("--config is required".into())),
    };
    if let Some(c) = config.command {
        if c != cli.command {
            return Err(CliError::Config(format!(
                "config is for {c:?} but {:?} was requested",
                cli.command
            )));
        }
    }
    let sink = Sink {
        path: cli.output.clone().or_else(|| config.output.path.clone()),
        format: cli
            .format
            .or(config.output.format)
            .unwrap_or_else(|| commands::default_format(cli.command)),
    };
    let o = Overrides {
        seed: cli.seed,
        h: cli.h,
        checks: cli.checks,
        all: cli.all,
        trials: cli.trials,
        usc_regularize: cli.usc_regularize,
    };
    match cli.command {
        Command::Solve => commands::run_solve(&config, &o, &sink),
        Command::Oracle => commands::run_oracle(&config, &o, &sink),
        Command::Verify => commands::run_verify(&config, &o, &sink),
        Command::Sweep => commands::run_sweep(&config, &o, &sink),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
