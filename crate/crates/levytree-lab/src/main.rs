//! `levytree-lab` — run the laboratory's experiments from TOML configs.
//!
//! Exit codes: 0 success, 1 runtime failure (sampler/solver errors, I/O),
//! 2 schema failure (bad config, unknown experiment, malformed override).

mod artifacts;
mod config;
mod error;
mod experiments;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::error::CliError;

#[derive(Parser)]
#[command(name = "levytree-lab", version, about = "branching-mechanism laboratory runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment from a config file, with optional key=value overrides.
    Run {
        config: PathBuf,
        /// Dotted-key TOML overrides, e.g. `scales.replicates=50`.
        overrides: Vec<String>,
    },
    /// Check a config against the schema without running anything.
    Validate {
        config: PathBuf,
        overrides: Vec<String>,
    },
    /// List the registered experiments.
    ListExperiments,
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run { config, overrides } => {
            let cfg = config::load_config(&config, &overrides)?;
            let manifest = experiments::run(&cfg)?;
            println!("{}", manifest.display());
            Ok(())
        }
        Command::Validate { config, overrides } => {
            let cfg = config::load_config(&config, &overrides)?;
            println!("ok: {} ({})", cfg.experiment, config.display());
            Ok(())
        }
        Command::ListExperiments => {
            for (name, description, stochastic) in experiments::EXPERIMENTS {
                let tag = if *stochastic { "stochastic" } else { "deterministic" };
                println!("{name:<16} {tag:<13} {description}");
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
