//! Command-line front end for the moderated-community replicator model.

mod commands;
mod config;
mod output;
mod svg;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{Options, Scenario};

/// Exit code 2 marks configuration problems, 3 runtime failures.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Runtime(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(msg) | CliError::Runtime(msg) => f.write_str(msg),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Runtime(_) => 3,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "modgame",
    version,
    about = "Replicator dynamics of a moderated online community: equilibria, trajectories, basins, portraits, and parameter sweeps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List all nine equilibrium candidates with stability classification
    Equilibria(Options),
    /// Integrate one trajectory and label its omega limit
    Simulate(Options),
    /// Label the omega limit of every grid cell over the open unit box
    Basin(Options),
    /// Sample the vector field on a grid (optionally rendering an SVG)
    Portrait(Options),
    /// Evaluate the regime predicates over a parameter grid
    Sweep(Options),
}

fn run(cli: Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Equilibria(opts) => commands::equilibria::run(&Scenario::resolve(opts)?),
        Command::Simulate(opts) => commands::simulate::run(&Scenario::resolve(opts)?),
        Command::Basin(opts) => commands::basin::run(&Scenario::resolve(opts)?),
        Command::Portrait(opts) => commands::portrait::run(&Scenario::resolve(opts)?),
        Command::Sweep(opts) => commands::sweep::run(&Scenario::resolve(opts)?),
    }
}

fn main() -> ExitCode {
    // behave like a standard pipeline citizen when stdout closes early
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
