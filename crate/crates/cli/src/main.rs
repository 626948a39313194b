//! `prodloop`: resolvent tables, cumulants, map counts, Monte Carlo and checks.

mod artifacts;
mod commands;
mod render;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};

use artifacts::RunDir;
use commands::{DensityArgs, MapsArgs, MomentsArgs, MonteCarloArgs, SolveArgs};
use verify::VerifyArgs;

#[derive(Parser, Debug)]
#[command(name = "prodloop", version, about = "Loop equations for the product of two Ginibre matrices")]
struct Cli {
    /// Base directory; each run writes to a fresh time-stamped subdirectory
    #[arg(long, global = true, env = "PRODLOOP_OUT", default_value = "prodloop-out")]
    out: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve the loop equations up to a given 2g-2+n
    Solve(SolveArgs),
    /// Extract cumulants by residues and check the closed-form conjectures
    Moments(MomentsArgs),
    /// Count bicolored maps by genus
    EnumerateMaps(MapsArgs),
    /// Sample Ginibre products and estimate trace cumulants
    Montecarlo(MonteCarloArgs),
    /// Tabulate the limiting eigenvalue density
    Density(DensityArgs),
    /// Run the exact checks (and the Monte Carlo ladder with --full)
    Verify(VerifyArgs),
}

fn dispatch(cli: &Cli) -> Result<bool> {
    let (name, args) = match &cli.command {
        Command::Solve(a) => ("solve", serde_json::to_value(a)?),
        Command::Moments(a) => ("moments", serde_json::to_value(a)?),
        Command::EnumerateMaps(a) => ("enumerate-maps", serde_json::to_value(a)?),
        Command::Montecarlo(a) => ("montecarlo", serde_json::to_value(a)?),
        Command::Density(a) => ("density", serde_json::to_value(a)?),
        Command::Verify(a) => ("verify", serde_json::to_value(a)?),
    };
    let mut run = RunDir::create(&cli.out, name, args)?;
    let result = match &cli.command {
        Command::Solve(a) => commands::solve(a, &mut run),
        Command::Moments(a) => commands::moments(a, &mut run),
        Command::EnumerateMaps(a) => commands::maps(a, &mut run),
        Command::Montecarlo(a) => commands::montecarlo(a, &mut run),
        Command::Density(a) => commands::density(a, &mut run),
        Command::Verify(a) => verify::verify(a, &mut run),
    };
    let ok = matches!(result, Ok(true));
    let dir = run.finish(ok)?;
    println!("output: {}", dir.display());
    result
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
