use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cvwave::config::{load_config, parse_config, Mode, RunConfig};
use cvwave::run::{run, validate};
use cvwave::validate::SuiteOptions;
use cvwave::CliError;

#[derive(Parser)]
#[command(
    name = "cvwave",
    version,
    about = "Periodic water waves with constant vorticity"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Configuration file (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Output directory, overriding `[output] dir`.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Time-integrate an initial state.
    Simulate(Common),
    /// Compute a family of traveling waves by continuation in amplitude.
    Steady(Common),
    /// Dump velocity, stream function and pressure on a lattice.
    Reconstruct(Common),
    /// Run the property suite and print a pass/fail report.
    Validate {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Reduced grid and shorter runs.
        #[arg(long)]
        quick: bool,
        /// Seed for the randomized checks.
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

fn load(common: &Common, mode: Mode) -> Result<RunConfig, CliError> {
    let mut config = load_config(&common.config)?;
    config.mode = mode;
    if let Some(out) = &common.out {
        config.output.dir = out.clone();
    }
    Ok(config)
}

fn main_inner(cli: Cli) -> Result<(), CliError> {
    let report = match cli.command {
        Command::Simulate(c) => run(&load(&c, Mode::Simulate)?)?,
        Command::Steady(c) => run(&load(&c, Mode::Steady)?)?,
        Command::Reconstruct(c) => run(&load(&c, Mode::Reconstruct)?)?,
        Command::Validate {
            config,
            quick,
            seed,
        } => {
            let config = match config {
                Some(path) => load_config(&path)?,
                None => parse_config("")?,
            };
            validate(&config, SuiteOptions { quick, seed })?
        }
    };
    for line in &report.lines {
        println!("{line}");
    }
    for f in &report.files {
        println!("wrote {}", f.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    match main_inner(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("cvwave: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
