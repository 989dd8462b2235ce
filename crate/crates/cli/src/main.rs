//! `heat-content`: closed-form heat content coefficients, the heat equation
//! oracle and the invariant suites from the command line.
//!
//! Exit codes: 0 ok, 1 verification failure, 2 config or I/O error,
//! 3 math-domain error (for example a boundary operator with an eigenvalue on
//! the imaginary axis).

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use heat_content::suites::Suite;

use commands::{cmd_coeffs, cmd_compare, cmd_simulate, cmd_verify, load, Failure};

#[derive(Debug, Parser)]
#[command(name = "heat-content", version, about = "Heat content asymptotics under spectral boundary conditions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Closed-form β₀, β₁, β₂ with the interior/boundary split.
    Coeffs {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Solve the heat equation and write β(t) as CSV.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
        /// Refine the radial grid, e.g. `2x`.
        #[arg(long, default_value = "1x", value_parser = parse_grid)]
        grid: usize,
    },
    /// Run an invariant suite over the built-in fixtures.
    Verify {
        #[arg(long)]
        suite: Suite,
    },
    /// Fit the oracle curve and compare with the closed form.
    Compare {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long, default_value = "1x", value_parser = parse_grid)]
        grid: usize,
    },
}

fn parse_grid(s: &str) -> Result<usize, String> {
    let factor = s.strip_suffix('x').unwrap_or(s);
    match factor.parse::<usize>() {
        Ok(k) if k >= 1 => Ok(k),
        _ => Err(format!("expected a refinement factor like 2x, got {s:?}")),
    }
}

fn run(cli: Cli) -> Result<bool, Failure> {
    match cli.command {
        Command::Coeffs { config, json } => cmd_coeffs(&load(&config)?, json.as_deref()),
        Command::Simulate { config, csv, json, grid } => {
            cmd_simulate(&load(&config)?, csv.as_deref(), json.as_deref(), grid)
        }
        Command::Verify { suite } => cmd_verify(suite),
        Command::Compare { config, json, grid } => cmd_compare(&load(&config)?, json.as_deref(), grid),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            eprintln!("{f}");
            ExitCode::from(f.exit_code())
        }
    }
}
