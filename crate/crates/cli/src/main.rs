//! `cpolder` — thermal Casimir–Polder interaction energies between two
//! ground-state atoms, in free space or near a perfectly conducting wall.
//!
//! Four verbs:
//! - `sweep`: evaluate the interaction over a grid and emit CSV;
//! - `compare`: evaluate every applicable method side by side with
//!   pairwise deviations and tolerance flags;
//! - `regime`: explain the scale hierarchy of a single configuration;
//! - `selftest`: run the built-in quadrature closed forms, the oracle
//!   bootstrap gate, and the invariant smoke suite.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical failure
//! (partial output is still flushed, failed rows are marked), 4 self-test
//! failure.

mod config;
mod run;

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use config::{CliError, UnitsChoice};

#[derive(Parser)]
#[command(
    name = "cpolder",
    version,
    about = "Thermal Casimir-Polder interaction energies between ground-state atoms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum UnitsFlag {
    /// hbar = c = k_B = 1.
    Natural,
    /// Gaussian-cgs I/O (requires units.length_cm in the config).
    Cgs,
}

impl UnitsFlag {
    fn choice(self) -> UnitsChoice {
        match self {
            UnitsFlag::Natural => UnitsChoice::Natural,
            UnitsFlag::Cgs => UnitsChoice::Cgs,
        }
    }
}

#[derive(Args)]
struct RunArgs {
    /// Run configuration file (`section.key = value` lines).
    #[arg(long)]
    config: PathBuf,
    /// Worker threads for the sweep grid (default: available parallelism).
    #[arg(long)]
    jobs: Option<usize>,
    /// Output path; `-` writes to stdout.
    #[arg(long, default_value = "-")]
    out: String,
    /// Override the quadrature relative tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Override the configured unit system.
    #[arg(long, value_enum)]
    units: Option<UnitsFlag>,
    /// Stamp the output header with the generation time (off by default so
    /// repeated runs are byte-identical).
    #[arg(long)]
    timestamp: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the interaction over a sweep grid and emit CSV.
    Sweep(RunArgs),
    /// Evaluate every applicable method side by side and emit CSV.
    Compare(RunArgs),
    /// Explain the scale hierarchy and regime of a single configuration.
    Regime {
        /// Run configuration file (single point, no sweep block).
        #[arg(long)]
        config: PathBuf,
        /// Override the configured unit system.
        #[arg(long, value_enum)]
        units: Option<UnitsFlag>,
    },
    /// Run the oracle bootstrap gate and the invariant smoke suite.
    Selftest {
        /// Override the quadrature relative tolerance.
        #[arg(long)]
        tol: Option<f64>,
    },
}

fn read_config(path: &PathBuf, units: Option<UnitsFlag>) -> Result<config::RunConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        CliError::Config(format!("cannot read config file {}: {e}", path.display()))
    })?;
    config::parse(&text, units.map(UnitsFlag::choice))
}

fn write_output(out: &str, text: &str) -> Result<(), CliError> {
    if out == "-" {
        let mut stdout = std::io::stdout().lock();
        stdout
            .write_all(text.as_bytes())
            .and_then(|()| stdout.flush())
            .map_err(|e| CliError::Config(format!("cannot write to stdout: {e}")))
    } else {
        std::fs::write(out, text)
            .map_err(|e| CliError::Config(format!("cannot write output file {out}: {e}")))
    }
}

fn emit(output: run::RunOutput, out: &str) -> Result<(), CliError> {
    write_output(out, &output.text)?;
    if output.failures > 0 {
        return Err(CliError::Numerical(format!(
            "{} point(s) failed to converge; partial output was flushed with the failed rows \
             marked `error: …` in the note column",
            output.failures
        )));
    }
    Ok(())
}

fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Sweep(args) => {
            let cfg = read_config(&args.config, args.units)?;
            let output = run::sweep(&cfg, args.jobs, args.tol, args.timestamp)?;
            emit(output, &args.out)
        }
        Command::Compare(args) => {
            let cfg = read_config(&args.config, args.units)?;
            let output = run::compare(&cfg, args.jobs, args.tol, args.timestamp)?;
            emit(output, &args.out)
        }
        Command::Regime { config, units } => {
            let cfg = read_config(&config, units)?;
            let report = run::regime_report(&cfg)?;
            write_output("-", &report)
        }
        Command::Selftest { tol } => {
            let (report, ok) = run::selftest_report(tol);
            write_output("-", &report)?;
            if ok {
                Ok(())
            } else {
                Err(CliError::Selftest(
                    "one or more self-test checks failed; see the FAIL lines above".to_string(),
                ))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("cpolder: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
