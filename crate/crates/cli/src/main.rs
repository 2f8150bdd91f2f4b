//! Command-line front end: full-pipeline analysis of a problem file, the
//! built-in counterexample run, branch tracing, and derivative validation.
//!
//! Exit codes: 0 success (a refutation is a successful analysis outcome),
//! 2 invalid input, 3 numerical or validation failure.

mod example;
mod pipeline;
mod problem;
mod report;
mod trace_cmd;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ballmin::stationary::MultistartConfig;
use ballmin::validate::validate_problem;
use ballmin::Error;

use example::{first_failure, render as render_example, run_example};
use pipeline::{run_analysis, PipelineOptions};
use problem::ProblemFile;
use report::{real, render_text, to_json};
use trace_cmd::{run_trace, TraceOptions};

#[derive(Debug)]
pub struct CliError {
    message: String,
    exit: u8,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        Self { message: message.into(), exit: 2 }
    }

    pub fn numerical(message: impl Into<String>) -> Self {
        Self { message: message.into(), exit: 3 }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidInput(_)
            | Error::DimensionMismatch { .. }
            | Error::SuspectedContinuum { .. } => Self::input(e.to_string()),
            Error::SingularJacobian
            | Error::NewtonDiverged(_)
            | Error::SingularShiftedHessian => Self::numerical(e.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "ballmin",
    version,
    about = "Stationary pairs, dual curvature, and global-optimality certificates \
             for concave minimization over the unit ball"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Seed for multistart and ball sampling
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of multistart points (default scales with dimension)
    #[arg(long)]
    starts: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full analysis pipeline on a problem file
    Analyze {
        /// Problem file (JSON: {"dimension": n, "polynomial": [{"c":..., "p":[...]}]})
        problem: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
        /// Newton convergence tolerance
        #[arg(long)]
        tol: Option<f64>,
        /// Oracle grid points per axis
        #[arg(long)]
        grid: Option<usize>,
        /// Certificate sampling radius
        #[arg(long)]
        radius: Option<f64>,
        /// Use the relaxed (semidefinite, enlarged-ball) certificate
        #[arg(long)]
        relaxed: bool,
        /// Emit the machine-readable report
        #[arg(long)]
        json: bool,
    },
    /// Run the built-in quartic counterexample and assert its known values
    Example {
        #[command(flatten)]
        common: CommonArgs,
        /// Override every assertion tolerance
        #[arg(long)]
        tol: Option<f64>,
        /// Emit the machine-readable report and assertion list
        #[arg(long)]
        json: bool,
    },
    /// Trace the stationary branch through one pair and print a plot-ready table
    Trace {
        problem: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
        /// Index of the stationary pair to trace
        #[arg(long, default_value_t = 0)]
        pair: usize,
        /// Multiplier window as LO,HI (defaults to a relative window around the pair)
        #[arg(long, value_parser = parse_window)]
        rho_window: Option<(f64, f64)>,
        /// Grid step in the multiplier
        #[arg(long)]
        step: Option<f64>,
    },
    /// Cross-check derivatives and branch identities for a problem file
    Validate {
        problem: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
        /// Emit the machine-readable check list
        #[arg(long)]
        json: bool,
    },
}

fn parse_window(s: &str) -> Result<(f64, f64), String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err("expected LO,HI".into());
    }
    let lo: f64 = parts[0].trim().parse().map_err(|e| format!("bad LO: {e}"))?;
    let hi: f64 = parts[1].trim().parse().map_err(|e| format!("bad HI: {e}"))?;
    Ok((lo, hi))
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Analyze { problem, common, tol, grid, radius, relaxed, json } => {
            let started = std::time::Instant::now();
            let file = ProblemFile::load(&problem)?;
            let poly = file.to_polynomial()?;
            let opts = PipelineOptions {
                seed: common.seed,
                starts: common.starts,
                newton_tol: tol,
                grid_points: grid,
                radius,
                relaxed,
            };
            let report = run_analysis(&poly, file, &opts)?;
            if json {
                println!("{}", to_json(&report));
            } else {
                print!("{}", render_text(&report));
            }
            eprintln!("analysis took {:.1} ms", started.elapsed().as_secs_f64() * 1e3);
            Ok(())
        }
        Command::Example { common, tol, json } => {
            let opts = PipelineOptions {
                seed: common.seed,
                starts: common.starts,
                ..PipelineOptions::default()
            };
            let run = run_example(&opts, tol)?;
            print!("{}", render_example(&run, json));
            if json {
                println!();
            }
            match first_failure(&run) {
                None => Ok(()),
                Some(name) => Err(CliError::numerical(format!("assertion failed: {name}"))),
            }
        }
        Command::Trace { problem, common, pair, rho_window, step } => {
            let file = ProblemFile::load(&problem)?;
            let poly = file.to_polynomial()?;
            let opts = TraceOptions {
                seed: common.seed,
                starts: common.starts,
                pair_index: pair,
                rho_window,
                step,
            };
            print!("{}", run_trace(&poly, &opts)?);
            Ok(())
        }
        Command::Validate { problem, common, json } => {
            let file = ProblemFile::load(&problem)?;
            let poly = file.to_polynomial()?;
            let mut ms = MultistartConfig::for_dimension(poly.dimension());
            ms.seed = common.seed;
            if let Some(starts) = common.starts {
                ms.start_count = starts;
            }
            let report = validate_problem(&poly, &ms)?;
            if json {
                println!("{}", to_json(&report));
            } else {
                for check in &report.checks {
                    println!(
                        "{}: {} (error {}, tolerance {})",
                        if check.passed { "PASS" } else { "FAIL" },
                        check.name,
                        real(check.error),
                        real(check.tolerance)
                    );
                }
            }
            if report.all_passed() {
                Ok(())
            } else {
                Err(CliError::numerical("validation checks failed"))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.exit)
        }
    }
}
