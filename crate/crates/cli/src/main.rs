//! `epw`: batch verification runs over EPW sextics with JSON reports.

mod commands;
mod input;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use crate::report::{CliError, Outcome};

#[derive(Parser, Debug)]
#[command(name = "epw", version, about = "Exact computations with EPW sextics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: GlobalArgs,
}

#[derive(clap::Args, Debug, Clone)]
pub struct GlobalArgs {
    /// Seed for every sampled object.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Prime for F_p; implies `--field Fp` unless `--field Q` is given.
    #[arg(long, global = true)]
    pub prime: Option<u64>,
    /// Field for sampled objects.
    #[arg(long, global = true, value_enum)]
    pub field: Option<FieldArg>,
    /// Lagrangian JSON input (a bare Lagrangian or a `sample` report).
    #[arg(long = "in", global = true)]
    pub input: Option<PathBuf>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Compact single-line JSON instead of pretty-printed JSON.
    #[arg(long, global = true)]
    pub json: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldArg {
    #[value(name = "Q")]
    Q,
    #[value(name = "Fp")]
    Fp,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum MukaiMode {
    Septic,
    Quadrics,
    Multiplicity,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Seeded graph Lagrangian.
    Sample,
    /// Lagrangian test and the decomposable/corank certificates.
    Check {
        #[arg(long, default_value_t = 3)]
        decomposable_prime: u64,
        #[arg(long, default_value_t = 5)]
        corank_prime: u64,
    },
    /// Sextic equation of Y_A.
    Sextic {
        /// Also run the 20x20 determinant route.
        #[arg(long)]
        cross_check: bool,
    },
    /// Corank histogram over all of P^5(F_p).
    Strata,
    /// The annihilator A-perp in the dual space.
    Dual,
    /// Tangent hyperplanes and dual points at sampled smooth points.
    VerifyDuality {
        #[arg(long, default_value_t = 8)]
        points: usize,
    },
    /// Quadratic cones at corank-2 points over F_p.
    LocalModels {
        #[arg(long, default_value_t = 64)]
        limit: usize,
    },
    /// Chern series of F and the class of W_A.
    Chern,
    /// Quadric-route checks.
    Mukai {
        #[arg(long, value_enum)]
        mode: MukaiMode,
    },
    /// Antisymmetric forms vanishing on the witness fibers.
    SymplecticUnique,
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
    match commands::run(&cli.command, &cli.global) {
        Ok(Outcome { report, passed }) => {
            if let Err(e) = report::emit(&report, &cli.global) {
                eprintln!("error: {e}");
                return ExitCode::from(e.exit_code());
            }
            if passed {
                ExitCode::SUCCESS
            } else {
                eprintln!("verification failed");
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

impl From<epw_core::Error> for CliError {
    fn from(e: epw_core::Error) -> Self {
        CliError::Core(e)
    }
}
