//! `qutrit`: run channel experiments and write JSON/CSV results.
//!
//! Exit codes: 0 success, 1 verification failure, 2 configuration error, 3 routing error.

mod commands;
mod config;
mod verify;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::config::{ChoiMethod, CommonArgs, ExperimentConfig, Method};

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Routing(String),
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Routing(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Routing(m) => write!(f, "routing error: {m}"),
        }
    }
}

impl From<qutrit_core::Error> for CliError {
    fn from(e: qutrit_core::Error) -> Self {
        match e {
            qutrit_core::Error::Routing(m) => CliError::Routing(m),
            other => CliError::Config(other.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "qutrit",
    version,
    about = "Qutrit channel simulation, tomography and Choi reconstruction"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Channel outputs on the nine tomography inputs (apply.json)
    Apply {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_enum)]
        method: Option<Method>,
    },
    /// Choi matrix, its fidelity to the analytic one and its spectrum (choi.json)
    Choi {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long = "choi-method", value_enum)]
        choi_method: Option<ChoiMethod>,
    },
    /// Pairwise mixture fidelities of a stored Choi matrix (sweep.csv)
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
        /// choi.json written by the choi command, or a bare Choi JSON object
        #[arg(long = "choi-file")]
        choi_file: Option<PathBuf>,
        /// Number of mixing weights in [0, 1]
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Named circuits as JSON (circuits.json)
    Export {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run the invariant suite and print one line per check
    Verify {
        /// Coupling map for the routing checks
        #[arg(long, default_value = "ibmqx4")]
        coupling: String,
    },
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Apply { common, method } => {
            commands::cmd_apply(&ExperimentConfig::resolve(&common, method, None, None, None)?)?;
        }
        Command::Choi { common, choi_method } => {
            commands::cmd_choi(&ExperimentConfig::resolve(&common, None, choi_method, None, None)?)?;
        }
        Command::Sweep {
            common,
            choi_file,
            grid,
        } => {
            commands::cmd_sweep(&ExperimentConfig::resolve(&common, None, None, grid, choi_file)?)?;
        }
        Command::Export { common } => {
            commands::cmd_export(&ExperimentConfig::resolve(&common, None, None, None, None)?)?;
        }
        Command::Verify { coupling } => {
            let checks = verify::run_all(&coupling);
            for c in &checks {
                println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
            }
            let failed = checks.iter().filter(|c| !c.passed).count();
            println!("{} checks, {failed} failed", checks.len());
            return Ok(if failed == 0 { 0 } else { 1 });
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
