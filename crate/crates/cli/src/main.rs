mod args;
mod commands;
mod output;

use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use toric_ding::Error;

use args::{Cli, Command};

/// Failure classes, each with its own exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or unreadable, malformed or invalid input (exit 1).
    Usage(String),
    /// An identity or tolerance check failed (exit 2).
    Mismatch(String),
    /// A violated internal invariant (exit 3).
    Internal(String),
}

impl CliError {
    pub fn core(e: Error) -> Self {
        match e {
            Error::Mismatch(m) => CliError::Mismatch(m),
            Error::SingularGram | Error::LpUnbounded | Error::LpInfeasible | Error::Internal(_) => {
                CliError::Internal(e.to_string())
            }
            other => CliError::Usage(other.to_string()),
        }
    }

    /// Like [`CliError::core`], naming the offending file.
    pub fn from_core(e: Error, path: &Path) -> Self {
        match Self::core(e) {
            CliError::Usage(m) => CliError::Usage(format!("{}: {m}", path.display())),
            other => other,
        }
    }

    pub fn io(e: impl std::fmt::Display) -> Self {
        CliError::Internal(e.to_string())
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Mismatch(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "error: {m}"),
            CliError::Mismatch(m) => write!(f, "mismatch: {m}"),
            CliError::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let (report, common) = match &cli.command {
        Command::Analyze { common } => (commands::analyze(common)?, Some(common)),
        Command::TcEval { common, tc, rho } => (commands::tc_eval(common, tc, rho)?, Some(common)),
        Command::Reduce { common, tc, segment, samples } => {
            (commands::reduce(common, tc, segment.as_deref(), *samples)?, Some(common))
        }
        Command::NormalCone { common, grid, vertex } => {
            (commands::normal_cone(common, grid.as_deref(), vertex)?, Some(common))
        }
        Command::Oracle { common, tc, k_ladder, rho, tol } => {
            (commands::oracle(common, tc, k_ladder, rho.as_deref(), tol)?, Some(common))
        }
        Command::Corpus { name } => (commands::corpus_listing(name.as_deref())?, None),
    };
    let mut stdout = std::io::stdout().lock();
    stdout.write_all(report.stdout.as_bytes()).map_err(CliError::io)?;
    if let (Some(common), Some(plot)) = (common, &report.plot) {
        if let Some(path) = &common.emit_plot_data {
            fs::write(path, plot.to_csv(common.precision)?)
                .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
        }
    }
    match report.mismatch {
        Some(m) => Err(CliError::Mismatch(m)),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
