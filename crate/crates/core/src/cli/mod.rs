//! The `sghdg` command line tool: argument parsing, experiment drivers and
//! CSV/JSON/gnuplot emission. [`run`] does all the work so that the binary
//! is a thin wrapper and the drivers are testable in-process.

mod args;
pub mod commands;
mod config;
pub mod output;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

pub use args::{Cli, Command, Format};
pub use commands::{
    CompareRecord, ConvergenceRecord, ConvergenceRow, ResultRecord, SweepRecord, SweepRow,
    TauRecord,
};
pub use config::{RunConfig, SweepRange, MAX_DEGREE};

use crate::error::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_TOLERANCE: i32 = 4;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("cannot write {}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_validation() => EXIT_VALIDATION,
            CliError::Core(_) => EXIT_NUMERICAL,
            CliError::Io { .. } => EXIT_IO,
        }
    }
}

/// How a successful run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Ok,
    ToleranceExceeded,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Ok => EXIT_OK,
            Outcome::ToleranceExceeded => EXIT_TOLERANCE,
        }
    }
}

fn emit(out: Option<&Path>, stdout: &mut dyn Write, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io {
                path: PathBuf::from("<stdout>"),
                source,
            }),
    }
}

fn emit_plot(script: Option<&Path>, text: impl FnOnce() -> String) -> Result<(), CliError> {
    match script {
        Some(path) => fs::write(path, text()).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => Ok(()),
    }
}

pub fn run(cli: Cli, stdout: &mut dyn Write) -> Result<Outcome, CliError> {
    use commands::*;
    match cli.command {
        Command::Solve(a) => {
            let c = RunConfig::solve(&a)?;
            let r = solve(&c)?;
            let text = render(c.format.unwrap_or(Format::Json), &r, solve_csv);
            emit(c.out.as_deref(), stdout, &text)?;
        }
        Command::Tau(a) => {
            let r = tau(&a)?;
            let text = match a.output.format {
                None => tau_text(&r),
                Some(f) => render(f, &r, tau_csv),
            };
            emit(a.output.out.as_deref(), stdout, &text)?;
        }
        Command::SweepTau(a) => {
            let c = RunConfig::sweep(&a)?;
            let r = sweep(&c)?;
            let text = render(c.format.unwrap_or(Format::Csv), &r, sweep_csv);
            emit(c.out.as_deref(), stdout, &text)?;
            if let Some(data) = &c.out {
                let tau_k = r.reference.map(|t| t.tau);
                emit_plot(c.plot_script.as_deref(), || sweep_plot_script(data, tau_k))?;
            }
        }
        Command::Convergence(a) => {
            let c = RunConfig::convergence(&a)?;
            let r = convergence(&c)?;
            let text = render(c.format.unwrap_or(Format::Csv), &r, convergence_csv);
            emit(c.out.as_deref(), stdout, &text)?;
            if let Some(data) = &c.out {
                emit_plot(c.plot_script.as_deref(), || convergence_plot_script(data))?;
            }
        }
        Command::CompareSg(a) => {
            let c = RunConfig::compare(&a)?;
            let r = compare(&c)?;
            let text = match c.format {
                None => compare_text(&r),
                Some(f) => render(f, &r, compare_csv),
            };
            emit(c.out.as_deref(), stdout, &text)?;
            if !r.passed {
                return Ok(Outcome::ToleranceExceeded);
            }
        }
    }
    Ok(Outcome::Ok)
}
