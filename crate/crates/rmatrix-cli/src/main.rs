//! `rmatrix` command-line tool.
//!
//! Exit codes: 0 all checks pass, 1 a check failed, 2 usage or configuration
//! error, 3 evaluation error (singular or branch-unsafe parameter point).

mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;
use thiserror::Error;

use args::{Cli, Command};
use commands::Outcome;
use rmatrix::TableStore;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Lib(#[from] rmatrix::Error),
    #[error("{0}: {1}")]
    Io(String, #[source] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl From<rmatrix::EvalError> for CliError {
    fn from(e: rmatrix::EvalError) -> Self {
        CliError::Lib(e.into())
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib(e) if e.is_evaluation() => 3,
            _ => 2,
        }
    }
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let store = TableStore::load()?;
    match &cli.command {
        Command::Emit(a) => commands::emit(a, &store),
        Command::Verify(a) => commands::verify(a, &store),
        Command::Projectors(a) => commands::projectors(a, &store),
        Command::Limits(a) => commands::limits(a, &store),
        Command::Bench(a) => commands::bench(a, &store),
        Command::ValidateTables(a) => commands::validate_tables(a, &store),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
