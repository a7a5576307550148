//! `storagecode`: build family elements, compute exact rates, verify codes and
//! the ideal-rate identities, and export matrices, graphs and codewords.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
//! 3 I/O error, 4 resource ceiling exceeded.

mod args;
mod commands;
mod table;

use std::process::ExitCode;

use clap::Parser;

use args::Cli;

/// Failure modes, each mapped to a fixed exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Resource(String),
    Failed(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
            CliError::Resource(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Io(m) | CliError::Resource(m) | CliError::Failed(m) => m,
        }
    }
}

impl From<storagecode::Error> for CliError {
    fn from(e: storagecode::Error) -> Self {
        if e.is_resource() {
            CliError::Resource(e.to_string())
        } else {
            CliError::Usage(e.to_string())
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    if let Some(max) = cli.max_arity {
        // read by the core crate's dense ceiling; set before any work starts
        std::env::set_var(storagecode::limits::MAX_ARITY_ENV, max.to_string());
    }
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
