//! File formats, argument parsing and subcommands behind the `ringcurrent` binary.

pub mod args;
pub mod commands;
pub mod format;
pub mod modes;
pub mod output;

use std::fmt;

/// Failure of a subcommand, mapped onto the process exit status.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags or inputs; exit 2.
    Usage(String),
    /// Propagation, IO or verification failure; exit 1.
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) | CliError::Runtime(msg) => f.write_str(msg),
        }
    }
}

impl std::error::Error for CliError {}

pub type CliResult<T> = Result<T, CliError>;

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(format!("I/O error: {e}"))
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Runtime(format!("CSV error: {e}"))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Runtime(format!("manifest error: {e}"))
    }
}
