//! Library side of the `fracdyn` command-line tool.
//!
//! Everything the binary does lives here so the flag parsers, report
//! builders, and command drivers stay testable (and fuzzable) without
//! spawning a process.

pub mod commands;
pub mod config;
pub mod output;
pub mod report;

/// Process exit codes used by the binary.
pub mod exit_code {
    pub const SUCCESS: i32 = 0;
    /// Configuration or flag-value parse failure (clap uses 2 as well).
    pub const CONFIG: i32 = 2;
    /// The integrated trajectory diverged.
    pub const DIVERGED: i32 = 3;
    /// The gain sweep found no admissible interval.
    pub const EMPTY_INTERVAL: i32 = 4;
    /// Anything else (I/O, numerical failure).
    pub const FAILURE: i32 = 1;
}

/// Errors surfaced by the command drivers, each mapped to one exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Diverged(String),
    #[error("no admissible gain interval in the swept range: {0}")]
    EmptyInterval(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => exit_code::CONFIG,
            CliError::Diverged(_) => exit_code::DIVERGED,
            CliError::EmptyInterval(_) => exit_code::EMPTY_INTERVAL,
            CliError::Io(_) => exit_code::FAILURE,
            CliError::Numeric(_) => exit_code::FAILURE,
        }
    }
}

impl From<fracdyn::Error> for CliError {
    fn from(e: fracdyn::Error) -> Self {
        match e {
            fracdyn::Error::Contract(msg) => CliError::Config(msg),
            fracdyn::Error::Diverged { .. } => CliError::Diverged(e.to_string()),
            fracdyn::Error::Numeric(msg) => CliError::Numeric(msg),
        }
    }
}
