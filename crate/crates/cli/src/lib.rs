//! Library half of the `pcmap` command: argument types, command execution and
//! the CSV/JSON formats, kept here so tests can drive them without a process.

pub mod args;
pub mod commands;
pub mod output;

pub use args::{Cli, Command, Format};
pub use commands::{execute, run, Rendered};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] pcmap::Error),

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("{0}")]
    Usage(String),

    #[error("verification failed: {0}")]
    Failed(String),
}

impl CliError {
    /// 1 for numeric or verification failures, 2 for bad input, 3 when a
    /// parameter rule leaves the unit square.
    pub fn exit_code(&self) -> i32 {
        use pcmap::Error as E;
        match self {
            CliError::Core(E::RuleRange { .. }) => 3,
            CliError::Core(
                E::InvalidParameter { .. }
                | E::Domain { .. }
                | E::Degenerate { .. }
                | E::Precondition(_)
                | E::RuleParse(_),
            ) => 2,
            CliError::Usage(_) => 2,
            CliError::Core(E::NumericIntegrity(_) | E::SimplexViolation { .. }) => 1,
            CliError::Io(_) | CliError::Csv(_) | CliError::Json(_) | CliError::Failed(_) => 1,
        }
    }
}
