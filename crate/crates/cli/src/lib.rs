//! Command-line front end for the half-line NLS solver: configuration
//! parsing, data presets, the `solve`, `verify` and `converge` workflows and
//! their file outputs.

pub mod commands;
pub mod config;
pub mod output;
pub mod presets;

use thiserror::Error;

pub use config::RunConfig;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] halfline_nls::Error),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("verification failed: {0}")]
    Verify(String),
}

impl CliError {
    /// 2 for suspected blow-up, 3 for failed verification, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Core(halfline_nls::Error::BlowupSuspected(_)) => 2,
            Self::Verify(_) => 3,
            _ => 1,
        }
    }
}
