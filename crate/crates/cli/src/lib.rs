//! Library side of the `secrecy-relay` command-line tool: configuration,
//! sweep orchestration, discrete-channel runs, and file emission. The
//! binary in `main.rs` is a thin clap wrapper over these functions.

pub mod config;
pub mod dmc_run;
pub mod emit;
pub mod sweep;

use thiserror::Error;

/// CLI-facing error classes, mapped to process exit codes.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numerical error: {0}")]
    Numerical(String),
    #[error("io error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl From<secrecy_relay::Error> for CliError {
    fn from(e: secrecy_relay::Error) -> Self {
        use secrecy_relay::Error as E;
        match e {
            E::Validation(_) | E::Contract(_) | E::Geometry(_) => CliError::Config(e.to_string()),
            E::NumericalDomain(_) | E::Infeasible(_) | E::Budget(_) => {
                CliError::Numerical(e.to_string())
            }
        }
    }
}
