//! Library side of the `tcsfid` binary.

pub mod args;
pub mod commands;
pub mod report;
pub mod routes;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags or out-of-domain inputs.
    #[error("{0}")]
    Usage(String),
    /// A route failed to produce a valid number.
    #[error("{0}")]
    Numerical(String),
    /// Output already written, but a tolerance or convergence check failed.
    #[error("{0}")]
    Breach(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}
