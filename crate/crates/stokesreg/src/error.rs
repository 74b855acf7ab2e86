//! Crate-wide error type.

use thiserror::Error;

use crate::interface::IterationTrace;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("root finding failed: {0}")]
    RootFinding(String),

    #[error("kernel evaluated at its singularity (target equals source)")]
    Singularity,

    #[error("smoothing derivation failed: {0}")]
    Derivation(String),

    #[error("usage error: {0}")]
    Usage(String),

    #[error("iteration failed to converge after {iterations} steps (last error {last_error:e})")]
    NonConvergence {
        iterations: usize,
        last_error: f64,
        trace: IterationTrace,
    },

    #[error("config parse error: {0}")]
    ConfigParse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
