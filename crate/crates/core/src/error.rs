use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the simulator.
#[derive(Debug, Error)]
pub enum OttoError {
    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A configuration value violates a type invariant.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// The integrator produced a probability below the clamp tolerance.
    #[error(
        "integration step failed at t = {time} ms (step {step}, h = {step_size} ms): \
         p[{level}] = {value:e}"
    )]
    Integration {
        time: f64,
        step: usize,
        step_size: f64,
        level: usize,
        value: f64,
    },

    /// The limit-cycle iteration did not reach the requested tolerance.
    #[error("limit cycle did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    /// No stroke split balances the heating and cooling collision counts.
    #[error("closure unreachable: {0}")]
    Closure(String),

    #[error("I/O error on {}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error in {}: {message}", path.display())]
    Parse { path: PathBuf, message: String },
}

impl OttoError {
    /// Short machine-readable category, used for CLI exit reporting.
    pub fn category(&self) -> &'static str {
        match self {
            OttoError::Domain(_) => "domain",
            OttoError::Config(_) => "config",
            OttoError::Integration { .. } => "integration",
            OttoError::NoConvergence { .. } => "convergence",
            OttoError::Closure(_) => "closure",
            OttoError::Io { .. } => "io",
            OttoError::Parse { .. } => "parse",
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        OttoError::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, OttoError>;
