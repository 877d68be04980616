use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("{what}: {value} is outside the valid domain ({expected})")]
    Domain {
        what: &'static str,
        value: f64,
        expected: &'static str,
    },

    /// An adaptive quadrature could not reach the requested tolerance.
    #[error("quadrature did not reach tolerance {requested:e} (achieved {achieved:e}, estimate {estimate})")]
    Quadrature {
        requested: f64,
        achieved: f64,
        estimate: f64,
    },

    /// The adaptive ODE integrator failed to advance.
    #[error("ODE integration failed at tau = {last_tau}: {reason}")]
    Ode { last_tau: f64, reason: String },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("invalid trace: {0}")]
    Validation(String),

    #[error("invalid time grid: {0}")]
    Grid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub(crate) fn domain(what: &'static str, value: f64, expected: &'static str) -> Error {
    Error::Domain {
        what,
        value,
        expected,
    }
}
