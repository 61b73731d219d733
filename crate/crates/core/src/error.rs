use thiserror::Error;

use crate::IntegralResult;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("numerical error: {0}")]
    Numerical(String),

    #[error("domain error: {0}")]
    Domain(String),

    /// The requested tolerance was not reached within the evaluation budget.
    #[error("no convergence: {message} (partial value {}, error estimate {})", partial.value, partial.error_estimate)]
    Convergence {
        message: String,
        partial: IntegralResult,
    },

    /// A threshold inequality could not be decided because its margin sits
    /// inside the numerical error band.
    #[error("ambiguous threshold at N = {level}: margin {margin:e} vs error band {error_band:e}")]
    AmbiguousThreshold {
        level: u64,
        margin: f64,
        error_band: f64,
    },

    #[error("polynomial vanishes numerically on every sample")]
    ZeroPolynomial,

    #[error("search space estimate {estimate:e} exceeds budget {budget:e}; largest feasible radius is {feasible_radius:.3}")]
    Budget {
        estimate: f64,
        budget: f64,
        feasible_radius: f64,
    },

    #[error("sampling error: {0}")]
    Sampling(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn dim(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }

    pub(crate) fn num(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
