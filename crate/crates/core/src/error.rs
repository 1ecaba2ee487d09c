use thiserror::Error;

/// Errors raised by the quadrature engine and the physical model.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("quadrature did not converge after {evaluations} evaluations (estimate {value}, error {error_estimate:e})")]
    NonConvergence {
        value: f64,
        error_estimate: f64,
        evaluations: usize,
    },

    #[error("non-finite value {value} encountered at {at}")]
    NonFinite { at: f64, value: f64 },

    #[error("the mass function is singular at x = {at}")]
    SingularPoint { at: f64 },

    #[error("argument {value} lies outside the domain: {reason}")]
    Domain { value: f64, reason: &'static str },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("density integrates to {integral}, not 1")]
    NotNormalized { integral: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
