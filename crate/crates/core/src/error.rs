use thiserror::Error;

/// Errors produced while building or evaluating generators.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An input failed validation (non-Hermitian matrix, bad parameter, ...).
    #[error("validation error in {what}: {reason}")]
    Validation { what: String, reason: String },

    /// Matrices with incompatible shapes were combined.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// A function was evaluated outside its domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Adaptive quadrature did not reach the requested tolerance.
    #[error("quadrature did not converge: estimate {estimate:.6e}, residual {residual:.3e}")]
    Quadrature { estimate: f64, residual: f64 },

    /// Inconsistent configuration between components (e.g. a missing Ω entry).
    #[error("configuration error: {0}")]
    Configuration(String),

    /// The dissipation matrix has a negative eigenvalue beyond tolerance.
    #[error("dissipation matrix is not positive semi-definite (lambda_min = {lambda_min:.6e})")]
    NotCompletelyPositive { lambda_min: f64 },

    /// Time integration produced non-finite values.
    #[error("integration failed at t = {time}")]
    Integration { time: f64 },

    /// The generator kernel is not one-dimensional.
    #[error("steady state is not unique: kernel dimension {kernel_dim}")]
    NonUniqueSteadyState { kernel_dim: usize },
}

impl Error {
    pub(crate) fn validation(what: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Validation {
            what: what.into(),
            reason: reason.into(),
        }
    }

    /// True for errors caused by bad input rather than numerical failure.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Validation { .. } | Error::Dimension(_) | Error::Configuration(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
