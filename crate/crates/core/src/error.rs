use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("composition requires a zero constant term in the inner series (found {0})")]
    Composition(String),

    #[error("series is not invertible: first-order coefficient is zero")]
    NonInvertible,

    #[error("iteration did not stabilize within {iterations} iterations")]
    Convergence { iterations: usize },

    #[error("hypothesis violated: negative coefficient at index {index}")]
    HypothesisViolation { index: usize },

    #[error("no sign change of f' in (0, {limit}): not admissible in range")]
    NotAdmissible { limit: f64 },

    #[error("radius undefined: all coefficients in the estimation window are zero")]
    UndefinedRadius,

    #[error("floating-point overflow in {0}")]
    Overflow(&'static str),

    #[error("tolerance {requested:e} unachievable within panel budget (partial value {partial}, error estimate {achieved:e})")]
    Budget {
        partial: f64,
        achieved: f64,
        requested: f64,
    },

    #[error("argument out of supported range: {0}")]
    Range(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    /// True for errors caused by the caller's inputs rather than by a
    /// numerical budget running out.
    pub fn is_parameter_error(&self) -> bool {
        matches!(
            self,
            Error::Parameter(_)
                | Error::Composition(_)
                | Error::NonInvertible
                | Error::NotAdmissible { .. }
                | Error::Range(_)
                | Error::Parse(_)
                | Error::HypothesisViolation { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
