use thiserror::Error;

/// Errors produced by the histopolation toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A closed-form expression divides by a vanishing quantity.
    #[error("singular formula: {0}")]
    SingularFormula(String),

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    /// The segment family is not unisolvent for the chosen degree.
    #[error("segments are not unisolvent (condition estimate {cond:e})")]
    NotUnisolvent { cond: f64 },

    #[error("Vandermonde matrix too ill-conditioned: estimate {cond:e} exceeds cap {cap:e}")]
    IllConditioned { cond: f64, cap: f64 },

    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("non-finite function value {value} at x = {x}")]
    Evaluation { x: f64, value: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// Process exit code associated with the error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidInput(_) | Error::Unsupported(_) | Error::ContractViolation(_) => 1,
            _ => 2,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
