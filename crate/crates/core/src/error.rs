use thiserror::Error;

/// Errors raised by the library.
///
/// Mathematical "no" answers (a failed axiom, an inequivalent pair) are never
/// errors; they are reported through the result types of each operation.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Dimensions of the operands do not fit together.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// The input violates a precondition of the operation.
    #[error("invalid input: {0}")]
    Input(String),

    /// The input is well-formed but the requested case is not supported.
    #[error("unsupported case: {0}")]
    Unsupported(String),

    /// A structural identity that must hold for the input data fails.
    #[error("identity violated: {0}")]
    Violated(String),

    /// A JSON payload could not be decoded.
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn dim(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }

    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
