use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A caller-supplied argument is outside the accepted domain.
    #[error("invalid argument: {0}")]
    Argument(String),

    /// A matrix or register would exceed the supported size.
    #[error("size limit exceeded: {0}")]
    Size(String),

    /// A numerical precondition (Hermiticity, positivity, normalization) failed.
    #[error("validation failed: {0}")]
    Validation(String),

    /// A two-qubit matrix has weight outside the X pattern.
    #[error("matrix is not X-shaped: entry ({row}, {col}) has magnitude {magnitude:e}")]
    NotXShape { row: usize, col: usize, magnitude: f64 },

    /// The request is well-formed but no construction is known for it.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// The operation does not apply to this input (e.g. a Jacobian of a 1-D map).
    #[error("not applicable: {0}")]
    NotApplicable(String),
}

impl Error {
    /// Short machine-readable kind tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Argument(_) => "argument",
            Error::Size(_) => "size",
            Error::Validation(_) => "validation",
            Error::NotXShape { .. } => "not-x-shape",
            Error::Unsupported(_) => "unsupported",
            Error::NotApplicable(_) => "not-applicable",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn argument(msg: impl Into<String>) -> Error {
    Error::Argument(msg.into())
}

pub(crate) fn validation(msg: impl Into<String>) -> Error {
    Error::Validation(msg.into())
}
