use thiserror::Error;

/// Errors raised by the exact engines and the criteria checkers.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("membership: {0}")]
    Membership(String),

    #[error("torsion: {0}")]
    Torsion(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("structural error: {0}")]
    Structural(String),

    #[error("negative height {height}: point lies outside the cone")]
    NegativeHeight { height: String },

    #[error("series is not rational with the claimed denominator: {0}")]
    NotRational(String),

    #[error("precondition failed ({condition}): {detail}")]
    Precondition { condition: String, detail: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn precondition(condition: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Precondition {
            condition: condition.into(),
            detail: detail.into(),
        }
    }

    /// True for errors caused by the caller's input rather than by the engine.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, Error::Resource(_) | Error::Internal(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
