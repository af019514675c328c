use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An index or parameter outside the supported domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A decision (sign, comparison, partial quotient) could not be made at
    /// the current working precision. Callers retry at a higher precision.
    #[error("precision exhausted: {0}")]
    Precision(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// No convergent in the term budget produced a certified positive epsilon.
    #[error("reduction failed: {0}")]
    ReductionFailed(String),

    #[error("verification failed at {record}: {reason}")]
    Verification { record: String, reason: String },

    #[error("unknown {kind} `{name}` (available: {available})")]
    UnknownStrategy {
        kind: &'static str,
        name: String,
        available: String,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn precision(msg: impl Into<String>) -> Self {
        Error::Precision(msg.into())
    }

    pub(crate) fn verification(record: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Verification {
            record: record.into(),
            reason: reason.into(),
        }
    }

    /// True when retrying at a higher precision may succeed.
    pub fn is_refinable(&self) -> bool {
        matches!(self, Error::Precision(_))
    }
}
