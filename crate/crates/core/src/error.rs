use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("budget exceeded: {what} needs {required}, limit is {limit}")]
    Budget {
        what: &'static str,
        required: u64,
        limit: u64,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("graph is disconnected ({components} components)")]
    Disconnected { components: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("internal consistency check failed: {0}")]
    Consistency(String),
}

impl Error {
    pub(crate) fn parse(offset: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            offset,
            message: message.into(),
        }
    }

    pub(crate) fn invalid(message: impl Into<String>) -> Self {
        Error::InvalidInput(message.into())
    }

    /// Short machine-readable tag, used by the CLI's JSON error lines.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "parse",
            Error::Budget { .. } => "budget",
            Error::InvalidInput(_) => "invalid_input",
            Error::Disconnected { .. } => "disconnected",
            Error::DimensionMismatch(_) => "dimension_mismatch",
            Error::Consistency(_) => "consistency",
        }
    }
}
