use thiserror::Error;

/// Errors raised across the library.
///
/// The variants map onto the CLI exit-code contract: parse errors exit 2,
/// budget errors exit 3 and domain errors exit 5.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("enumeration budget exceeded for {what}: requires {required}, budget is {budget}")]
    Budget {
        what: String,
        required: String,
        budget: u64,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("usage error: {0}")]
    Usage(String),

    #[error("rank-deficient system: {rows} rows supplied but rank is {rank}")]
    RankDeficient { rows: usize, rank: usize },

    #[error("construction error: {0}")]
    Construction(String),

    #[error("invalid data: {0}")]
    Invalid(String),
}

impl Error {
    pub fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn parse(line: usize, column: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: msg.into(),
        }
    }

    /// Process exit code for this error kind.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } | Error::Invalid(_) | Error::RankDeficient { .. } => 2,
            Error::Budget { .. } => 3,
            Error::Domain(_) => 5,
            Error::Usage(_) | Error::Construction(_) => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
