use thiserror::Error;

use crate::search::SearchFailure;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("variable count {n} outside supported range 1..={max}")]
    VariableCount { n: usize, max: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{what} supports at most {max} variables, got {n}")]
    Capacity {
        what: &'static str,
        n: usize,
        max: usize,
    },

    #[error("{line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("invalid constraint: {0}")]
    Constraint(String),

    #[error(transparent)]
    Search(Box<SearchFailure>),

    #[error("comparison matrix cell ({row}, {col}): {reason}")]
    Matrix {
        row: usize,
        col: usize,
        reason: String,
    },

    #[error("power iteration did not converge within {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("random index is tabulated for k <= 10, got k = {k}")]
    UnsupportedDimension { k: usize },

    #[error("invalid value: {0}")]
    InvalidValue(String),

    #[error("unknown metric key `{0}`")]
    UnknownMetric(String),

    #[error("metric `{key}` is unavailable: {reason}")]
    MetricUnavailable { key: String, reason: String },
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}

impl From<SearchFailure> for Error {
    fn from(failure: SearchFailure) -> Self {
        Error::Search(Box::new(failure))
    }
}
