use thiserror::Error;

/// Errors raised anywhere in the toolkit.
///
/// Variants are grouped by the failure class a caller is expected to react
/// to; [`Error::class`] collapses them into the three classes that the CLI
/// maps to exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// Well-formed text that names something unknown or malformed, such as
    /// a flag value or a target file field.
    #[error("invalid input: {0}")]
    Input(String),

    #[error("non-finite coordinate in row {row}")]
    NonFinite { row: usize },

    #[error("empty sample")]
    EmptySample,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("non-finite gradient at coordinate {coordinate}")]
    Numerical { coordinate: usize },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    Dimension { expected: usize, actual: usize },

    #[error("target `{0}` does not provide this operation")]
    UnsupportedTarget(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("chain diverged at step {step}")]
    Diverged { step: usize },

    #[error("LP solver failed after {iterations} iterations: {message}")]
    Solver { iterations: u64, message: String },

    #[error("coordinate {coordinate}: {source}")]
    Coordinate {
        coordinate: usize,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Coarse failure class, stable across variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Input,
    Domain,
    Solver,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Parse { .. } | Error::Input(_) | Error::NonFinite { .. } | Error::Io(_) | Error::Json(_) => {
                ErrorClass::Input
            }
            Error::Solver { .. } => ErrorClass::Solver,
            Error::Coordinate { source, .. } => source.class(),
            _ => ErrorClass::Domain,
        }
    }

    pub(crate) fn at_coordinate(self, coordinate: usize) -> Error {
        Error::Coordinate {
            coordinate,
            source: Box::new(self),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
