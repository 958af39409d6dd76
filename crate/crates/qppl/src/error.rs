use thiserror::Error;

use crate::syntax::ParseError;
use crate::validate::Diagnostic;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("program is invalid ({} error(s))", .0.iter().filter(|d| d.is_error()).count())]
    Invalid(Vec<Diagnostic>),
    #[error("program needs {needed} live bits but the simulator is limited to {limit}")]
    Capacity { needed: usize, limit: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("variable `{0}` is declared more than once")]
    DuplicateVariable(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("malformed state: {0}")]
    MalformedState(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
