use thiserror::Error;

use crate::lattice::SpaceDescriptor;
use crate::verdict::Verdict;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("space mismatch: {left} vs {right}")]
    SpaceMismatch {
        left: SpaceDescriptor,
        right: SpaceDescriptor,
    },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("invalid dimension: {0}")]
    Dimension(String),

    #[error("usage error: {0}")]
    Usage(String),

    #[error("index {index} out of range for dimension {dim}")]
    OutOfRange { index: usize, dim: usize },

    #[error("invalid rational function: {0}")]
    RationalFunction(String),

    #[error("refused: {0}")]
    Refused(String),

    #[error("precondition not established: {reason}")]
    Precondition {
        reason: String,
        verdict: Box<Verdict>,
    },

    #[error("unknown theorem id `{0}`")]
    UnknownTheorem(String),

    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("unresolved name `{0}`")]
    Resolution(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
