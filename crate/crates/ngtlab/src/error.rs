use thiserror::Error;

use crate::expr::{EvalError, ParseError};

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("singular metric: {detail}")]
    SingularMetric { detail: String },
    #[error("endomorphism is singular at this point - use a structure-specific path")]
    DegenerateEndomorphism,
    #[error("shape error: {0}")]
    Shape(String),
    #[error("unsupported valence ({0},{1})")]
    UnsupportedValence(usize, usize),
    #[error("invalid manifold spec: {0}")]
    Spec(String),
    #[error("inconsistent contact pair: {0}")]
    ContactPair(String),
    #[error("unknown builtin manifold `{0}`")]
    UnknownBuiltin(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
