use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid rank {0}: rank must be at least 1")]
    InvalidRank(i64),
    #[error("invalid flag type {0:?}: cuts must start at 0 and increase strictly")]
    InvalidFlag(Vec<usize>),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("degenerate tuple: smallest singular value {0:e} is below 1e-10")]
    DegenerateTuple(f64),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("sample generator gave up after {0} retries")]
    GeneratorFailure(usize),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
