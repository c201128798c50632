//! Error type shared by every module of the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite value: {context}")]
    NonFinite { context: &'static str },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("vector must have dimension >= 1")]
    EmptyVector,

    #[error("invalid norm specification: {0}")]
    InvalidNorm(String),

    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("zero vector not allowed: {context}")]
    ZeroVector { context: &'static str },

    #[error("vectors are linearly dependent")]
    LinearlyDependent,

    #[error("semi-inner product not unique")]
    SemiInnerProductNotUnique,

    #[error("no witness found")]
    NoWitnessFound,

    #[error("bracket sign contract failed: {0}")]
    BracketSignContract(String),

    #[error("bisection iteration limit reached (best t = {best_t}, residual = {best_residual})")]
    BisectIterLimit { best_t: f64, best_residual: f64 },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serialize(#[from] serde_json::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
