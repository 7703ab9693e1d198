use thiserror::Error;

use crate::scalar::Overflow;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),
    #[error("invalid tuple: {0}")]
    InvalidTuple(String),
    #[error("mismatched arity: {left} vs {right}")]
    MismatchedArity { left: usize, right: usize },
    #[error("wrong block count: expected {expected}, got {got}")]
    WrongBlockCount { expected: usize, got: usize },
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("zero vector has no primitive representative")]
    ZeroVector,
    #[error("point violates inequalities {violated:?}")]
    InfeasiblePoint { violated: Vec<usize> },
    #[error("inequality is not valid: ray {ray} has slack {slack}")]
    NotValid { ray: usize, slack: String },
    #[error("ray {ray} violates inequality {inequality} (value {value})")]
    InconsistentPair {
        ray: usize,
        inequality: usize,
        value: String,
    },
    #[error("orbit table failed double counting between orbits {row} and {col}")]
    InconsistentRelation { row: usize, col: usize },
    #[error("unknown vertex {0}")]
    UnknownVertex(usize),
    #[error("unknown orbit {0}")]
    UnknownOrbit(usize),
    #[error("graph too large for catalog lookup ({0} vertices)")]
    TooLarge(usize),
    #[error("facet of the smaller cone is not a facet of the larger one: {0}")]
    FacetNotPresent(String),
    #[error("cone {0} has not been computed")]
    NotComputed(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("io error: {0}")]
    Io(String),
    #[error(transparent)]
    Overflow(#[from] Overflow),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
