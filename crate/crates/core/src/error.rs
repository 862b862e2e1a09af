use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("inner lattice is not contained in the outer lattice")]
    NotSublattice,
    #[error("quotient has infinite index")]
    InfiniteIndex,
    #[error("extension degree {requested} exceeds the cap {cap}")]
    DegreeCapExceeded { requested: usize, cap: usize },
    #[error("mass formula violated for {context}: got {got}/12, expected {expected}/12")]
    MassFormulaViolation { context: String, got: u64, expected: u64 },
    #[error("operators do not commute: {0} and {1}")]
    NonCommuting(String, String),
    #[error("operator {0} does not preserve the sublattice")]
    OperatorDoesNotRestrict(String),
    #[error("sublattice is not stable under the algebra")]
    NotStable,
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("module is not locally free at residue characteristic {0}")]
    NotLocallyFree(u64),
    #[error("parse error in {context}: {message}")]
    Parse { context: String, message: String },
    #[error("modular polynomial is not symmetric: {0}")]
    Asymmetry(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("internal invariant failed: {0}")]
    Internal(String),
}

impl Error {
    pub fn parse(context: &str, message: &str) -> Self {
        Error::Parse { context: context.to_string(), message: message.to_string() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
