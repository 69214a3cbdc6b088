use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("covector is identically zero")]
    ZeroCovector,
    #[error("direction vector is zero")]
    ZeroDirection,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("weight must be positive and finite")]
    InvalidWeight,
    #[error("family has no atoms")]
    EmptyFamily,
    #[error("instance has no families")]
    EmptyInstance,
    #[error("exact enumeration requires rational input")]
    NotExactInput,
    #[error("operation requires dimension {expected}, instance has {found}")]
    WrongDimension { expected: usize, found: usize },
    #[error("operation does not apply to {0} mode")]
    WrongMode(&'static str),
    #[error("median intervals have empty intersection")]
    Infeasible,
    #[error("total class must have leading term 1")]
    NonUnitLeadingTerm,
    #[error("class w_{degree} is not homogeneous of degree {degree}")]
    NotHomogeneous { degree: usize },
    #[error("w_{degree} is nonzero above the rank {rank}")]
    RankExceeded { degree: usize, rank: usize },
    #[error("truncation degree {0} exceeds the supported maximum of 63")]
    TruncationTooLarge(usize),
    #[error("cannot parse class: {0}")]
    ClassParse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
