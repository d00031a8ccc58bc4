use alloc::string::String;

/// Errors raised by constructors and mechanism evaluation.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("index {index} out of range 0..{bound}")]
    IndexOutOfRange { index: u64, bound: u64 },
    #[error("n = {n} exceeds the supported maximum of {max}")]
    Capacity { n: usize, max: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("random multigraph search failed after {attempts} attempts")]
    RetriesExhausted { attempts: u32 },
    #[error("inconsistent mechanism: {0}")]
    Inconsistent(String),
    #[error("verification mode infeasible: {0}")]
    ModeInfeasible(String),
}

pub type Result<T> = core::result::Result<T, Error>;
