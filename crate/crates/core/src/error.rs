use thiserror::Error;

use crate::Int;

pub type Result<T> = std::result::Result<T, Error>;

/// Coarse classification used for exit codes and error reporting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// The input violates a precondition.
    Validation,
    /// A bounded search or step budget ran out.
    Computation,
    /// A self-check on computed data failed.
    Internal,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("basis mismatch: {0}")]
    BasisMismatch(String),
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("not hyperbolic: 4bd - a^2 = {0} >= 0")]
    NotHyperbolic(Int),
    #[error("no positive class designated: d = {0} <= 0")]
    NoPositiveClass(Int),
    #[error("form is definite or degenerate")]
    DefiniteOrDegenerate,
    #[error("matrix does not have full column rank")]
    RankDeficient,
    #[error("Legendre exclusion: n = 4^{a} * (8 * {b} + 7)")]
    LegendreExclusion { a: Int, b: Int },
    #[error("search ceiling exceeded: n = {n} > {ceiling}")]
    SearchCeiling { n: Int, ceiling: Int },
    #[error("search exhausted: {0}")]
    SearchExhausted(String),
    #[error("parity mismatch: {0}")]
    ParityMismatch(String),
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("class is not a (-2)-vector: square = {0}")]
    NotMinusTwo(Int),
    #[error("flavor mismatch: {0}")]
    FlavorMismatch(String),
    #[error("invalid indices: {0}")]
    InvalidIndices(String),
    #[error("support Gram matrix is not negative definite")]
    SupportNotNegativeDefinite,
    #[error("class is not pseudo-effective: {0}")]
    NotPseudoEffective(String),
    #[error("step budget exceeded after {steps} reflections")]
    StepBudgetExceeded { steps: usize },
    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),
    #[error("normalization violated: {0}")]
    Normalization(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("ambiguous gcd exponent: {0}")]
    AmbiguousExponent(String),
    #[error("internal check failed: {0}")]
    Internal(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::SearchCeiling { .. }
            | Error::SearchExhausted(_)
            | Error::StepBudgetExceeded { .. } => ErrorKind::Computation,
            Error::Internal(_) => ErrorKind::Internal,
            _ => ErrorKind::Validation,
        }
    }
}
