use k3lat::ErrorKind;
use serde_json::Value;
use thiserror::Error;

use crate::json::{int, object};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Lib(#[from] k3lat::Error),
    #[error("usage: {0}")]
    Usage(String),
    #[error("schema mismatch: {0}")]
    Schema(String),
    #[error("io: {0}")]
    Io(String),
}

impl CliError {
    /// 1 for input validation, 2 for computation failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Lib(e) => match e.kind() {
                ErrorKind::Validation => 1,
                ErrorKind::Computation | ErrorKind::Internal => 2,
            },
            _ => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Lib(e) => match e.kind() {
                ErrorKind::Validation => "validation",
                ErrorKind::Computation => "computation",
                ErrorKind::Internal => "internal",
            },
            CliError::Usage(_) => "usage",
            CliError::Schema(_) => "schema",
            CliError::Io(_) => "io",
        }
    }

    pub fn code(&self) -> &'static str {
        use k3lat::Error as E;
        match self {
            CliError::Lib(e) => match e {
                E::DimensionMismatch { .. } => "dimension_mismatch",
                E::BasisMismatch(_) => "basis_mismatch",
                E::NotSymmetric => "not_symmetric",
                E::NotHyperbolic(_) => "not_hyperbolic",
                E::NoPositiveClass(_) => "no_positive_class",
                E::DefiniteOrDegenerate => "definite_or_degenerate",
                E::RankDeficient => "rank_deficient",
                E::LegendreExclusion { .. } => "legendre_exclusion",
                E::SearchCeiling { .. } => "search_ceiling",
                E::SearchExhausted(_) => "search_exhausted",
                E::ParityMismatch(_) => "parity_mismatch",
                E::OutOfRange(_) => "out_of_range",
                E::NotMinusTwo(_) => "not_minus_two",
                E::FlavorMismatch(_) => "flavor_mismatch",
                E::InvalidIndices(_) => "invalid_indices",
                E::SupportNotNegativeDefinite => "support_not_negative_definite",
                E::NotPseudoEffective(_) => "not_pseudo_effective",
                E::StepBudgetExceeded { .. } => "step_budget_exceeded",
                E::Hypothesis(_) => "hypothesis",
                E::Normalization(_) => "normalization",
                E::Precondition(_) => "precondition",
                E::AmbiguousExponent(_) => "ambiguous_exponent",
                E::Internal(_) => "internal",
            },
            CliError::Usage(_) => "usage",
            CliError::Schema(_) => "schema_mismatch",
            CliError::Io(_) => "io",
        }
    }

    /// Structured data attached to some errors.
    pub fn witness(&self) -> Value {
        match self {
            CliError::Lib(k3lat::Error::LegendreExclusion { a, b }) => object(vec![("a", int(a)), ("b", int(b))]),
            CliError::Lib(k3lat::Error::StepBudgetExceeded { steps }) => object(vec![("steps", Value::from(*steps))]),
            CliError::Lib(k3lat::Error::SearchCeiling { n, ceiling }) => {
                object(vec![("n", int(n)), ("ceiling", int(ceiling))])
            }
            _ => Value::Null,
        }
    }
}
