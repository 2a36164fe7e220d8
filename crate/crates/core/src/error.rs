use thiserror::Error;

use crate::lab::ResultBundle;

#[derive(Debug, Error)]
pub enum Error {
    #[error("generator exhausted after {available} terms ({needed} needed)")]
    GeneratorExhausted { available: usize, needed: usize },

    #[error("operation not supported for target kind {0}")]
    UnsupportedKind(&'static str),

    #[error("invalid target: {0}")]
    InvalidTarget(String),

    #[error("zero polynomial")]
    ZeroPolynomial,

    #[error("enumeration of {count} polynomials exceeds budget {budget}")]
    OverflowGuard { count: u128, budget: u128 },

    #[error("polynomial of degree zero has no Sylvester matrix")]
    DegreeZero,

    #[error("polynomials are not coprime")]
    NotCoprime,

    #[error("value enclosure still contains zero at {bits} bits")]
    ZeroValue { bits: u32 },

    #[error("evaluation point is zero")]
    ZeroXi,

    #[error("precision exhausted at {bits} bits: {what}")]
    PrecisionExhausted { bits: u32, what: String },

    #[error("too few records: {have} usable, need {need}")]
    TooFewRecords { have: usize, need: usize },

    #[error("too few rows: {have}, need {need}")]
    TooFewRows { have: usize, need: usize },

    #[error("degree {0} is too large for exact factorization")]
    DegreeTooLarge(usize),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("enumeration budget exceeded; partial results kept")]
    BudgetExceeded(Box<ResultBundle>),

    #[error("bundles are not comparable: {0}")]
    IncompatibleBundles(String),

    #[error("bundle has no table {0}")]
    MissingTable(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
