use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("unramified polynomial is not irreducible mod p: {0}")]
    NotIrreducible(String),
    #[error("polynomial is not Eisenstein: {0}")]
    NotEisenstein(String),
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("element is not invertible at the available precision")]
    NotInvertibleAtPrecision,
    #[error("element is not integral (valuation {0})")]
    NotIntegral(i64),
    #[error("Hensel condition v(g(x0)) > 2 v(g'(x0)) fails: {0}")]
    HenselConditionFailed(String),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("precision too low to decide: {0}")]
    PrecisionTooLowToDecide(String),
    #[error("degree {degree} is not divisible by p = {p}")]
    DegreeNotDivisibleByP { degree: usize, p: u64 },
    #[error("degree {degree} is not a power of p = {p}")]
    DegreeNotPrimePower { degree: usize, p: u64 },
    #[error("polynomial does not satisfy condition (star) over this field: {0}")]
    StarConditionFailed(String),
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error("inexact polynomial division (internal error): {0}")]
    InexactDivision(String),
    #[error("enumeration budget exceeded: {needed} elements > budget {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error("c is not integral at the chosen prime above 2 (valuation {valuation}): {note}")]
    NotIntegralAt2 { valuation: String, note: String },
    #[error("preimage search reached the depth cap {0}")]
    DepthCapReached(usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Stable machine-readable name of the error kind.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "NotPrime",
            Error::NotIrreducible(_) => "NotIrreducible",
            Error::NotEisenstein(_) => "NotEisenstein",
            Error::FieldMismatch => "FieldMismatch",
            Error::NotInvertibleAtPrecision => "NotInvertibleAtPrecision",
            Error::NotIntegral(_) => "NotIntegral",
            Error::HenselConditionFailed(_) => "HenselConditionFailed",
            Error::PrecisionExhausted(_) => "PrecisionExhausted",
            Error::PrecisionTooLowToDecide(_) => "PrecisionTooLowToDecide",
            Error::DegreeNotDivisibleByP { .. } => "DegreeNotDivisibleByP",
            Error::DegreeNotPrimePower { .. } => "DegreeNotPrimePower",
            Error::StarConditionFailed(_) => "StarConditionFailed",
            Error::HypothesisFailed(_) => "HypothesisFailed",
            Error::InexactDivision(_) => "InexactDivision",
            Error::BudgetExceeded { .. } => "BudgetExceeded",
            Error::NotIntegralAt2 { .. } => "NotIntegralAt2",
            Error::DepthCapReached(_) => "DepthCapReached",
            Error::Parse(_) => "Parse",
            Error::InvalidInput(_) => "InvalidInput",
        }
    }
}
