use thiserror::Error;

/// Every failure the library can report.
///
/// Variants split into two families: invalid input (bad parameters, malformed
/// text, points off their curve, degenerate configurations) and failed
/// mathematical checks (`NonSquare`, `Inconsistent`). Front ends map the first
/// family to "invalid input" and the second to "check failed".
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("valuation of zero is +infinity")]
    ZeroValuation,

    #[error("square root of negative integer {0}")]
    NegativeSqrt(String),

    #[error("{value} is not {p}-integral")]
    NotPIntegral { value: String, p: u64 },

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("cannot parse rational {0:?}")]
    Parse(String),

    #[error("{n} is unfactorable at desk scale (trial-division bound {bound})")]
    FactorBound { n: String, bound: u64 },

    #[error("singular curve: {0}")]
    SingularCurve(String),

    #[error("point {point} is not on {curve}")]
    NotOnCurve { point: String, curve: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    #[error("size limit: {0}")]
    SizeLimit(String),

    #[error("not a square: {0}")]
    NonSquare(String),

    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
}

impl Error {
    /// True for errors caused by a mathematical check failing on valid input.
    pub fn is_check_failure(&self) -> bool {
        matches!(self, Error::NonSquare(_) | Error::Inconsistent(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
