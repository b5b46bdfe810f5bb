use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Broad class of a failure, used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed or out-of-range input.
    Validation,
    /// Well-formed input for which the requested object does not exist.
    Infeasible,
    /// An enumeration would exceed its configured budget.
    Budget,
}

/// A clause of the staircase (chain) hypotheses that failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainClause {
    /// First coordinates are not strictly increasing.
    FirstIncreasing,
    /// Second coordinates are not strictly decreasing.
    SecondDecreasing,
    /// a_w - a_1 >= u.
    FirstSpread,
    /// a_1 > u(q-2)+1.
    FirstBound,
}

impl std::fmt::Display for ChainClause {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ChainClause::FirstIncreasing => "a_1 < ... < a_w",
            ChainClause::SecondDecreasing => "b_w < ... < b_1",
            ChainClause::FirstSpread => "a_w - a_1 < u",
            ChainClause::FirstBound => "a_1 <= u(q-2)+1",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("field order {order} exceeds the cap {cap}")]
    FieldTooLarge { order: u128, cap: u64 },
    #[error("GF({q}) is not a subfield of GF({order})")]
    NotSubfield { q: u64, order: u64 },
    #[error("element index {index} out of range for a field of order {order}")]
    ElementOutOfRange { index: u64, order: u64 },
    #[error("invalid curve parameters: {0}")]
    InvalidCurve(String),
    #[error("{0} is not in the Weierstrass semigroup")]
    NotInSemigroup(u64),
    #[error("{0} is not in H*(Q)")]
    NotInHStar(u64),
    #[error("exponent ({i}, {j}) lies outside the monomial box")]
    OutsideBox { i: u64, j: u64 },
    #[error("monomial set is not closed downward: ({i}, {j}) is missing")]
    NotDecreasing { i: u64, j: u64 },
    #[error("codes are not nested: {0}")]
    NotNested(String),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("participant index {index} out of range for n = {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("rows are linearly dependent")]
    DependentRows,
    #[error("empty gamma set")]
    EmptyGammaSet,
    #[error("chain hypothesis violated: {0}")]
    Hypothesis(ChainClause),
    #[error("invalid level range: lambda2 = {lambda2} must be below lambda1 = {lambda1}")]
    InvalidLevels { lambda1: u64, lambda2: u64 },
    #[error("pool value {0} is not in H*(Q) ∩ (lambda2, lambda1]")]
    InvalidPool(u64),
    #[error("dimension {m} exceeds the pool size {pool}")]
    DimensionTooLarge { m: usize, pool: usize },
    #[error("operation needs a pair of one-point codes")]
    NotOnePoint,
    #[error("shares are not realizable by any codeword")]
    InconsistentShares,
    #[error("enumeration needs {needed} steps, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("gamma set does not attain the minimum: count {count}, minimum {minimum}")]
    NotMinimizing { count: u64, minimum: u64 },
    #[error("invalid root choice: {0}")]
    InvalidChoice(String),
    #[error("set is not of the constructed form: {0}")]
    NotConstructedForm(String),
    #[error("verification failed: {0}")]
    VerificationFailure(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::DimensionTooLarge { .. }
            | Error::Hypothesis(_)
            | Error::InconsistentShares
            | Error::NotMinimizing { .. }
            | Error::VerificationFailure(_)
            | Error::NotConstructedForm(_) => ErrorKind::Infeasible,
            Error::BudgetExceeded { .. } => ErrorKind::Budget,
            _ => ErrorKind::Validation,
        }
    }
}
