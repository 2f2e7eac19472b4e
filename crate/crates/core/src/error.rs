use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("no root bound for zero polynomial")]
    ZeroPolynomial,

    #[error("not a complete intersection: {exponents} exponents in {variables} variables")]
    NotCompleteIntersection { variables: usize, exponents: usize },

    #[error("expected {expected} exponents for an almost complete intersection, got {got}")]
    WrongExponentCount { expected: usize, got: usize },

    #[error("formula valid only for 0 ≤ t ≤ n (got t = {t}, n = {n})")]
    SquaresRange { n: i64, t: i64 },

    #[error("Cremona step needs more points than ambient dimension plus one ({points} points in P^{ambient})")]
    NeedsMorePoints { ambient: i64, points: usize },

    #[error("Cremona step illegal: multiplicity at index {index} would become {value}")]
    CremonaIllegal { index: usize, value: i64 },

    #[error("Cremona step illegal: degree would become {0}")]
    CremonaNegativeDegree(i64),

    #[error("degree below duality threshold: j = {degree} < max exponent - 1 = {threshold}")]
    BelowDualityThreshold { degree: i64, threshold: i64 },

    #[error("cannot parse linear system {input:?}: {reason}")]
    Parse { input: String, reason: String },

    #[error("instance too large for dense oracle: {cells} cells exceeds budget {budget}")]
    OracleBudget { cells: u128, budget: u128 },

    #[error("prime {prime} must exceed the degree {degree}")]
    PrimeTooSmall { prime: u64, degree: i64 },

    #[error("{0} is not prime")]
    NotPrime(u64),
}
