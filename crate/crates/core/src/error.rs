use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u32),

    #[error("invalid filtration: {0}")]
    InvalidFiltration(String),

    #[error("Hasse-Arf violation: a_{index} = {numerator}/{denominator} is not an integer")]
    HasseArfViolation {
        index: usize,
        numerator: i64,
        denominator: i64,
    },

    #[error("level {level} is outside 1..={k}")]
    OutOfRange { level: u32, k: u32 },

    #[error("invalid cover specification: {0}")]
    InvalidSpec(String),

    #[error("Riemann-Hurwitz gives odd 2g_X - 2 = {0}")]
    NonIntegralGenus(i64),

    #[error("top genus {0} is below 2")]
    GenusTooSmall(i64),

    #[error("no such cover: {0}")]
    NoSuchCover(String),

    #[error("l(K + A) = {0} < 1")]
    ExistenceFailure(i64),

    #[error("deg 2D* = {degree} is below 2g_X - 2 = {bound}")]
    DegreeTooSmall { degree: i64, bound: i64 },

    #[error("the cover has no branch points")]
    NoBranchPoints,

    #[error("internal mismatch in {what}: {lhs} != {rhs}")]
    InternalMismatch { what: &'static str, lhs: i64, rhs: i64 },

    #[error("branch point {0} is not weakly ramified")]
    NotWeaklyRamified(String),

    #[error("|G(P)| = {order} exceeds the work limit {limit}")]
    WorkLimitExceeded { order: u64, limit: u64 },

    #[error("domain error: {0}")]
    DomainError(String),

    #[error("Borne invariant is negative: {0}")]
    NegativeB(i64),

    #[error("negative dimension: {0}")]
    NegativeDimension(i64),

    #[error("module is not unipotent of the stated order")]
    NotUnipotent,

    #[error("invalid field data: {0}")]
    InvalidField(String),

    #[error("invalid local action: {0}")]
    InvalidAction(String),
}
