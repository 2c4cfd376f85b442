use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("lambda is not positive")]
    NonpositiveLambda,
    #[error("modified sieve precondition fails: lambda theta(k)^2 Theta(g)^2 <= 2 eps1 + 2 eps2")]
    PreconditionFailed,
    #[error("m' = {m_prime} does not divide q - 1 = {q_minus_1}")]
    DivisorViolation { m_prime: u64, q_minus_1: u64 },
    #[error("denominator (a - 2) q + 2 vanishes")]
    Singular,
    #[error("numerator and denominator share a factor")]
    NotCoprime,
    #[error("{0} does not divide the multiplicative group order")]
    ENotDivisor(String),
    #[error("polynomial does not divide x^m - 1 over the subfield")]
    GNotDivisor,
    #[error("field of size {size} exceeds the oracle limit {limit}")]
    LimitExceeded { size: String, limit: u64 },
    #[error("rational function is a constant times a {0}-th power")]
    ShapeViolation(u64),
    #[error("m must be at least 3, got {0}")]
    MTooSmall(u64),
    #[error("sigma ratio needs m' > 4, got {0}")]
    SigmaDomain(u64),
    #[error("gcd({q}, {d}) != 1")]
    NotCoprimeModulus { q: u64, d: u64 },
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("table row {0} does not hold")]
    FailedRow(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o: {0}")]
    Io(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
