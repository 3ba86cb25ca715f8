use thiserror::Error;

/// Every failure the library can report. The CLI maps these onto exit codes.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0} is not prime")]
    NonPrime(u64),
    #[error("characteristic 2 is not supported")]
    EvenPrime,
    #[error("field size {p}^{k} does not fit in 64 bits")]
    Overflow { p: u64, k: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("element index {idx} is out of range for q = {q}")]
    ElemOutOfRange { idx: u64, q: u64 },
    #[error("d = {d} does not divide q - 1 = {q_minus_1} (or d <= 1)")]
    NotADivisor { d: u64, q_minus_1: u64 },
    #[error("discrete-log tables are unavailable for q = {0}")]
    TablesUnavailable(u64),
    #[error("q = {q} is not congruent to 1 mod 2d = {two_d}")]
    ParityViolation { q: u64, two_d: u64 },
    #[error("search exceeded its budget of {budget_secs:.1}s (best lower bound {best_so_far})")]
    Timeout { budget_secs: f64, best_so_far: usize },
    #[error("q = {0} is not a perfect square")]
    NotASquare(u64),
    #[error("zero polynomial has no root multiplicity")]
    ZeroPolynomial,
    #[error("interpolation points are not pairwise distinct")]
    DuplicatePoints,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("set size {size} does not match the requested certificate parity")]
    ParityMismatch { size: usize },
    #[error("the set is not a restricted-sumset decomposition")]
    NotADecomposition,
    #[error("radicand must be positive")]
    NonPositive,
    #[error("predicate undefined: {0}")]
    PredicateMismatch(String),
    #[error("polynomial has a repeated root")]
    RepeatedRoot,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
