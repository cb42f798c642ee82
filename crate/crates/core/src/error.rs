use thiserror::Error;

/// Every failure the library can report.
///
/// The `NotZeroSum`, `HasZeroEntry`, `NotDistinct` and `NotCoprime` variants
/// each name one of the conditions an ABC-solution must satisfy.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("NotZeroSum: entries sum to {sum}, expected 0")]
    NotZeroSum { sum: String },
    #[error("HasZeroEntry: every entry of an ABC-solution must be nonzero")]
    HasZeroEntry,
    #[error("NotDistinct: entries must be pairwise distinct")]
    NotDistinct,
    #[error("NotCoprime: entries share the common factor {gcd}")]
    NotCoprime { gcd: String },

    #[error("FactorizationFailure: cofactor {cofactor} resisted {budget} rho iterations")]
    FactorizationFailure { cofactor: String, budget: u64 },
    #[error("NonPositive: {what} must be at least 1")]
    NonPositive { what: &'static str },

    #[error("OddN: exponent n = {n} must be even")]
    OddN { n: u32 },
    #[error("ZeroN: exponent n must be at least 2")]
    ZeroN,
    #[error("ExponentCapExceeded: exponent {n} exceeds the configured cap {cap}")]
    ExponentCapExceeded { n: u64, cap: u32 },
    #[error("NonpositiveEpsilon: epsilon must be > 0, got {epsilon}")]
    NonpositiveEpsilon { epsilon: f64 },
    #[error("NegativeEpsilon: epsilon must be >= 0, got {epsilon}")]
    NegativeEpsilon { epsilon: f64 },
    #[error("InternalInexactDivision: 2^{m} does not divide {value}")]
    InternalInexactDivision { m: u32, value: String },

    #[error("InvalidModulus: N = {modulus} but at least {min} is required")]
    InvalidModulus { modulus: u64, min: u64 },
    #[error("CorpusTooSmall: max_c = {max_c} but at least 3 is required")]
    CorpusTooSmall { max_c: u64 },
    #[error("EmptyGrid: the {which} grid must not be empty")]
    EmptyGrid { which: &'static str },
    #[error("InvalidThreshold: quality threshold must be > 0, got {threshold}")]
    InvalidThreshold { threshold: f64 },
    #[error(
        "HypothesisViolated: assumed constant {assumed} is below the observed image merit {observed} at {triple}"
    )]
    HypothesisViolated {
        assumed: f64,
        observed: f64,
        triple: String,
    },
    #[error("worker pool: {0}")]
    WorkerPool(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
