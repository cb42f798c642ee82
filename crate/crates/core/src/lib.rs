//! Computational companion to the reduction "congruence ABC implies ABC".
//!
//! - [`numtheory`]: exact factorization, radical, totient.
//! - [`abc`]: ABC-solutions, the merit function and quality.
//! - [`theta`]: the `Theta_n` operator and the amplification constants.
//! - [`harness`]: corpus enumeration and the verification suites.

pub mod abc;
pub mod error;
pub mod harness;
pub mod numtheory;
pub mod real;
pub mod report;
pub mod theta;

pub use abc::{make_solution, merit, merit_with, quality, quality_with, AbcSolution, MeritReport};
pub use error::{Error, Result};
pub use harness::{
    enumerate_solutions, filter_congruence, random_solutions, search_quality, verify_lemma1, verify_lemma2,
    verify_proof_identities, verify_reduction_chain, LemmaVerdict, SuiteKind, SuiteStatus, SuiteSummary, Verifier,
    VerifyOptions,
};
pub use numtheory::{
    default_factorizer, factorize, gcd, pow_int, radical, totient, valuation2, FactorConfig,
    Factorization, Factorizer,
};
pub use theta::{
    bound_report_with, derived_full_bound, lemma_constants, theta, theta_with_cap, LemmaConstants, ThetaPlan,
    BoundReport, ThetaResult, DEFAULT_EXPONENT_CAP,
};
