//! Corpora and the verification suites.

pub mod corpus;
pub mod suites;
pub mod verdict;

pub use corpus::{enumerate_solutions, filter_congruence, random_solutions, solution_count, CorpusHasher, Solutions};
pub use suites::{
    search_quality, verify_lemma1, verify_lemma2, verify_proof_identities, verify_reduction_chain, Verifier,
    VerifyOptions,
};
pub use verdict::{Grid, InconclusiveRecord, LemmaVerdict, Params, SuiteKind, SuiteStatus, SuiteSummary};
