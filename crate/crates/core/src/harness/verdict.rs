//! Per-check verdicts and the order-independent suite summary.

use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::abc::AbcSolution;
use crate::report::{round12_opt, round12_vec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SuiteKind {
    Lemma1,
    Lemma2,
    Identities,
    Chain,
}

/// Grid point a check was evaluated at.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Params {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none", serialize_with = "round12_opt")]
    pub eps: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<u64>,
}

/// One verified instance.
///
/// `slack` is positive when the inequality holds with room; `pass` is
/// `slack >= -tolerance` for inequality checks and exact divisibility or
/// equality for the integer checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaVerdict {
    pub triple: AbcSolution,
    pub params: Params,
    #[serde(serialize_with = "round12_opt")]
    pub lhs: Option<f64>,
    #[serde(serialize_with = "round12_opt")]
    pub rhs: Option<f64>,
    #[serde(serialize_with = "round12_opt")]
    pub slack: Option<f64>,
    pub pass: bool,
    pub witness: Option<String>,
    /// The verdict was decided in fixed-point arithmetic.
    pub high_precision: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InconclusiveRecord {
    pub triple: AbcSolution,
    pub params: Params,
    pub reason: String,
}

/// The grid a suite ran over.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Grid {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub n: Vec<u32>,
    #[serde(default, skip_serializing_if = "Vec::is_empty", serialize_with = "round12_vec")]
    pub eps: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub modulus: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none", serialize_with = "round12_opt")]
    pub assumed_constant: Option<f64>,
    #[serde(serialize_with = "crate::report::round12")]
    pub tolerance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuiteStatus {
    Pass,
    Counterexample,
    InconclusiveOnly,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteSummary {
    pub suite: SuiteKind,
    pub grid: Grid,
    pub corpus_size: u64,
    pub corpus_hash: String,
    /// Number of (triple, grid point) checks: `pass + fail + inconclusive`.
    pub checks: u64,
    pub pass: u64,
    pub fail: u64,
    pub inconclusive: u64,
    /// Checks whose slack was close enough to zero to be recomputed in
    /// fixed point.
    pub near_ties: u64,
    #[serde(serialize_with = "round12_opt")]
    pub min_slack: Option<f64>,
    /// The check achieving `min_slack` (first in corpus order on ties).
    pub extremal: Option<LemmaVerdict>,
    /// The first failing checks in corpus order.
    pub counterexamples: Vec<LemmaVerdict>,
    pub inconclusives: Vec<InconclusiveRecord>,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl SuiteSummary {
    pub fn status(&self) -> SuiteStatus {
        if self.fail > 0 {
            SuiteStatus::Counterexample
        } else if self.inconclusive > 0 {
            SuiteStatus::InconclusiveOnly
        } else {
            SuiteStatus::Pass
        }
    }

    /// Every check passed and none was inconclusive.
    pub fn all_pass(&self) -> bool {
        self.status() == SuiteStatus::Pass
    }
}

/// Outcome of one check before it is tied to its triple.
#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Check {
    Done {
        params: Params,
        lhs: Option<f64>,
        rhs: Option<f64>,
        slack: Option<f64>,
        pass: bool,
        witness: Option<String>,
        high_precision: bool,
    },
    Inconclusive {
        params: Params,
        reason: String,
    },
}

/// Folds checks in corpus order. Only this fold touches shared state, so the
/// summary does not depend on how the checks were scheduled.
pub(crate) struct SummaryBuilder {
    summary: SuiteSummary,
    max_recorded: usize,
}

impl SummaryBuilder {
    pub(crate) fn new(suite: SuiteKind, grid: Grid, max_recorded: usize) -> Self {
        SummaryBuilder {
            summary: SuiteSummary {
                suite,
                grid,
                corpus_size: 0,
                corpus_hash: String::new(),
                checks: 0,
                pass: 0,
                fail: 0,
                inconclusive: 0,
                near_ties: 0,
                min_slack: None,
                extremal: None,
                counterexamples: Vec::new(),
                inconclusives: Vec::new(),
                wall_time: Duration::ZERO,
            },
            max_recorded,
        }
    }

    pub(crate) fn absorb(&mut self, triple: &AbcSolution, checks: Vec<Check>) {
        let s = &mut self.summary;
        for check in checks {
            s.checks += 1;
            match check {
                Check::Inconclusive { params, reason } => {
                    s.inconclusive += 1;
                    if s.inconclusives.len() < self.max_recorded {
                        s.inconclusives.push(InconclusiveRecord {
                            triple: triple.clone(),
                            params,
                            reason,
                        });
                    }
                }
                Check::Done {
                    params,
                    lhs,
                    rhs,
                    slack,
                    pass,
                    witness,
                    high_precision,
                } => {
                    if pass {
                        s.pass += 1;
                    } else {
                        s.fail += 1;
                    }
                    if high_precision {
                        s.near_ties += 1;
                    }
                    let new_min = match (slack, s.min_slack) {
                        (Some(x), Some(m)) => x < m,
                        (Some(_), None) => true,
                        _ => false,
                    };
                    let record_fail = !pass && s.counterexamples.len() < self.max_recorded;
                    if new_min || record_fail {
                        let verdict = LemmaVerdict {
                            triple: triple.clone(),
                            params,
                            lhs,
                            rhs,
                            slack,
                            pass,
                            witness,
                            high_precision,
                        };
                        if new_min {
                            s.min_slack = slack;
                            s.extremal = Some(verdict.clone());
                        }
                        if record_fail {
                            s.counterexamples.push(verdict);
                        }
                    }
                }
            }
        }
    }

    pub(crate) fn finish(mut self, corpus_size: u64, corpus_hash: String, wall_time: Duration) -> SuiteSummary {
        self.summary.corpus_size = corpus_size;
        self.summary.corpus_hash = corpus_hash;
        self.summary.wall_time = wall_time;
        self.summary
    }
}
