//! `congabc`: analyze ABC-solutions, iterate Theta_n, run the verification
//! suites and compute the derived bound.
//!
//! Exit status: 0 pass, 1 counterexample, 2 usage or validation error,
//! 3 inconclusive checks only.

mod args;
mod render;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use num_bigint::{BigInt, Sign};

use congabc_core::harness::corpus::{enumerate_solutions, random_solutions};
use congabc_core::theta::bound_report_with;
use congabc_core::{
    make_solution, merit_with, theta_with_cap, AbcSolution, Error, FactorConfig, Factorizer, SuiteStatus,
    SuiteSummary, Verifier, VerifyOptions, DEFAULT_EXPONENT_CAP,
};

use args::{Cli, Command, CorpusArgs, Global, Suite};
use render::{AnalyzeReport, Factorizations, MeritAt, SearchHit, SearchReport, ThetaReport, ThetaStep};

const EXIT_COUNTEREXAMPLE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INCONCLUSIVE: u8 = 3;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::FactorizationFailure { .. } => ExitCode::from(EXIT_INCONCLUSIVE),
                _ => ExitCode::from(EXIT_USAGE),
            }
        }
    }
}

fn engine(g: &Global) -> Factorizer {
    let mut config = FactorConfig::default();
    if let Some(b) = g.trial_bound {
        config.trial_bound = b;
    }
    if let Some(b) = g.rho_budget {
        config.rho_budget = b;
    }
    if let Some(r) = g.mr_rounds {
        config.mr_rounds = r;
    }
    config.seed = g.seed;
    Factorizer::new(config)
}

fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    // A closed pipe is not an error worth reporting.
    let _ = out.write_all(text.as_bytes());
    let _ = out.flush();
}

/// Accepts both sign conventions: three positive numbers are read as
/// `x + y = z`.
fn read_triple(x: &BigInt, y: &BigInt, z: &BigInt) -> congabc_core::Result<AbcSolution> {
    if [x, y, z].iter().all(|v| v.sign() == Sign::Plus) {
        make_solution(&-x, &-y, z)
    } else {
        make_solution(x, y, z)
    }
}

fn run(cli: &Cli) -> congabc_core::Result<ExitCode> {
    let g = &cli.global;
    let engine = engine(g);
    match &cli.command {
        Command::Analyze { x, y, z, eps } => {
            let t = read_triple(x, y, z)?;
            let [fa, fb, fc] = t.factorizations(&engine)?;
            let mut merit = Vec::with_capacity(eps.len());
            let mut base = None;
            for &e in eps {
                let m = merit_with(&engine, &t, e)?;
                merit.push(MeritAt { eps: e, f: m.merit });
                base = Some(m);
            }
            let base = match base {
                Some(b) => b,
                None => merit_with(&engine, &t, 0.0)?,
            };
            let report = AnalyzeReport {
                triple: t,
                factorizations: Factorizations {
                    a: fa.to_string(),
                    b: fb.to_string(),
                    c: fc.to_string(),
                },
                rad: base.rad_abc.to_string(),
                quality: base.quality,
                merit,
            };
            emit(&render::analyze(&report, g.format));
        }
        Command::Theta { x, y, z, n, iterations } => {
            let mut t = read_triple(x, y, z)?;
            let mut steps = Vec::new();
            for _ in 0..*iterations {
                let r = theta_with_cap(&t, *n, DEFAULT_EXPONENT_CAP)?;
                let q = merit_with(&engine, &r.output, 0.0)?.quality;
                steps.push(ThetaStep::new(&r, q));
                let fixed = r.is_fixed_point();
                t = r.output;
                if fixed {
                    break;
                }
            }
            emit(&render::theta(&ThetaReport { steps }, g.format));
        }
        Command::Bound { modulus, eps, constant } => {
            let report = bound_report_with(&engine, &(*modulus).into(), *eps, *constant)?;
            emit(&render::bound(&report, g.format));
        }
        Command::Search { max_c, min_quality } => {
            let v = Verifier::new(engine, options(g));
            let hits = v.search_quality(*max_c, *min_quality)?;
            let report = SearchReport {
                max_c: *max_c,
                min_quality: *min_quality,
                hits: hits.iter().map(SearchHit::from).collect(),
            };
            emit(&render::search(&report, g.format));
        }
        Command::Verify { suite } => return verify(g, engine, suite),
    }
    Ok(ExitCode::SUCCESS)
}

fn options(g: &Global) -> VerifyOptions {
    VerifyOptions {
        workers: g.workers,
        ..VerifyOptions::default()
    }
}

fn corpus(c: &CorpusArgs, seed: u64) -> congabc_core::Result<Box<dyn Iterator<Item = AbcSolution>>> {
    if c.max_c < 3 {
        return Err(Error::CorpusTooSmall { max_c: c.max_c });
    }
    Ok(match c.random {
        Some(count) => Box::new(random_solutions(c.max_c, count, seed)?.into_iter()),
        None => Box::new(enumerate_solutions(c.max_c)),
    })
}

fn verify(g: &Global, engine: Factorizer, suite: &Suite) -> congabc_core::Result<ExitCode> {
    let v = Verifier::new(engine, options(g));
    let summary: SuiteSummary = match suite {
        Suite::Lemma1 { n, eps, corpus: c } => v.lemma1(corpus(c, g.seed)?, n, eps)?,
        Suite::Lemma2 { moduli, corpus: c } => v.lemma2(corpus(c, g.seed)?, &moduli.concat())?,
        Suite::Identities { n, corpus: c } => v.identities(corpus(c, g.seed)?, n)?,
        Suite::Chain {
            modulus,
            eps,
            constant,
            corpus: c,
        } => {
            let assumed = match constant {
                Some(c) => *c,
                None => {
                    let observed = v.max_image_merit(corpus(c, g.seed)?, *modulus, *eps)?;
                    let observed = observed.unwrap_or(0.0);
                    eprintln!("assumed C defaults to the observed maximum image merit {observed}");
                    observed
                }
            };
            v.chain(corpus(c, g.seed)?, *modulus, *eps, assumed)?
        }
    };
    emit(&render::summary(&summary, g.format, v.engine()));
    eprintln!("wall time {:.3}s", summary.wall_time.as_secs_f64());
    Ok(match summary.status() {
        SuiteStatus::Pass => ExitCode::SUCCESS,
        SuiteStatus::Counterexample => {
            if let Some(ce) = render::minimal_counterexample(&summary) {
                eprintln!("counterexample: {}", render::verdict_line(ce));
            }
            ExitCode::from(EXIT_COUNTEREXAMPLE)
        }
        SuiteStatus::InconclusiveOnly => {
            eprintln!("{} inconclusive checks", summary.inconclusive);
            ExitCode::from(EXIT_INCONCLUSIVE)
        }
    })
}
