//! Verification suites over triple corpora.
//!
//! Every suite streams its corpus in fixed-size chunks. A chunk is evaluated
//! on the worker pool and its results are folded in corpus order, so the
//! summary is the same for any worker count.

use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::abc::{merit_from_logs, AbcSolution, MeritReport};
use crate::error::{Error, Result};
use crate::harness::corpus::{enumerate_solutions, small_parts, CorpusHasher};
use crate::harness::verdict::{Check, Grid, Params, SuiteKind, SuiteSummary, SummaryBuilder};
use crate::numtheory::{FactorConfig, Factorizer, PrimeSet};
use crate::real::{ln_biguint, Fixed};
use crate::theta::{check_exponent, constants_fixed, lemma_constants, theta_raw, ThetaPlan, DEFAULT_EXPONENT_CAP};

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOptions {
    /// Worker threads; 0 lets the pool pick.
    pub workers: usize,
    /// Absolute slack tolerance for the inequality checks.
    pub tolerance: f64,
    /// Verdicts with `|slack|` below this are recomputed in fixed point.
    pub recheck_below: f64,
    pub chunk_size: usize,
    pub exponent_cap: u32,
    /// How many counterexamples and inconclusive records to keep.
    pub max_recorded: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            workers: 0,
            tolerance: 1e-9,
            recheck_below: 1e-6,
            chunk_size: 1 << 14,
            exponent_cap: DEFAULT_EXPONENT_CAP,
            max_recorded: 16,
        }
    }
}

/// Per-worker buffers.
#[derive(Default)]
struct Scratch {
    abc: PrimeSet,
    image: PrimeSet,
}

/// Runs the suites with one factorization engine and one set of options.
#[derive(Debug, Clone)]
pub struct Verifier {
    engine: Factorizer,
    options: VerifyOptions,
}

impl Default for Verifier {
    fn default() -> Self {
        Verifier::new(Factorizer::new(FactorConfig::from_env()), VerifyOptions::default())
    }
}

/// Log data of one triple shared by all grid points.
struct Base {
    ln_c: f64,
    ln_rad: f64,
}

impl Base {
    fn compute(engine: &Factorizer, t: &AbcSolution, set: &mut PrimeSet) -> Result<Base> {
        set.clear();
        match small_parts(t) {
            Some((x, y, z)) => {
                set.add_u64(engine, x)?;
                set.add_u64(engine, y)?;
                set.add_u64(engine, z)?;
            }
            None => {
                set.add(engine, &t.abs_a())?;
                set.add(engine, &t.abs_b())?;
                set.add(engine, &t.abs_c())?;
            }
        }
        set.normalize();
        Ok(Base {
            ln_c: ln_biguint(&t.abs_c()),
            ln_rad: set.ln(),
        })
    }
}

/// `ln C` of the image: `n ln c - m ln 2`.
fn image_ln_c(t: &AbcSolution, n: u32, ln_c: f64) -> f64 {
    let m = if t.c().is_even() { n } else { 0 };
    n as f64 * ln_c - m as f64 * std::f64::consts::LN_2
}

fn inconclusive(params: Params, err: &Error) -> Check {
    Check::Inconclusive {
        params,
        reason: err.to_string(),
    }
}

/// Factorization failures become inconclusive checks; anything else aborts.
fn settle(result: Result<Vec<Check>>, params: impl Iterator<Item = Params>) -> Result<Vec<Check>> {
    match result {
        Err(e @ Error::FactorizationFailure { .. }) => Ok(params.map(|p| inconclusive(p, &e)).collect()),
        other => other,
    }
}

/// Both sides of the amplification inequality in fixed point.
struct FixedSides {
    lhs: f64,
    rhs: f64,
    slack: f64,
}

fn fixed_sides(t: &AbcSolution, n: u32, eps: f64, rad_abc: &BigUint, rad_image: &BigUint) -> FixedSides {
    let (c_lin, c_off, eps_out) = constants_fixed(n, eps);
    let one = Fixed::from_int(1);
    let ln_c = Fixed::ln(&t.abs_c());
    let m = if t.c().is_even() { n } else { 0 };
    let ln_big_c = &(&Fixed::from_int(n) * &ln_c) - &(&Fixed::from_int(m) * &Fixed::ln2());
    let lhs = &ln_big_c - &(&(&one + &eps_out) * &Fixed::ln(rad_image));
    let f = &ln_c - &(&(&one + &Fixed::from_f64(eps)) * &Fixed::ln(rad_abc));
    let rhs = &(&c_lin * &f) + &c_off;
    let slack = &lhs - &rhs;
    FixedSides {
        lhs: lhs.to_f64(),
        rhs: rhs.to_f64(),
        slack: slack.to_f64(),
    }
}

impl Verifier {
    pub fn new(engine: Factorizer, options: VerifyOptions) -> Self {
        Verifier { engine, options }
    }

    pub fn engine(&self) -> &Factorizer {
        &self.engine
    }

    pub fn options(&self) -> &VerifyOptions {
        &self.options
    }

    fn pool(&self) -> Result<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.options.workers)
            .build()
            .map_err(|e| Error::WorkerPool(e.to_string()))
    }

    /// Evaluate `work` on every triple and feed the results to `sink` in
    /// corpus order. Returns the corpus size and hash.
    fn run<I, T, W, S>(&self, corpus: I, work: W, mut sink: S) -> Result<(u64, String)>
    where
        I: IntoIterator<Item = AbcSolution>,
        T: Send,
        W: Fn(&AbcSolution, &mut Scratch) -> Result<T> + Sync,
        S: FnMut(&AbcSolution, T) -> Result<()>,
    {
        let pool = self.pool()?;
        let mut hasher = CorpusHasher::default();
        let mut iter = corpus.into_iter();
        let chunk_size = self.options.chunk_size.max(1);
        loop {
            let chunk: Vec<AbcSolution> = iter.by_ref().take(chunk_size).collect();
            if chunk.is_empty() {
                break;
            }
            let results: Vec<Result<T>> = pool.install(|| {
                chunk
                    .par_iter()
                    .map_init(Scratch::default, |scratch, t| work(t, scratch))
                    .collect()
            });
            for (t, r) in chunk.iter().zip(results) {
                hasher.update(t);
                sink(t, r?)?;
            }
        }
        let count = hasher.count();
        Ok((count, hasher.finish()))
    }

    fn run_suite<I, W>(&self, suite: SuiteKind, grid: Grid, corpus: I, work: W) -> Result<SuiteSummary>
    where
        I: IntoIterator<Item = AbcSolution>,
        W: Fn(&AbcSolution, &mut Scratch) -> Result<Vec<Check>> + Sync,
    {
        let start = Instant::now();
        let mut builder = SummaryBuilder::new(suite, grid, self.options.max_recorded);
        let (size, hash) = self.run(corpus, work, |t, checks| {
            builder.absorb(t, checks);
            Ok(())
        })?;
        Ok(builder.finish(size, hash, start.elapsed()))
    }

    fn grid(&self) -> Grid {
        Grid {
            tolerance: self.options.tolerance,
            ..Grid::default()
        }
    }

    /// `f(Theta_n(aa), eps_out) >= c_lin f(aa, eps) + c_off` for every triple
    /// and every `(n, eps)`; slack is `lhs - rhs`.
    pub fn lemma1<I>(&self, corpus: I, n_grid: &[u32], eps_grid: &[f64]) -> Result<SuiteSummary>
    where
        I: IntoIterator<Item = AbcSolution>,
    {
        if n_grid.is_empty() {
            return Err(Error::EmptyGrid { which: "n" });
        }
        if eps_grid.is_empty() {
            return Err(Error::EmptyGrid { which: "eps" });
        }
        let mut plans = Vec::with_capacity(n_grid.len());
        let mut constants = Vec::with_capacity(n_grid.len() * eps_grid.len());
        for &n in n_grid {
            plans.push(ThetaPlan::new(n, self.options.exponent_cap)?);
            for &eps in eps_grid {
                constants.push(lemma_constants(n, eps)?);
            }
        }
        let params: Vec<Params> = constants
            .iter()
            .map(|k| Params {
                n: Some(k.n),
                eps: Some(k.epsilon),
                modulus: None,
            })
            .collect();
        let opts = &self.options;
        let engine = &self.engine;
        let work = |t: &AbcSolution, s: &mut Scratch| -> Result<Vec<Check>> {
            let base = Base::compute(engine, t, &mut s.abc);
            let base = match base {
                Ok(b) => b,
                Err(e) => return settle(Err(e), params.iter().copied()),
            };
            let mut out = Vec::with_capacity(params.len());
            for (i, plan) in plans.iter().enumerate() {
                let row = &constants[i * eps_grid.len()..(i + 1) * eps_grid.len()];
                let row_params = &params[i * eps_grid.len()..(i + 1) * eps_grid.len()];
                if let Err(e) = plan.image_primes(engine, t, &mut s.image) {
                    out.extend(settle(Err(e), row_params.iter().copied())?);
                    continue;
                }
                let ln_big_c = image_ln_c(t, plan.n(), base.ln_c);
                let ln_rad_image = s.image.ln();
                for (k, p) in row.iter().zip(row_params) {
                    let f = merit_from_logs(base.ln_c, base.ln_rad, k.epsilon);
                    let mut lhs = merit_from_logs(ln_big_c, ln_rad_image, k.eps_out);
                    let mut rhs = k.c_lin * f + k.c_off;
                    let mut slack = lhs - rhs;
                    let near = slack.abs() < opts.recheck_below;
                    if near {
                        let fx = fixed_sides(t, k.n, k.epsilon, &s.abc.product(), &s.image.product());
                        lhs = fx.lhs;
                        rhs = fx.rhs;
                        slack = fx.slack;
                    }
                    out.push(Check::Done {
                        params: *p,
                        lhs: Some(lhs),
                        rhs: Some(rhs),
                        slack: Some(slack),
                        pass: slack >= -opts.tolerance,
                        witness: None,
                        high_precision: near,
                    });
                }
            }
            Ok(out)
        };
        let grid = Grid {
            n: n_grid.to_vec(),
            eps: eps_grid.to_vec(),
            ..self.grid()
        };
        self.run_suite(SuiteKind::Lemma1, grid, corpus, work)
    }

    /// `N | A B C` for the image under `Theta_phi(N)`, for every modulus.
    pub fn lemma2<I>(&self, corpus: I, moduli: &[u64]) -> Result<SuiteSummary>
    where
        I: IntoIterator<Item = AbcSolution>,
    {
        if moduli.is_empty() {
            return Err(Error::EmptyGrid { which: "modulus" });
        }
        let mut params = Vec::with_capacity(moduli.len());
        for &modulus in moduli {
            if modulus < 3 {
                return Err(Error::InvalidModulus { modulus, min: 3 });
            }
            let phi = self.engine.totient(&BigUint::from(modulus))?;
            let n = phi.to_u32().unwrap_or(u32::MAX);
            if n > self.options.exponent_cap {
                return Err(Error::ExponentCapExceeded {
                    n: phi.to_u64().unwrap_or(u64::MAX),
                    cap: self.options.exponent_cap,
                });
            }
            check_exponent(n, self.options.exponent_cap)?;
            params.push(Params {
                n: Some(n),
                eps: None,
                modulus: Some(modulus),
            });
        }
        let work = |t: &AbcSolution, _: &mut Scratch| -> Result<Vec<Check>> {
            let mut exact: Vec<(u32, [BigInt; 3])> = Vec::new();
            let mut out = Vec::with_capacity(params.len());
            for p in &params {
                let (n, modulus) = (p.n.unwrap(), p.modulus.unwrap());
                let residue = match image_product_mod_word(t, n, modulus) {
                    Some(r) => r,
                    None => {
                        let raw = match exact.iter().find(|(k, _)| *k == n) {
                            Some((_, raw)) => raw,
                            None => {
                                exact.push((n, theta_raw(t, n)?.1));
                                &exact.last().unwrap().1
                            }
                        };
                        let big_n = BigInt::from(modulus);
                        let r = raw.iter().fold(BigInt::one(), |acc, x| (acc * x).mod_floor(&big_n));
                        r.to_u64().expect("residue below modulus")
                    }
                };
                out.push(Check::Done {
                    params: *p,
                    lhs: None,
                    rhs: None,
                    slack: None,
                    pass: residue == 0,
                    witness: (residue != 0).then(|| format!("ABC mod {modulus} = {residue}")),
                    high_precision: false,
                });
            }
            Ok(out)
        };
        let grid = Grid {
            n: {
                let mut ns: Vec<u32> = params.iter().filter_map(|p| p.n).collect();
                ns.sort_unstable();
                ns.dedup();
                ns
            },
            modulus: moduli.to_vec(),
            ..self.grid()
        };
        self.run_suite(SuiteKind::Lemma2, grid, corpus, work)
    }

    /// The three steps behind the amplification inequality, per `(triple, n)`:
    ///
    /// 1. `(a+b)^n - (a-b)^n = 4ab * sum_i (a+b)^(n-2-2i) (a-b)^(2i)` exactly;
    /// 2. `Q = ((a+b)^n - (a-b)^n) / (ab)` is an integer with
    ///    `|Q| <= 2n |a+b|^(n-2)`;
    /// 3. `rad(ABC) <= |a-b| rad(abc) rad(Q)` as integers.
    ///
    /// The reported sides are the logarithms in step 3, slack `rhs - lhs`;
    /// the witness is `Q`.
    pub fn identities<I>(&self, corpus: I, n_grid: &[u32]) -> Result<SuiteSummary>
    where
        I: IntoIterator<Item = AbcSolution>,
    {
        if n_grid.is_empty() {
            return Err(Error::EmptyGrid { which: "n" });
        }
        let plans = n_grid
            .iter()
            .map(|&n| ThetaPlan::new(n, self.options.exponent_cap))
            .collect::<Result<Vec<_>>>()?;
        let engine = &self.engine;
        let work = |t: &AbcSolution, s: &mut Scratch| -> Result<Vec<Check>> {
            let params = n_grid.iter().map(|&n| Params {
                n: Some(n),
                ..Params::default()
            });
            let result = (|| {
                let base = Base::compute(engine, t, &mut s.abc)?;
                let rad_abc = s.abc.product();
                let (a, b) = (t.a(), t.b());
                let sum = a + b;
                let diff = a - b;
                let ab = a * b;
                let mut out = Vec::with_capacity(plans.len());
                for plan in &plans {
                    let n = plan.n();
                    let lhs_i = sum.pow(n) - diff.pow(n);
                    let series: BigInt = (0..n / 2)
                        .map(|i| sum.pow(n - 2 - 2 * i) * diff.pow(2 * i))
                        .sum();
                    let identity = lhs_i == BigInt::from(4) * &ab * &series;
                    let (q, rem) = lhs_i.div_rem(&ab);
                    let bounded = rem.is_zero() && q.abs() <= BigInt::from(2 * n) * sum.abs().pow(n - 2);

                    plan.image_primes(engine, t, &mut s.image)?;
                    let rad_image = s.image.product();
                    let mut q_set = PrimeSet::default();
                    q_set.add(engine, q.magnitude())?;
                    q_set.normalize();
                    let rad_q = q_set.product();
                    let radical = rad_image <= diff.magnitude() * &rad_abc * &rad_q;

                    let lhs = s.image.ln();
                    let rhs = ln_biguint(diff.magnitude()) + base.ln_rad + q_set.ln();
                    out.push(Check::Done {
                        params: Params {
                            n: Some(n),
                            ..Params::default()
                        },
                        lhs: Some(lhs),
                        rhs: Some(rhs),
                        slack: Some(rhs - lhs),
                        pass: identity && bounded && radical,
                        witness: Some(q.to_string()),
                        high_precision: false,
                    });
                }
                Ok(out)
            })();
            settle(result, params)
        };
        let grid = Grid {
            n: n_grid.to_vec(),
            ..self.grid()
        };
        self.run_suite(SuiteKind::Identities, grid, corpus, work)
    }

    /// `f(Theta_n(aa), eps_out)` for every triple, `n = phi(N)`; `None` for
    /// an empty corpus.
    pub fn max_image_merit<I>(&self, corpus: I, modulus: u64, eps: f64) -> Result<Option<f64>>
    where
        I: IntoIterator<Item = AbcSolution>,
    {
        let (plan, k) = self.chain_setup(modulus, eps)?;
        let engine = &self.engine;
        let mut best: Option<f64> = None;
        self.run(
            corpus,
            |t, s| {
                plan.image_primes(engine, t, &mut s.image)?;
                let ln_big_c = image_ln_c(t, plan.n(), ln_biguint(&t.abs_c()));
                Ok(merit_from_logs(ln_big_c, s.image.ln(), k.eps_out))
            },
            |_, f| {
                best = Some(best.map_or(f, |b| b.max(f)));
                Ok(())
            },
        )?;
        Ok(best)
    }

    fn chain_setup(&self, modulus: u64, eps: f64) -> Result<(ThetaPlan, crate::theta::LemmaConstants)> {
        if modulus < 3 {
            return Err(Error::InvalidModulus { modulus, min: 3 });
        }
        let phi = self.engine.totient(&BigUint::from(modulus))?;
        let n = match phi.to_u32() {
            Some(n) if n <= self.options.exponent_cap => n,
            _ => {
                return Err(Error::ExponentCapExceeded {
                    n: phi.to_u64().unwrap_or(u64::MAX),
                    cap: self.options.exponent_cap,
                })
            }
        };
        Ok((ThetaPlan::new(n, self.options.exponent_cap)?, lemma_constants(n, eps)?))
    }

    /// `f(aa, eps) <= (f(Theta_n(aa), eps_out) - c_off) / c_lin <= bound`,
    /// with `n = phi(N)` and `bound = (C - c_off) / c_lin`, for every triple.
    ///
    /// `C` is a hypothesis: an image merit above it aborts the run with
    /// [`Error::HypothesisViolated`]. Slack is the margin of the first
    /// inequality.
    pub fn chain<I>(&self, corpus: I, modulus: u64, eps: f64, assumed_constant: f64) -> Result<SuiteSummary>
    where
        I: IntoIterator<Item = AbcSolution>,
    {
        let (plan, k) = self.chain_setup(modulus, eps)?;
        let n = plan.n();
        let bound = (assumed_constant - k.c_off) / k.c_lin;
        let params = Params {
            n: Some(n),
            eps: Some(eps),
            modulus: Some(modulus),
        };
        let opts = &self.options;
        let engine = &self.engine;
        let work = |t: &AbcSolution, s: &mut Scratch| -> Result<Vec<Check>> {
            let result = (|| {
                let base = Base::compute(engine, t, &mut s.abc)?;
                plan.image_primes(engine, t, &mut s.image)?;
                let image_f = merit_from_logs(image_ln_c(t, n, base.ln_c), s.image.ln(), k.eps_out);
                if image_f > assumed_constant {
                    return Err(Error::HypothesisViolated {
                        assumed: assumed_constant,
                        observed: image_f,
                        triple: t.to_string(),
                    });
                }
                let mut lhs = merit_from_logs(base.ln_c, base.ln_rad, eps);
                let mut rhs = (image_f - k.c_off) / k.c_lin;
                let mut slack = rhs - lhs;
                let near = slack.abs() < opts.recheck_below;
                if near {
                    // Same inequality multiplied through by c_lin > 0.
                    let fx = fixed_sides(t, n, eps, &s.abc.product(), &s.image.product());
                    lhs = (fx.rhs - k.c_off) / k.c_lin;
                    rhs = (fx.lhs - k.c_off) / k.c_lin;
                    slack = fx.slack / k.c_lin;
                }
                Ok(vec![Check::Done {
                    params,
                    lhs: Some(lhs),
                    rhs: Some(rhs),
                    slack: Some(slack),
                    pass: slack >= -opts.tolerance && rhs <= bound + opts.tolerance,
                    witness: None,
                    high_precision: near,
                }])
            })();
            settle(result, std::iter::once(params))
        };
        let grid = Grid {
            n: vec![n],
            eps: vec![eps],
            modulus: vec![modulus],
            assumed_constant: Some(assumed_constant),
            ..self.grid()
        };
        self.run_suite(SuiteKind::Chain, grid, corpus, work)
    }

    /// Every solution with `c <= max_c` and quality above `threshold`,
    /// highest quality first.
    pub fn search_quality(&self, max_c: u64, threshold: f64) -> Result<Vec<MeritReport>> {
        if max_c < 3 {
            return Err(Error::CorpusTooSmall { max_c });
        }
        if threshold.is_nan() || threshold <= 0.0 {
            return Err(Error::InvalidThreshold { threshold });
        }
        let engine = &self.engine;
        let mut hits = Vec::new();
        self.run(
            enumerate_solutions(max_c),
            |t, s| {
                let base = Base::compute(engine, t, &mut s.abc)?;
                let q = base.ln_c / base.ln_rad;
                Ok((q > threshold).then(|| (q, merit_from_logs(base.ln_c, base.ln_rad, 0.0), s.abc.product())))
            },
            |t, hit| {
                if let Some((quality, merit, rad_abc)) = hit {
                    hits.push(MeritReport {
                        triple: t.clone(),
                        rad_abc,
                        quality,
                        merit,
                        epsilon: 0.0,
                    });
                }
                Ok(())
            },
        )?;
        hits.sort_by(|x, y| {
            y.quality
                .total_cmp(&x.quality)
                .then_with(|| x.triple.sort_key().cmp(&y.triple.sort_key()))
        });
        Ok(hits)
    }
}

/// `A B C mod N` from word arithmetic modulo `N 2^m`, when that modulus fits
/// in a word.
fn image_product_mod_word(t: &AbcSolution, n: u32, modulus: u64) -> Option<u64> {
    let (x, y, c) = small_parts(t)?;
    let d = x - y;
    let m = if c % 2 == 0 { n } else { 0 };
    if m >= 64 || modulus.leading_zeros() <= m {
        return None;
    }
    let big_m = (modulus as u128) << m;
    let pow = |base: u64| -> u128 {
        let (mut acc, mut b, mut e) = (1u128 % big_m, base as u128 % big_m, n);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % big_m;
            }
            b = b * b % big_m;
            e >>= 1;
        }
        acc
    };
    let d_pow = pow(d);
    let c_pow = pow(c);
    let b_pow = (c_pow + big_m - d_pow) % big_m;
    let mask = (1u128 << m) - 1;
    debug_assert!(d_pow & mask == 0 && c_pow & mask == 0 && b_pow & mask == 0);
    let md = modulus as u128;
    let r = (d_pow >> m) % md * ((b_pow >> m) % md) % md * ((c_pow >> m) % md) % md;
    Some(r as u64)
}

fn default_verifier() -> Verifier {
    Verifier::default()
}

pub fn verify_lemma1<I>(corpus: I, n_grid: &[u32], eps_grid: &[f64]) -> Result<SuiteSummary>
where
    I: IntoIterator<Item = AbcSolution>,
{
    default_verifier().lemma1(corpus, n_grid, eps_grid)
}

pub fn verify_lemma2<I>(corpus: I, moduli: &[u64]) -> Result<SuiteSummary>
where
    I: IntoIterator<Item = AbcSolution>,
{
    default_verifier().lemma2(corpus, moduli)
}

pub fn verify_proof_identities<I>(corpus: I, n_grid: &[u32]) -> Result<SuiteSummary>
where
    I: IntoIterator<Item = AbcSolution>,
{
    default_verifier().identities(corpus, n_grid)
}

pub fn verify_reduction_chain<I>(corpus: I, modulus: u64, eps: f64, assumed_constant: f64) -> Result<SuiteSummary>
where
    I: IntoIterator<Item = AbcSolution>,
{
    default_verifier().chain(corpus, modulus, eps, assumed_constant)
}

pub fn search_quality(max_c: u64, threshold: f64) -> Result<Vec<MeritReport>> {
    default_verifier().search_quality(max_c, threshold)
}
