//! The operator `Theta_n` on ABC-solutions, the constants of the quality
//! amplification inequality, and the bound it yields for all triples.
//!
//! For even `n`,
//!
//! ```text
//! Theta_n(a, b, c) = (-(a-b)^n / 2^m, -(c^n - (a-b)^n) / 2^m, c^n / 2^m)
//! ```
//!
//! with `m = n` when `c` is even and `m = 0` otherwise. When `c` is even one
//! of `c`, `a - b` is divisible by 4 (their sum is `2a`, which is 2 mod 4), so
//! all three divisions are exact.

mod cyclotomic;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::abc::{make_solution, AbcSolution};
use crate::error::{Error, Result};
use crate::numtheory::{default_factorizer, Factorizer, PrimeSet};
use crate::real::Fixed;
use crate::report::{round12, ser_biguint};

pub const DEFAULT_EXPONENT_CAP: u32 = 64;

/// One application of `Theta_n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThetaResult {
    pub input: AbcSolution,
    pub n: u32,
    pub m: u32,
    /// `(A, B, C)` in the operator's own order, before normalization.
    #[serde(serialize_with = "ser_components")]
    pub raw: [BigInt; 3],
    pub output: AbcSolution,
}

fn ser_components<S: serde::Serializer>(raw: &[BigInt; 3], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(raw.iter().map(|x| x.to_string()))
}

impl ThetaResult {
    /// `output == input`.
    pub fn is_fixed_point(&self) -> bool {
        self.output == self.input
    }
}

/// Reject odd, zero, or over-cap exponents.
pub fn check_exponent(n: u32, cap: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::ZeroN);
    }
    if n % 2 == 1 {
        return Err(Error::OddN { n });
    }
    if n > cap {
        return Err(Error::ExponentCapExceeded { n: n as u64, cap });
    }
    Ok(())
}

pub fn theta(aa: &AbcSolution, n: u32) -> Result<ThetaResult> {
    theta_with_cap(aa, n, DEFAULT_EXPONENT_CAP)
}

pub fn theta_with_cap(aa: &AbcSolution, n: u32, cap: u32) -> Result<ThetaResult> {
    check_exponent(n, cap)?;
    let (m, [big_a, big_b, big_c]) = theta_raw(aa, n)?;
    let output = make_solution(&big_a, &big_b, &big_c)?;
    Ok(ThetaResult {
        input: aa.clone(),
        n,
        m,
        raw: [big_a, big_b, big_c],
        output,
    })
}

/// `(m, [A, B, C])` without normalization; `n` must already be checked.
pub(crate) fn theta_raw(aa: &AbcSolution, n: u32) -> Result<(u32, [BigInt; 3])> {
    let diff_pow = (aa.a() - aa.b()).pow(n);
    let c_pow = aa.c().pow(n);
    let m = if aa.c().is_even() { n } else { 0 };
    let big_a = -exact_shift(&diff_pow, m)?;
    let big_b = -exact_shift(&(&c_pow - &diff_pow), m)?;
    let big_c = exact_shift(&c_pow, m)?;
    // c^n = 2 (a-b)^n has no integer solutions, so A != B.
    debug_assert!(big_a != big_b);
    Ok((m, [big_a, big_b, big_c]))
}

fn exact_shift(x: &BigInt, m: u32) -> Result<BigInt> {
    if m == 0 {
        return Ok(x.clone());
    }
    match x.trailing_zeros() {
        Some(tz) if tz >= m as u64 => Ok(x >> m),
        None => Ok(BigInt::zero()),
        _ => Err(Error::InternalInexactDivision {
            m,
            value: x.to_string(),
        }),
    }
}

/// Constants of the amplification inequality
/// `f(Theta_n(aa), eps_out) >= c_lin * f(aa, eps) + c_off`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LemmaConstants {
    pub n: u32,
    #[serde(serialize_with = "round12")]
    pub epsilon: f64,
    /// `n / (n + n eps - eps)`
    #[serde(serialize_with = "round12")]
    pub c_lin: f64,
    /// `-n (1 + eps) ln(2n) / (n + n eps - eps) - n ln 2`
    #[serde(serialize_with = "round12")]
    pub c_off: f64,
    /// `eps / (n + (n - 1) eps)`
    #[serde(serialize_with = "round12")]
    pub eps_out: f64,
}

pub fn lemma_constants(n: u32, epsilon: f64) -> Result<LemmaConstants> {
    check_exponent(n, u32::MAX)?;
    check_epsilon(epsilon)?;
    let (c_lin, c_off, eps_out) = constants_f64(n as f64, epsilon);
    Ok(LemmaConstants {
        n,
        epsilon,
        c_lin,
        c_off,
        eps_out,
    })
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon.is_finite() {
        Ok(())
    } else {
        Err(Error::NonpositiveEpsilon { epsilon })
    }
}

fn constants_f64(n: f64, eps: f64) -> (f64, f64, f64) {
    let denom = n + n * eps - eps;
    let c_lin = n / denom;
    let c_off = -n * (1.0 + eps) * (2.0 * n).ln() / denom - n * std::f64::consts::LN_2;
    (c_lin, c_off, eps / denom)
}

/// The same constants in fixed point, with `eps` taken as its exact binary
/// value.
pub(crate) fn constants_fixed(n: u32, eps: f64) -> (Fixed, Fixed, Fixed) {
    let nf = Fixed::from_int(n);
    let eps = Fixed::from_f64(eps);
    let one = Fixed::from_int(1);
    let denom = &(&nf + &(&nf * &eps)) - &eps;
    let c_lin = &nf / &denom;
    let ln_2n = Fixed::ln(&BigUint::from(2 * n as u64));
    let c_off = &(-&(&(&(&nf * &(&one + &eps)) * &ln_2n) / &denom)) - &(&nf * &Fixed::ln2());
    let eps_out = &eps / &denom;
    (c_lin, c_off, eps_out)
}

/// Inputs and result of [`derived_full_bound`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    #[serde(serialize_with = "ser_biguint")]
    pub modulus: BigUint,
    #[serde(serialize_with = "round12")]
    pub epsilon: f64,
    #[serde(serialize_with = "round12")]
    pub congruence_constant: f64,
    /// `phi(N)`, absent when `N <= 2`.
    #[serde(serialize_with = "crate::report::round12_opt")]
    pub n: Option<f64>,
    pub constants: Option<LemmaConstants>,
    #[serde(serialize_with = "round12")]
    pub bound: f64,
}

/// Upper bound on `f(aa, eps)` for every ABC-solution, given that `f < C`
/// holds at `eps_out` for every triple with `N | abc`.
///
/// `C` is a hypothesis supplied by the caller; the function only propagates
/// it. For `N <= 2` every triple already satisfies `N | abc` and `C` is
/// returned as is.
pub fn derived_full_bound(modulus: &BigUint, epsilon: f64, congruence_constant: f64) -> Result<f64> {
    Ok(bound_report_with(default_factorizer(), modulus, epsilon, congruence_constant)?.bound)
}

pub fn bound_report_with(
    engine: &Factorizer,
    modulus: &BigUint,
    epsilon: f64,
    congruence_constant: f64,
) -> Result<BoundReport> {
    if modulus.is_zero() {
        return Err(Error::InvalidModulus { modulus: 0, min: 1 });
    }
    check_epsilon(epsilon)?;
    let mut report = BoundReport {
        modulus: modulus.clone(),
        epsilon,
        congruence_constant,
        n: None,
        constants: None,
        bound: congruence_constant,
    };
    if *modulus <= BigUint::from(2u32) {
        return Ok(report);
    }
    let n = engine.totient(modulus)?;
    let nf = n.to_f64().unwrap_or(f64::INFINITY);
    let (c_lin, c_off, eps_out) = constants_f64(nf, epsilon);
    report.n = Some(nf);
    report.constants = n.to_u32().map(|n| LemmaConstants {
        n,
        epsilon,
        c_lin,
        c_off,
        eps_out,
    });
    report.bound = (congruence_constant - c_off) / c_lin;
    Ok(report)
}

/// Precomputed cyclotomic factors for one exponent.
///
/// The primes of `A B C` are the primes of `2 |a-b| c` together with those of
/// `Phi_d(c, |a-b|)` for every `d | n`; each piece is far smaller than `B`.
#[derive(Debug, Clone)]
pub struct ThetaPlan {
    n: u32,
    pieces: Vec<Vec<i64>>,
}

impl ThetaPlan {
    pub fn new(n: u32, cap: u32) -> Result<Self> {
        check_exponent(n, cap)?;
        let pieces = cyclotomic::divisors(n)
            .into_iter()
            .map(cyclotomic::cyclotomic)
            .collect();
        Ok(ThetaPlan { n, pieces })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Collect the distinct primes of `A B C` for `Theta_n(aa)` into `set`.
    pub(crate) fn image_primes(
        &self,
        engine: &Factorizer,
        aa: &AbcSolution,
        set: &mut PrimeSet,
    ) -> Result<()> {
        set.clear();
        // Exactly one of A, B, C is even.
        set.insert_prime(2);
        let diff = (aa.a() - aa.b()).magnitude().clone();
        let c = aa.abs_c();
        set.add(engine, &diff)?;
        set.add(engine, &c)?;
        match (diff.to_u64(), c.to_u64()) {
            (Some(y), Some(x)) => {
                for coefs in &self.pieces {
                    match cyclotomic::eval_homogeneous_i128(coefs, x, y) {
                        Some(v) => match u64::try_from(v) {
                            Ok(w) => set.add_u64(engine, w)?,
                            Err(_) => set.add(engine, &BigUint::try_from(v).expect("positive"))?,
                        },
                        None => self.add_big_piece(engine, coefs, &c, &diff, set)?,
                    }
                }
            }
            _ => {
                for coefs in &self.pieces {
                    self.add_big_piece(engine, coefs, &c, &diff, set)?;
                }
            }
        }
        set.normalize();
        Ok(())
    }

    fn add_big_piece(
        &self,
        engine: &Factorizer,
        coefs: &[i64],
        x: &BigUint,
        y: &BigUint,
        set: &mut PrimeSet,
    ) -> Result<()> {
        let v = cyclotomic::eval_homogeneous(coefs, &BigInt::from(x.clone()), &BigInt::from(y.clone()));
        set.add(engine, v.magnitude())
    }

    /// `rad(|A B C|)` for `Theta_n(aa)`.
    pub fn image_radical(&self, engine: &Factorizer, aa: &AbcSolution) -> Result<BigUint> {
        let mut set = PrimeSet::default();
        self.image_primes(engine, aa, &mut set)?;
        Ok(set.product())
    }
}
