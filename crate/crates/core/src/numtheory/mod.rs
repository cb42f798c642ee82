//! Exact arbitrary-precision number theory: gcd, powers, 2-adic valuation,
//! factorization, radical and Euler's totient.
//!
//! Factorization runs trial division against a sieved prime table, hands
//! cofactors that fit a machine word to a `u64` engine (deterministic
//! Miller-Rabin, Brent's rho over Montgomery arithmetic) and splits larger
//! cofactors with a big-integer rho after a seeded probabilistic
//! Miller-Rabin. Every step is a pure function of the input and
//! [`FactorConfig`].

pub(crate) mod modarith;
pub mod prime;
mod rho;

use std::fmt;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_integer::{Integer, Roots};
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use prime::{is_prime_u64, is_probable_prime, primes_up_to};

/// Environment variable read by [`FactorConfig::from_env`] for the rho budget.
pub const RHO_BUDGET_ENV: &str = "CONGABC_RHO_BUDGET";

// Word-sized inputs stop trial division here and go to Miller-Rabin and
// rho, which beat a long division loop once the cofactor has no tiny factors.
const WORD_TRIAL_LIMIT: u32 = 1 << 10;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorConfig {
    /// Largest prime used for trial division of multi-word inputs.
    pub trial_bound: u32,
    /// Random Miller-Rabin rounds for cofactors of 64 bits or more.
    pub mr_rounds: u32,
    /// Rho iterations allowed per composite cofactor before giving up.
    pub rho_budget: u64,
    /// Seed for the probabilistic primality witnesses.
    pub seed: u64,
}

impl Default for FactorConfig {
    fn default() -> Self {
        FactorConfig {
            trial_bound: 100_000,
            mr_rounds: 40,
            rho_budget: 1 << 26,
            seed: 0x5eed_abc0,
        }
    }
}

impl FactorConfig {
    /// Defaults, with the rho budget overridden by `CONGABC_RHO_BUDGET` when
    /// it is set to a valid integer.
    pub fn from_env() -> Self {
        let mut config = FactorConfig::default();
        if let Some(budget) = std::env::var(RHO_BUDGET_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
        {
            config.rho_budget = budget;
        }
        config
    }
}

/// Prime factorization of a positive integer: primes strictly increasing,
/// every exponent at least one.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Factorization {
    factors: Vec<(BigUint, u32)>,
}

impl Factorization {
    /// Build from unsorted, possibly repeated prime powers.
    fn from_unsorted(mut factors: Vec<(BigUint, u32)>) -> Self {
        factors.sort_by(|x, y| x.0.cmp(&y.0));
        let mut merged: Vec<(BigUint, u32)> = Vec::with_capacity(factors.len());
        for (p, e) in factors {
            match merged.last_mut() {
                Some(last) if last.0 == p => last.1 += e,
                _ => merged.push((p, e)),
            }
        }
        Factorization { factors: merged }
    }

    pub fn factors(&self) -> &[(BigUint, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigUint> {
        self.factors.iter().map(|(p, _)| p)
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Product of the prime powers.
    pub fn value(&self) -> BigUint {
        self.factors
            .iter()
            .map(|(p, e)| p.pow(*e))
            .fold(BigUint::one(), |acc, x| acc * x)
    }

    pub fn radical(&self) -> BigUint {
        self.primes().fold(BigUint::one(), |acc, p| acc * p)
    }

    pub fn totient(&self) -> BigUint {
        self.factors
            .iter()
            .map(|(p, e)| p.pow(e - 1) * (p - 1u32))
            .fold(BigUint::one(), |acc, x| acc * x)
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        for (i, (p, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str(" * ")?;
            }
            if *e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Factorization engine with a precomputed trial-division table.
#[derive(Debug, Clone)]
pub struct Factorizer {
    config: FactorConfig,
    primes: Vec<u32>,
}

impl Default for Factorizer {
    fn default() -> Self {
        Factorizer::new(FactorConfig::default())
    }
}

impl Factorizer {
    pub fn new(config: FactorConfig) -> Self {
        let primes = primes_up_to(config.trial_bound.max(WORD_TRIAL_LIMIT));
        Factorizer { config, primes }
    }

    pub fn config(&self) -> &FactorConfig {
        &self.config
    }

    /// Complete prime factorization of `n >= 1`.
    pub fn factorize(&self, n: &BigUint) -> Result<Factorization> {
        if n.is_zero() {
            return Err(Error::NonPositive { what: "factorize input" });
        }
        let mut small = Vec::new();
        let mut big = Vec::new();
        self.factor_into(n, &mut small, &mut big)?;
        let mut factors: Vec<(BigUint, u32)> =
            small.into_iter().map(|(p, e)| (BigUint::from(p), e)).collect();
        factors.extend(big);
        Ok(Factorization::from_unsorted(factors))
    }

    /// Factorization of a machine word as `(prime, exponent)` pairs, sorted.
    pub fn factorize_u64(&self, n: u64) -> Result<Vec<(u64, u32)>> {
        if n == 0 {
            return Err(Error::NonPositive { what: "factorize input" });
        }
        let mut out = Vec::new();
        self.factor_u64_into(n, 1, &mut out)?;
        out.sort_unstable();
        let mut merged: Vec<(u64, u32)> = Vec::with_capacity(out.len());
        for (p, e) in out {
            match merged.last_mut() {
                Some(last) if last.0 == p => last.1 += e,
                _ => merged.push((p, e)),
            }
        }
        Ok(merged)
    }

    pub(crate) fn factor_into(
        &self,
        n: &BigUint,
        small: &mut Vec<(u64, u32)>,
        big: &mut Vec<(BigUint, u32)>,
    ) -> Result<()> {
        if let Some(w) = n.to_u64() {
            return self.factor_u64_into(w, 1, small);
        }
        let mut rest = n.clone();
        let tz = rest.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            small.push((2, tz as u32));
            rest >>= tz;
        }
        for &p in self.primes.iter().skip(1).take_while(|&&p| p <= self.config.trial_bound) {
            if let Some(w) = rest.to_u64() {
                return self.factor_u64_into(w, 1, small);
            }
            if prime::rem_u32(&rest, p) == 0 {
                let mut e = 0;
                while prime::rem_u32(&rest, p) == 0 {
                    rest /= p;
                    e += 1;
                }
                small.push((p as u64, e));
            }
        }
        if let Some(w) = rest.to_u64() {
            return self.factor_u64_into(w, 1, small);
        }
        let mut stack = vec![(rest, 1u32)];
        while let Some((m, mult)) = stack.pop() {
            if let Some(w) = m.to_u64() {
                self.factor_u64_into(w, mult, small)?;
                continue;
            }
            if is_probable_prime(&m, self.config.mr_rounds, self.config.seed) {
                big.push((m, mult));
                continue;
            }
            if let Some((root, k)) = perfect_power(&m) {
                stack.push((root, mult * k));
                continue;
            }
            let mut budget = self.config.rho_budget;
            match rho::split_big(&m, &mut budget) {
                Some(d) => {
                    let other = &m / &d;
                    stack.push((d, mult));
                    stack.push((other, mult));
                }
                None => {
                    return Err(Error::FactorizationFailure {
                        cofactor: m.to_string(),
                        budget: self.config.rho_budget,
                    })
                }
            }
        }
        Ok(())
    }

    fn factor_u64_into(&self, mut n: u64, mult: u32, out: &mut Vec<(u64, u32)>) -> Result<()> {
        if n <= 1 {
            return Ok(());
        }
        let tz = n.trailing_zeros();
        if tz > 0 {
            out.push((2, tz * mult));
            n >>= tz;
        }
        let limit = self.config.trial_bound.min(WORD_TRIAL_LIMIT);
        for &p in self.primes.iter().skip(1) {
            if p > limit {
                break;
            }
            let p = p as u64;
            if p * p > n {
                if n > 1 {
                    out.push((n, mult));
                }
                return Ok(());
            }
            if n.is_multiple_of(p) {
                let mut e = 0;
                while n.is_multiple_of(p) {
                    n /= p;
                    e += 1;
                }
                out.push((p, e * mult));
            }
        }
        let mut stack = vec![(n, mult)];
        while let Some((m, mult)) = stack.pop() {
            if m == 1 {
                continue;
            }
            if is_prime_u64(m) {
                out.push((m, mult));
                continue;
            }
            if let Some((root, k)) = perfect_power_u64(m) {
                stack.push((root, mult * k));
                continue;
            }
            let mut budget = self.config.rho_budget;
            match rho::split_u64(m, &mut budget) {
                Some(d) => {
                    stack.push((d, mult));
                    stack.push((m / d, mult));
                }
                None => {
                    return Err(Error::FactorizationFailure {
                        cofactor: m.to_string(),
                        budget: self.config.rho_budget,
                    })
                }
            }
        }
        Ok(())
    }

    pub fn radical(&self, n: &BigUint) -> Result<BigUint> {
        Ok(self.factorize(n)?.radical())
    }

    pub fn totient(&self, n: &BigUint) -> Result<BigUint> {
        Ok(self.factorize(n)?.totient())
    }
}

/// Distinct primes gathered from the factorizations of several integers.
///
/// Lets the suites take the radical of a product without forming it.
#[derive(Debug, Default, Clone)]
pub(crate) struct PrimeSet {
    small: Vec<u64>,
    big: Vec<BigUint>,
    scratch: Vec<(u64, u32)>,
    scratch_big: Vec<(BigUint, u32)>,
}

impl PrimeSet {
    pub(crate) fn clear(&mut self) {
        self.small.clear();
        self.big.clear();
    }

    pub(crate) fn insert_prime(&mut self, p: u64) {
        self.small.push(p);
    }

    pub(crate) fn add_u64(&mut self, engine: &Factorizer, n: u64) -> Result<()> {
        self.scratch.clear();
        engine.factor_u64_into(n, 1, &mut self.scratch)?;
        self.small.extend(self.scratch.iter().map(|&(p, _)| p));
        Ok(())
    }

    pub(crate) fn add(&mut self, engine: &Factorizer, n: &BigUint) -> Result<()> {
        if let Some(w) = n.to_u64() {
            return self.add_u64(engine, w);
        }
        self.scratch.clear();
        self.scratch_big.clear();
        engine.factor_into(n, &mut self.scratch, &mut self.scratch_big)?;
        self.small.extend(self.scratch.iter().map(|&(p, _)| p));
        self.big.extend(self.scratch_big.drain(..).map(|(p, _)| p));
        Ok(())
    }

    /// Sort and drop duplicates; call before reading the set.
    pub(crate) fn normalize(&mut self) {
        self.small.sort_unstable();
        self.small.dedup();
        self.big.sort();
        self.big.dedup();
    }

    pub(crate) fn ln(&self) -> f64 {
        self.small.iter().map(|&p| crate::real::ln_u64(p)).sum::<f64>()
            + self.big.iter().map(crate::real::ln_biguint).sum::<f64>()
    }

    pub(crate) fn product(&self) -> BigUint {
        let small = self
            .small
            .iter()
            .fold(BigUint::one(), |acc, &p| acc * p);
        self.big.iter().fold(small, |acc, p| acc * p)
    }
}

/// Largest `k >= 2` with `n = r^k`, if any.
fn perfect_power(n: &BigUint) -> Option<(BigUint, u32)> {
    let bits = n.bits() as u32;
    (2..=bits).rev().find_map(|k| {
        let r = n.nth_root(k);
        (r > BigUint::one() && &r.pow(k) == n).then_some((r, k))
    })
}

fn perfect_power_u64(n: u64) -> Option<(u64, u32)> {
    let bits = 64 - n.leading_zeros();
    (2..=bits).rev().find_map(|k| {
        let r = n.nth_root(k);
        (r > 1 && r.checked_pow(k) == Some(n)).then_some((r, k))
    })
}

/// Shared engine with [`FactorConfig::default`].
pub fn default_factorizer() -> &'static Factorizer {
    static ENGINE: OnceLock<Factorizer> = OnceLock::new();
    ENGINE.get_or_init(Factorizer::default)
}

/// Greatest common divisor, always nonnegative; `gcd(0, 0) = 0`.
pub fn gcd(x: &BigInt, y: &BigInt) -> BigInt {
    x.gcd(y)
}

pub fn factorize(n: &BigUint) -> Result<Factorization> {
    default_factorizer().factorize(n)
}

/// Product of the distinct primes dividing `n`; `radical(1) = 1`.
pub fn radical(n: &BigUint) -> Result<BigUint> {
    default_factorizer().radical(n)
}

/// Euler's totient; `totient(1) = 1`.
pub fn totient(n: &BigUint) -> Result<BigUint> {
    default_factorizer().totient(n)
}

/// Largest `k` with `2^k | n`. Zero has no such maximum.
pub fn valuation2(n: &BigInt) -> Result<u64> {
    n.trailing_zeros()
        .ok_or(Error::NonPositive { what: "valuation2 input magnitude" })
}

/// Exact `base^exp`; `pow_int(x, 0) = 1`.
pub fn pow_int(base: &BigInt, exp: u32) -> BigInt {
    num_traits::Pow::pow(base, exp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    fn trial_division(mut n: u64) -> Vec<(u64, u32)> {
        let mut out = Vec::new();
        let mut d = 2;
        while d * d <= n {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            if e > 0 {
                out.push((d, e));
            }
            d += 1;
        }
        if n > 1 {
            out.push((n, 1));
        }
        out
    }

    fn brute_totient(n: u64) -> u64 {
        (1..=n).filter(|&k| num_integer::gcd(k, n) == 1).count() as u64
    }

    fn pairs(f: &Factorization) -> Vec<(u64, u32)> {
        f.factors().iter().map(|(p, e)| (p.to_u64().unwrap(), *e)).collect()
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(gcd(&BigInt::from(12), &BigInt::from(18)), BigInt::from(6));
        assert_eq!(gcd(&BigInt::from(-7), &BigInt::from(0)), BigInt::from(7));
        assert_eq!(gcd(&BigInt::from(0), &BigInt::from(0)), BigInt::from(0));
        // 7^8 and 9^8 share no prime.
        assert_eq!(gcd(&BigInt::from(5_764_801), &BigInt::from(43_046_721)), BigInt::from(1));
    }

    #[test]
    fn factorize_examples() {
        assert_eq!(pairs(&factorize(&big(360)).unwrap()), vec![(2, 3), (3, 2), (5, 1)]);
        assert!(factorize(&big(1)).unwrap().is_empty());
        assert_eq!(
            pairs(&factorize(&big(37_281_920)).unwrap()),
            trial_division(37_281_920)
        );
        assert_eq!(
            pairs(&factorize(&big(37_281_920)).unwrap()),
            vec![(2, 7), (5, 1), (13, 1), (4481, 1)]
        );
        assert!(matches!(factorize(&big(0)), Err(Error::NonPositive { .. })));
    }

    #[test]
    fn radical_and_totient_examples() {
        assert_eq!(radical(&big(72)).unwrap(), big(6));
        assert_eq!(radical(&big(1)).unwrap(), big(1));
        assert_eq!(radical(&big(15_042)).unwrap(), big(15_042));
        assert_eq!(totient(&big(16)).unwrap(), big(brute_totient(16)));
        assert_eq!(totient(&big(16)).unwrap(), big(8));
        assert_eq!(totient(&big(1)).unwrap(), big(1));
        assert_eq!(totient(&big(15)).unwrap(), big(8));
    }

    #[test]
    fn valuation_and_power_examples() {
        assert_eq!(valuation2(&BigInt::from(48)).unwrap(), 4);
        assert_eq!(valuation2(&BigInt::from(7)).unwrap(), 0);
        assert_eq!(valuation2(&BigInt::from(-37_281_920)).unwrap(), 7);
        assert!(valuation2(&BigInt::from(0)).is_err());
        assert_eq!(pow_int(&BigInt::from(7), 8), BigInt::from(5_764_801));
        assert_eq!(pow_int(&BigInt::from(-12_345), 0), BigInt::from(1));
        assert_eq!(pow_int(&BigInt::from(-3), 2), BigInt::from(9));
    }

    #[test]
    fn prime_powers_and_large_cofactors() {
        // 3^10 * 109 and 23^5 must crack without help.
        assert_eq!(pairs(&factorize(&big(6_436_341)).unwrap()), vec![(3, 10), (109, 1)]);
        assert_eq!(pairs(&factorize(&big(6_436_343)).unwrap()), vec![(23, 5)]);
        let p = big(1_000_000_007);
        let q = BigUint::parse_bytes(b"170141183460469231731687303715884105727", 10).unwrap();
        let n = p.pow(3) * &q * &q;
        let f = factorize(&n).unwrap();
        assert_eq!(f.factors(), &[(p, 3), (q, 2)]);
        assert_eq!(f.value(), n);
    }

    #[test]
    fn big_trial_bound_is_configurable() {
        let engine = Factorizer::new(FactorConfig { trial_bound: 10, ..FactorConfig::default() });
        let n = big(99_991) * big(99_989) * big(1_000_003) * big(1_000_033);
        let f = engine.factorize(&n).unwrap();
        assert_eq!(f.value(), n);
        assert_eq!(f.factors().len(), 4);
    }

    #[test]
    fn tiny_budget_fails_instead_of_guessing() {
        let engine = Factorizer::new(FactorConfig { rho_budget: 8, ..FactorConfig::default() });
        let n = big(2_147_483_647) * big(2_147_483_629);
        match engine.factorize(&n) {
            Err(Error::FactorizationFailure { cofactor, budget }) => {
                assert_eq!(cofactor, n.to_string());
                assert_eq!(budget, 8);
            }
            other => panic!("expected failure, got {other:?}"),
        }
    }

    #[test]
    fn brute_force_agreement_up_to_1e5() {
        let engine = default_factorizer();
        // Linear sieve of radicals as the independent oracle.
        let limit = 100_000usize;
        let mut rad = vec![1u64; limit + 1];
        for p in 2..=limit {
            if rad[p] == 1 {
                let mut k = p;
                while k <= limit {
                    rad[k] *= p as u64;
                    k += p;
                }
            }
        }
        for n in 1..=limit as u64 {
            let f = engine.factorize(&big(n)).unwrap();
            assert_eq!(f.radical(), big(rad[n as usize]), "rad({n})");
            if n <= 3_000 {
                assert_eq!(f.totient(), big(brute_totient(n)), "phi({n})");
            }
        }
    }

    #[test]
    fn totient_matches_unit_count_sampled() {
        for n in (3_000..100_000u64).step_by(997) {
            assert_eq!(totient(&big(n)).unwrap(), big(brute_totient(n)), "phi({n})");
        }
    }

    #[test]
    fn remultiplication_is_identity_up_to_1e6() {
        let engine = default_factorizer();
        for n in 1..=1_000_000u64 {
            let f = engine.factorize_u64(n).unwrap();
            let back: u64 = f.iter().map(|&(p, e)| p.pow(e)).product();
            assert_eq!(back, n);
            assert!(f.windows(2).all(|w| w[0].0 < w[1].0));
        }
    }

    #[test]
    fn random_products_of_40_bit_primes_factor_completely() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(128);
        let engine = default_factorizer();
        let mut next_prime = |bits: u32| {
            let mut p = rng.random_range(2u64..1 << bits) | 1;
            while !prime::is_prime_u64(p) {
                p += 2;
            }
            p
        };
        for _ in 0..40 {
            let mut expected: Vec<(u64, u32)> = Vec::new();
            let mut n = BigUint::one();
            for bits in [40, 40, 36, 12] {
                let p = next_prime(bits);
                n *= p;
                match expected.iter_mut().find(|(q, _)| *q == p) {
                    Some((_, e)) => *e += 1,
                    None => expected.push((p, 1)),
                }
            }
            expected.sort_unstable();
            let f = engine.factorize(&n).unwrap();
            assert_eq!(f.value(), n);
            assert_eq!(pairs(&f), expected);
        }
    }

    proptest! {
        #[test]
        fn radical_is_submultiplicative(x in 1u64..2_000_000, y in 1u64..2_000_000) {
            let rx = radical(&big(x)).unwrap();
            let ry = radical(&big(y)).unwrap();
            let rxy = radical(&(big(x) * big(y))).unwrap();
            prop_assert!(rxy <= rx * ry);
        }

        #[test]
        fn radical_ignores_powers(x in 1u64..100_000, k in 1u32..6) {
            prop_assert_eq!(radical(&big(x).pow(k)).unwrap(), radical(&big(x)).unwrap());
        }

        #[test]
        fn valuation_is_exact(n in any::<i64>().prop_filter("nonzero", |v| *v != 0)) {
            let v = valuation2(&BigInt::from(n)).unwrap() as u32;
            let n = BigInt::from(n);
            let two_k = BigInt::from(1) << v;
            prop_assert!((&n % &two_k).is_zero());
            prop_assert!(!(&n % (two_k << 1u32)).is_zero());
        }
    }
}
