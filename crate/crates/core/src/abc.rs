//! ABC-solutions, the merit function `f(a, eps)` and the quality metric.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numtheory::{default_factorizer, Factorization, Factorizer};
use crate::real::ln_biguint;
use crate::report::round12;

/// A triple of distinct, pairwise coprime, nonzero integers with
/// `a + b + c = 0`, normalized so that `a <= b < 0 < c`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AbcSolution {
    a: BigInt,
    b: BigInt,
    c: BigInt,
}

impl AbcSolution {
    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn c(&self) -> &BigInt {
        &self.c
    }

    /// Build from two coprime magnitudes `x != y`, returning
    /// `(-max, -min, x + y)`. Callers guarantee coprimality.
    pub(crate) fn from_coprime_magnitudes(x: u64, y: u64) -> Self {
        debug_assert!(x != y && num_integer::gcd(x, y) == 1 && x > 0 && y > 0);
        let (lo, hi) = if x < y { (x, y) } else { (y, x) };
        AbcSolution {
            a: -BigInt::from(hi),
            b: -BigInt::from(lo),
            c: BigInt::from(lo as u128 + hi as u128),
        }
    }

    pub fn abs_a(&self) -> BigUint {
        self.a.magnitude().clone()
    }

    pub fn abs_b(&self) -> BigUint {
        self.b.magnitude().clone()
    }

    pub fn abs_c(&self) -> BigUint {
        self.c.magnitude().clone()
    }

    /// Canonical corpus key: `(c, |b|)`, i.e. `c` then the smaller magnitude.
    pub fn sort_key(&self) -> (BigInt, BigInt) {
        (self.c.clone(), -self.b.clone())
    }

    /// Factorizations of `|a|`, `|b|` and `c`.
    pub fn factorizations(&self, engine: &Factorizer) -> Result<[Factorization; 3]> {
        Ok([
            engine.factorize(&self.abs_a())?,
            engine.factorize(&self.abs_b())?,
            engine.factorize(&self.abs_c())?,
        ])
    }

    /// `rad(|a| |b| c)`, computed as the product of the three radicals since
    /// the entries are pairwise coprime.
    pub fn radical_with(&self, engine: &Factorizer) -> Result<BigUint> {
        let [fa, fb, fc] = self.factorizations(engine)?;
        Ok(fa.radical() * fb.radical() * fc.radical())
    }
}

impl fmt::Display for AbcSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

#[derive(Serialize, Deserialize)]
struct TripleRepr {
    a: String,
    b: String,
    c: String,
}

impl Serialize for AbcSolution {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        TripleRepr {
            a: self.a.to_string(),
            b: self.b.to_string(),
            c: self.c.to_string(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for AbcSolution {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = TripleRepr::deserialize(deserializer)?;
        let parse = |s: &str| s.parse::<BigInt>().map_err(D::Error::custom);
        let solution = make_solution(&parse(&repr.a)?, &parse(&repr.b)?, &parse(&repr.c)?)
            .map_err(D::Error::custom)?;
        if solution.a.to_string() != repr.a || solution.b.to_string() != repr.b {
            return Err(D::Error::custom("triple is not in normalized order"));
        }
        Ok(solution)
    }
}

/// Validate `(x, y, z)` and return the normalized ABC-solution.
///
/// Two positive entries are handled by negating all three; the two negative
/// entries are then ordered so that `a <= b`.
pub fn make_solution(x: &BigInt, y: &BigInt, z: &BigInt) -> Result<AbcSolution> {
    let sum = x + y + z;
    if !sum.is_zero() {
        return Err(Error::NotZeroSum { sum: sum.to_string() });
    }
    if x.is_zero() || y.is_zero() || z.is_zero() {
        return Err(Error::HasZeroEntry);
    }
    let mut entries = [x.clone(), y.clone(), z.clone()];
    if entries.iter().filter(|v| v.is_positive()).count() == 2 {
        for v in entries.iter_mut() {
            *v = -&*v;
        }
    }
    entries.sort();
    let [a, b, c] = entries;
    if a == b {
        return Err(Error::NotDistinct);
    }
    let g = a.gcd(&b);
    if !g.is_one() {
        return Err(Error::NotCoprime { gcd: g.to_string() });
    }
    Ok(AbcSolution { a, b, c })
}

/// Radical, quality and merit of one triple at one `epsilon`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeritReport {
    pub triple: AbcSolution,
    #[serde(serialize_with = "crate::report::ser_biguint")]
    pub rad_abc: BigUint,
    #[serde(serialize_with = "round12")]
    pub quality: f64,
    #[serde(serialize_with = "round12")]
    pub merit: f64,
    #[serde(serialize_with = "round12")]
    pub epsilon: f64,
}

/// `ln(c) - (1 + eps) ln(rad)`.
pub(crate) fn merit_from_logs(ln_c: f64, ln_rad: f64, epsilon: f64) -> f64 {
    ln_c - (1.0 + epsilon) * ln_rad
}

pub fn merit(aa: &AbcSolution, epsilon: f64) -> Result<MeritReport> {
    merit_with(default_factorizer(), aa, epsilon)
}

/// `f(aa, eps) = ln c - (1 + eps) ln rad(|a| |b| c)` with natural logarithms.
pub fn merit_with(engine: &Factorizer, aa: &AbcSolution, epsilon: f64) -> Result<MeritReport> {
    if epsilon.is_nan() || epsilon < 0.0 {
        return Err(Error::NegativeEpsilon { epsilon });
    }
    let rad_abc = aa.radical_with(engine)?;
    let ln_c = ln_biguint(&aa.abs_c());
    let ln_rad = ln_biguint(&rad_abc);
    Ok(MeritReport {
        triple: aa.clone(),
        quality: ln_c / ln_rad,
        merit: merit_from_logs(ln_c, ln_rad, epsilon),
        rad_abc,
        epsilon,
    })
}

/// `ln c / ln rad(abc)`. Always defined: `c >= 3` forces `rad >= 6`.
pub fn quality(aa: &AbcSolution) -> Result<f64> {
    quality_with(default_factorizer(), aa)
}

pub fn quality_with(engine: &Factorizer, aa: &AbcSolution) -> Result<f64> {
    Ok(merit_with(engine, aa, 0.0)?.quality)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sol(x: i64, y: i64, z: i64) -> Result<AbcSolution> {
        make_solution(&BigInt::from(x), &BigInt::from(y), &BigInt::from(z))
    }

    fn triple(s: &AbcSolution) -> (i64, i64, i64) {
        use num_traits::ToPrimitive;
        (s.a.to_i64().unwrap(), s.b.to_i64().unwrap(), s.c.to_i64().unwrap())
    }

    #[test]
    fn make_solution_normalizes() {
        assert_eq!(triple(&sol(-1, -8, 9).unwrap()), (-8, -1, 9));
        assert_eq!(triple(&sol(9, -8, -1).unwrap()), (-8, -1, 9));
        assert_eq!(triple(&sol(1, 8, -9).unwrap()), (-8, -1, 9));
    }

    #[test]
    fn make_solution_names_the_violation() {
        assert!(matches!(sol(-2, -4, 6), Err(Error::NotCoprime { gcd }) if gcd == "2"));
        assert!(matches!(sol(1, 2, 3), Err(Error::NotZeroSum { sum }) if sum == "6"));
        assert_eq!(sol(0, 1, -1), Err(Error::HasZeroEntry));
        assert_eq!(sol(0, 0, 0), Err(Error::HasZeroEntry));
        assert_eq!(sol(-1, -1, 2), Err(Error::NotDistinct));
        assert_eq!(sol(1, 1, -2), Err(Error::NotDistinct));
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn merit_examples() {
        let s = sol(-1, -8, 9).unwrap();
        // rad(72) = 6 by trial division.
        let r0 = merit(&s, 0.0).unwrap();
        assert_eq!(r0.rad_abc, BigUint::from(6u32));
        assert!((r0.merit - (9f64.ln() - 6f64.ln())).abs() < 1e-12);
        assert!((r0.merit - 0.405465).abs() < 1e-6);
        let r1 = merit(&s, 1.0).unwrap();
        assert!((r1.merit - (9f64.ln() - 2.0 * 6f64.ln())).abs() < 1e-12);
        assert!((r1.merit - -1.386294).abs() < 1e-6);
        let r = merit(&sol(-1, -2, 3).unwrap(), 0.0).unwrap();
        assert!((r.merit - -0.693147).abs() < 1e-6);
        assert!(merit(&s, -0.5).is_err());
    }

    #[test]
    fn quality_examples() {
        assert!((quality(&sol(-1, -8, 9).unwrap()).unwrap() - 1.226294).abs() < 1e-6);
        assert!((quality(&sol(-1, -2, 3).unwrap()).unwrap() - 0.613147).abs() < 1e-6);
        let s = sol(-2, -6_436_341, 6_436_343).unwrap();
        let r = merit(&s, 0.0).unwrap();
        assert_eq!(r.rad_abc, BigUint::from(15_042u32));
        assert!((r.quality - 6_436_343f64.ln() / 15_042f64.ln()).abs() < 1e-12);
        assert!((r.quality - 1.6299).abs() < 5e-4);
    }

    #[test]
    fn serde_round_trip_and_rejects_bad_order() {
        let s = sol(-1, -8, 9).unwrap();
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, r#"{"a":"-8","b":"-1","c":"9"}"#);
        let back: AbcSolution = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
        assert!(serde_json::from_str::<AbcSolution>(r#"{"a":"-1","b":"-8","c":"9"}"#).is_err());
        assert!(serde_json::from_str::<AbcSolution>(r#"{"a":"-2","b":"-4","c":"6"}"#).is_err());
    }

    fn coprime_pair() -> impl Strategy<Value = (i64, i64)> {
        (1i64..1_000_000, 1i64..1_000_000)
            .prop_filter("coprime, distinct", |(x, y)| x != y && num_integer::gcd(*x, *y) == 1)
    }

    proptest! {
        #[test]
        fn normalization_is_idempotent((x, y) in coprime_pair(), perm in 0usize..6, flip in any::<bool>()) {
            let base = sol(-x, -y, x + y).unwrap();
            let mut v = [-x, -y, x + y];
            let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
            let p = perms[perm];
            v = [v[p[0]], v[p[1]], v[p[2]]];
            if flip {
                v = [-v[0], -v[1], -v[2]];
            }
            let again = sol(v[0], v[1], v[2]).unwrap();
            prop_assert_eq!(&again, &base);
            let (a, b, c) = triple(&again);
            prop_assert!(a <= b && b < 0 && 0 < c && a + b + c == 0);
        }

        #[test]
        fn quality_above_one_iff_positive_merit((x, y) in coprime_pair()) {
            let s = sol(-x, -y, x + y).unwrap();
            let r = merit(&s, 0.0).unwrap();
            prop_assert_eq!(r.quality > 1.0, r.merit > 0.0);
        }

        #[test]
        fn difference_is_below_c((x, y) in coprime_pair()) {
            let s = sol(-x, -y, x + y).unwrap();
            prop_assert!((s.a() - s.b()).abs() < *s.c());
        }

        #[test]
        fn merit_strictly_decreases_in_epsilon((x, y) in coprime_pair(), e1 in 0.0f64..5.0, de in 0.01f64..5.0) {
            let s = sol(-x, -y, x + y).unwrap();
            let lo = merit(&s, e1).unwrap().merit;
            let hi = merit(&s, e1 + de).unwrap().merit;
            prop_assert!(hi < lo);
        }
    }
}
