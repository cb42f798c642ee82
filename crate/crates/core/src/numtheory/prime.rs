//! Primality: a sieve for the trial-division table, deterministic
//! Miller-Rabin below 2^64 and seeded probabilistic Miller-Rabin above.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::modarith::{with_ring, ModRing};

/// All primes `<= limit`, ascending.
pub fn primes_up_to(limit: u32) -> Vec<u32> {
    if limit < 2 {
        return Vec::new();
    }
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut primes = Vec::new();
    for i in 2..=limit {
        if composite[i] {
            continue;
        }
        primes.push(i as u32);
        let mut j = i * i;
        while j <= limit {
            composite[j] = true;
            j += i;
        }
    }
    primes
}

// Witness sets from Jaeschke and from Sinclair's search; each is exact
// below its bound.
const WITNESSES_32: &[u64] = &[2, 7, 61];
const BOUND_32: u64 = 4_759_123_141;
const WITNESSES_40: &[u64] = &[2, 13, 23, 1_662_803];
const BOUND_40: u64 = 1_122_004_669_633;
const WITNESSES_64: &[u64] = &[2, 325, 9375, 28178, 450_775, 9_780_504, 1_795_265_022];

fn strong_probable_prime<R: ModRing>(ring: &R, witness: u64) -> bool {
    let n = ring.modulus();
    let a = witness % n;
    if a == 0 {
        return true;
    }
    let n_minus_1 = n - 1;
    let s = n_minus_1.trailing_zeros();
    let d = n_minus_1 >> s;
    let one = ring.one();
    let minus_one = ring.to_ring(n_minus_1);
    let mut x = ring.pow(ring.to_ring(a), d);
    if x == one || x == minus_one {
        return true;
    }
    for _ in 1..s {
        x = ring.mul(x, x);
        if x == minus_one {
            return true;
        }
        if x == one {
            return false;
        }
    }
    false
}

/// Deterministic primality test for every `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    if n < 41 * 41 {
        return true;
    }
    let witnesses = if n < BOUND_32 {
        WITNESSES_32
    } else if n < BOUND_40 {
        WITNESSES_40
    } else {
        WITNESSES_64
    };
    with_ring!(n, |ring| witnesses
        .iter()
        .all(|&w| strong_probable_prime(&ring, w)))
}

/// Miller-Rabin with `rounds` random bases drawn from a generator seeded by
/// `seed` and the low bits of `n`, so the verdict is reproducible.
pub fn is_probable_prime(n: &BigUint, rounds: u32, seed: u64) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    if !n.bit(0) {
        return false;
    }
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let low = n.iter_u64_digits().next().unwrap_or(0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ low.rotate_left(17));
    let base_round = |a: BigUint| -> bool {
        let mut x = a.modpow(&d, n);
        if x == one || x == n_minus_1 {
            return true;
        }
        for _ in 1..s {
            x = &x * &x % n;
            if x == n_minus_1 {
                return true;
            }
            if x.is_one() {
                return false;
            }
        }
        false
    };
    // Fixed small bases first catch most composites cheaply.
    for w in [2u64, 3, 5, 7] {
        if !base_round(BigUint::from(w)) {
            return false;
        }
    }
    (0..rounds).all(|_| {
        let a = BigUint::from(rng.random_range(2..u64::MAX)) % &n_minus_1;
        let a = if a < BigUint::from(2u32) { BigUint::from(2u32) } else { a };
        base_round(a)
    })
}

/// `n mod p`, scanning digits without allocating.
pub(crate) fn rem_u32(n: &BigUint, p: u32) -> u32 {
    let p = p as u64;
    n.iter_u32_digits()
        .rev()
        .fold(0u64, |r, d| ((r << 32) | d as u64) % p) as u32
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn trial_is_prime(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
    }

    #[test]
    fn sieve_small() {
        assert_eq!(primes_up_to(30), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(primes_up_to(1).is_empty());
        assert_eq!(primes_up_to(100_000).len(), 9592);
    }

    #[test]
    fn deterministic_matches_trial_division() {
        for n in 0..20_000u64 {
            assert_eq!(is_prime_u64(n), trial_is_prime(n), "n = {n}");
        }
        for n in (4_759_123_000u64..4_759_123_200).chain(1_122_004_669_600..1_122_004_669_700) {
            assert_eq!(is_prime_u64(n), trial_is_prime(n), "n = {n}");
        }
    }

    #[test]
    fn strong_pseudoprimes_are_rejected() {
        // Strong pseudoprimes to several small bases.
        for n in [2_047u64, 1_373_653, 25_326_001, 3_215_031_751, 2_152_302_898_747, 3_474_749_660_383, 341_550_071_728_321, 3_825_123_056_546_413_051] {
            assert!(!is_prime_u64(n), "{n}");
        }
        assert!(is_prime_u64(18_446_744_073_709_551_557));
        assert!(!is_prime_u64(u64::MAX));
    }

    #[test]
    fn big_probable_primes() {
        let m127 = (BigUint::one() << 127u32) - BigUint::one();
        assert!(is_probable_prime(&m127, 40, 1));
        let composite = &m127 * BigUint::from(3u32);
        assert!(!is_probable_prime(&composite, 40, 1));
        let m61 = (1u64 << 61) - 1;
        let semiprime = BigUint::from(m61) * BigUint::from(m61);
        assert!(!is_probable_prime(&semiprime, 40, 7));
    }

    #[test]
    fn digit_remainder() {
        let n = BigUint::parse_bytes(b"123456789012345678901234567890", 10).unwrap();
        for p in [2u32, 3, 7, 97, 65_521, 4_294_967_291] {
            assert_eq!(BigUint::from(rem_u32(&n, p)), &n % p);
        }
        assert_eq!(rem_u32(&BigUint::zero(), 3), 0);
    }
}
