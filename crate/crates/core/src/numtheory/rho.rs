//! Pollard's rho with Brent's cycle detection.
//!
//! Products of `|x - y|` are accumulated over blocks of `BLOCK` steps so a
//! single gcd covers the whole block; when a block overshoots to `gcd = n`
//! the block is replayed one step at a time.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::modarith::{gcd_u64, with_ring, ModRing};

const BLOCK: u64 = 128;

/// Split a composite `n` into a nontrivial factor, spending at most
/// `*budget` iterations of the polynomial map across all retries.
pub(crate) fn split_u64(n: u64, budget: &mut u64) -> Option<u64> {
    if n.is_multiple_of(2) {
        return Some(2);
    }
    with_ring!(n, |ring| {
        let mut increment = 1u64;
        while *budget > 0 {
            if let Some(d) = brent(&ring, increment, budget) {
                return Some(d);
            }
            increment += 1;
        }
        None
    })
}

fn brent<R: ModRing>(ring: &R, increment: u64, budget: &mut u64) -> Option<u64> {
    let n = ring.modulus();
    let c = ring.to_ring(increment % n);
    let step = |x: u64| ring.add(ring.mul(x, x), c);
    let diff = |x: u64, y: u64| x.abs_diff(y);

    let mut y = ring.to_ring(2 % n);
    let mut x = y;
    let mut ys = y;
    let mut q = ring.one();
    let mut g = 1u64;
    let mut r = 1u64;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = step(y);
        }
        *budget = budget.saturating_sub(r);
        let mut k = 0u64;
        while k < r && g == 1 {
            ys = y;
            let len = BLOCK.min(r - k);
            for _ in 0..len {
                y = step(y);
                q = ring.mul(q, diff(x, y));
            }
            *budget = budget.saturating_sub(len);
            g = gcd_u64(q, n);
            k += len;
        }
        r *= 2;
        if g == 1 && *budget == 0 {
            return None;
        }
    }
    if g == n {
        loop {
            ys = step(ys);
            g = gcd_u64(diff(x, ys), n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

/// Big-integer variant of [`split_u64`] for cofactors that exceed 64 bits.
pub(crate) fn split_big(n: &BigUint, budget: &mut u64) -> Option<BigUint> {
    if !n.bit(0) {
        return Some(BigUint::from(2u32));
    }
    let mut increment = 1u32;
    while *budget > 0 {
        if let Some(d) = brent_big(n, increment, budget) {
            return Some(d);
        }
        increment += 1;
    }
    None
}

fn brent_big(n: &BigUint, increment: u32, budget: &mut u64) -> Option<BigUint> {
    let c = BigUint::from(increment);
    let step = |x: &BigUint| (x * x + &c) % n;
    let diff = |x: &BigUint, y: &BigUint| if x > y { x - y } else { y - x };

    let mut y = BigUint::from(2u32);
    let mut x = y.clone();
    let mut ys = y.clone();
    let mut q = BigUint::one();
    let mut g = BigUint::one();
    let mut r = 1u64;
    while g.is_one() {
        x.clone_from(&y);
        for _ in 0..r {
            y = step(&y);
        }
        *budget = budget.saturating_sub(r);
        let mut k = 0u64;
        while k < r && g.is_one() {
            ys.clone_from(&y);
            let len = BLOCK.min(r - k);
            for _ in 0..len {
                y = step(&y);
                q = q * diff(&x, &y) % n;
            }
            *budget = budget.saturating_sub(len);
            g = q.gcd(n);
            k += len;
        }
        r *= 2;
        if g.is_one() && *budget == 0 {
            return None;
        }
    }
    if &g == n || g.is_zero() {
        loop {
            ys = step(&ys);
            g = diff(&x, &ys).gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    (&g != n).then_some(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splits_semiprimes() {
        for (p, q) in [(101u64, 103u64), (65_537, 4_294_967_291), (1_000_003, 999_983), (4_294_967_291, 4_294_967_279)] {
            let n = p * q;
            let mut budget = 1 << 26;
            let d = split_u64(n, &mut budget).expect("split");
            assert!(d > 1 && d < n && n % d == 0, "n={n} d={d}");
        }
    }

    #[test]
    fn splits_big_semiprime() {
        let p = BigUint::from(4_294_967_311u64);
        let q = BigUint::from(18_446_744_073_709_551_557u64);
        let n = &p * &q;
        let mut budget = 1 << 26;
        let d = split_big(&n, &mut budget).expect("split");
        assert!(d == p || d == q);
    }

    #[test]
    fn exhausted_budget_reports_none() {
        // Two 31-bit primes need far more than 16 iterations.
        let n = 2_147_483_647u64 * 2_147_483_629;
        let mut budget = 16;
        assert_eq!(split_u64(n, &mut budget), None);
        assert_eq!(budget, 0);
    }
}
