//! Homogeneous cyclotomic polynomials.
//!
//! `x^n - y^n` is the product of `Phi_d(x, y)` over the divisors `d` of `n`,
//! so the primes of `x^n - y^n` are the union of the primes of much smaller
//! numbers.

use num_bigint::BigInt;
use num_traits::Zero;

/// Integer coefficients of `Phi_d`, lowest degree first.
pub(crate) fn cyclotomic(d: u32) -> Vec<i64> {
    assert!(d >= 1);
    // x^d - 1
    let mut num = vec![0i64; d as usize + 1];
    num[0] = -1;
    num[d as usize] = 1;
    for e in (1..d).filter(|e| d.is_multiple_of(*e)) {
        num = div_monic(&num, &cyclotomic(e));
    }
    num
}

// Exact division by a monic polynomial.
fn div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qd = num.len() - 1 - dd;
    let mut quot = vec![0i64; qd + 1];
    for i in (0..=qd).rev() {
        let coef = rem[i + dd];
        quot[i] = coef;
        if coef != 0 {
            for (j, &dc) in den.iter().enumerate() {
                rem[i + j] -= coef * dc;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0), "inexact cyclotomic division");
    quot
}

pub(crate) fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// `Phi(x, y) = sum coef_k x^k y^(deg - k)` in `i128`, or `None` on overflow.
pub(crate) fn eval_homogeneous_i128(coefs: &[i64], x: u64, y: u64) -> Option<i128> {
    let deg = coefs.len() as u32 - 1;
    let mut acc: i128 = 0;
    let (x, y) = (x as i128, y as i128);
    for (k, &coef) in coefs.iter().enumerate() {
        if coef == 0 {
            continue;
        }
        let term = x
            .checked_pow(k as u32)?
            .checked_mul(y.checked_pow(deg - k as u32)?)?
            .checked_mul(coef as i128)?;
        acc = acc.checked_add(term)?;
    }
    Some(acc)
}

pub(crate) fn eval_homogeneous(coefs: &[i64], x: &BigInt, y: &BigInt) -> BigInt {
    let deg = coefs.len() as u32 - 1;
    coefs
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != 0)
        .fold(BigInt::zero(), |acc, (k, &coef)| {
            acc + BigInt::from(coef) * x.pow(k as u32) * y.pow(deg - k as u32)
        })
}
