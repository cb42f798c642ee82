//! Shared inputs for the criterion benchmarks.

use num_bigint::BigUint;

/// Semiprimes `p * q` with both factors just below `2^bits`.
pub fn semiprimes(bits: u32, count: usize) -> Vec<BigUint> {
    let mut primes = Vec::with_capacity(2 * count);
    let mut k = (1u64 << bits) - 1;
    while primes.len() < 2 * count {
        if is_prime(k) {
            primes.push(k);
        }
        k -= 2;
    }
    primes
        .chunks(2)
        .map(|pq| BigUint::from(pq[0]) * pq[1])
        .collect()
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}
