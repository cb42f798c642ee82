//! Word-sized modular arithmetic used by Miller-Rabin and Pollard rho.
//!
//! Three representations are used depending on the modulus:
//! - moduli below 2^32 multiply directly in `u64`;
//! - odd moduli below 2^63 use Montgomery form with R = 2^64;
//! - anything else falls back to `u128` remainder.

pub(crate) trait ModRing {
    fn modulus(&self) -> u64;
    fn to_ring(&self, x: u64) -> u64;
    #[allow(dead_code)]
    fn out_of_ring(&self, x: u64) -> u64;
    fn mul(&self, a: u64, b: u64) -> u64;

    fn one(&self) -> u64 {
        self.to_ring(1)
    }

    fn add(&self, a: u64, b: u64) -> u64 {
        let n = self.modulus();
        let (s, overflow) = a.overflowing_add(b);
        if overflow || s >= n {
            s.wrapping_sub(n)
        } else {
            s
        }
    }

    fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = self.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }
}

pub(crate) struct Small {
    n: u64,
}

impl Small {
    pub(crate) fn new(n: u64) -> Self {
        debug_assert!(n < 1 << 32);
        Small { n }
    }
}

impl ModRing for Small {
    #[inline]
    fn modulus(&self) -> u64 {
        self.n
    }
    #[inline]
    fn to_ring(&self, x: u64) -> u64 {
        x % self.n
    }
    #[inline]
    fn out_of_ring(&self, x: u64) -> u64 {
        x
    }
    #[inline]
    fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.n
    }
}

pub(crate) struct Montgomery {
    n: u64,
    // -n^{-1} mod 2^64
    neg_inv: u64,
}

impl Montgomery {
    pub(crate) fn new(n: u64) -> Self {
        debug_assert!(n & 1 == 1 && n < 1 << 63);
        let mut inv = n;
        for _ in 0..5 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(n.wrapping_mul(inv)));
        }
        debug_assert_eq!(n.wrapping_mul(inv), 1);
        Montgomery {
            n,
            neg_inv: inv.wrapping_neg(),
        }
    }

    #[inline]
    fn redc(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.neg_inv);
        let u = ((t + m as u128 * self.n as u128) >> 64) as u64;
        if u >= self.n {
            u - self.n
        } else {
            u
        }
    }
}

impl ModRing for Montgomery {
    #[inline]
    fn modulus(&self) -> u64 {
        self.n
    }
    #[inline]
    fn to_ring(&self, x: u64) -> u64 {
        (((x as u128) << 64) % self.n as u128) as u64
    }
    #[inline]
    fn out_of_ring(&self, x: u64) -> u64 {
        self.redc(x as u128)
    }
    #[inline]
    fn mul(&self, a: u64, b: u64) -> u64 {
        self.redc(a as u128 * b as u128)
    }
}

pub(crate) struct Wide {
    n: u64,
}

impl Wide {
    pub(crate) fn new(n: u64) -> Self {
        Wide { n }
    }
}

impl ModRing for Wide {
    #[inline]
    fn modulus(&self) -> u64 {
        self.n
    }
    #[inline]
    fn to_ring(&self, x: u64) -> u64 {
        x % self.n
    }
    #[inline]
    fn out_of_ring(&self, x: u64) -> u64 {
        x
    }
    #[inline]
    fn mul(&self, a: u64, b: u64) -> u64 {
        (a as u128 * b as u128 % self.n as u128) as u64
    }
}

/// Run `f` with the fastest ring available for modulus `n`.
macro_rules! with_ring {
    ($n:expr, |$ring:ident| $body:expr) => {{
        let n: u64 = $n;
        if n < 1 << 32 {
            let $ring = $crate::numtheory::modarith::Small::new(n);
            $body
        } else if n & 1 == 1 && n < 1 << 63 {
            let $ring = $crate::numtheory::modarith::Montgomery::new(n);
            $body
        } else {
            let $ring = $crate::numtheory::modarith::Wide::new(n);
            $body
        }
    }};
}
pub(crate) use with_ring;

pub(crate) fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive(a: u64, b: u64, n: u64) -> u64 {
        (a as u128 * b as u128 % n as u128) as u64
    }

    #[test]
    fn rings_agree_with_naive_multiplication() {
        let moduli = [7u64, 65_537, 4_294_967_291, 1_000_000_007 * 3, (1 << 62) + 135, u64::MAX - 58];
        for &n in &moduli {
            for &(a, b) in &[(3u64, 5u64), (n - 1, n - 1), (n / 2, n / 3 + 1), (123_456_789 % n, 987_654_321 % n)] {
                let got = with_ring!(n, |r| r.out_of_ring(r.mul(r.to_ring(a), r.to_ring(b))));
                assert_eq!(got, naive(a, b, n), "n={n} a={a} b={b}");
            }
        }
    }

    #[test]
    fn montgomery_pow_matches_fermat() {
        let p = 1_000_000_000_000_000_003u64;
        let r = Montgomery::new(p);
        let x = r.pow(r.to_ring(2), p - 1);
        assert_eq!(r.out_of_ring(x), 1);
    }

    #[test]
    fn binary_gcd() {
        assert_eq!(gcd_u64(0, 0), 0);
        assert_eq!(gcd_u64(12, 18), 6);
        assert_eq!(gcd_u64(0, 7), 7);
        assert_eq!(gcd_u64(1 << 40, 1 << 20), 1 << 20);
        assert_eq!(gcd_u64(5_764_801, 43_046_721), 1);
    }
}
