//! Logarithms of big integers.
//!
//! [`ln_biguint`] gives a double-precision natural log for any size of
//! integer. [`Fixed`] is a binary fixed-point real with 224 fractional bits,
//! used to re-decide inequality verdicts whose double-precision slack is too
//! close to zero to trust.

use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{ToPrimitive, Zero};

/// Natural logarithm of a positive integer in double precision.
pub fn ln_biguint(x: &BigUint) -> f64 {
    debug_assert!(!x.is_zero());
    let bits = x.bits();
    if bits <= 64 {
        return (x.to_u64().unwrap_or(u64::MAX) as f64).ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().unwrap_or(u64::MAX) as f64;
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

pub(crate) fn ln_u64(x: u64) -> f64 {
    (x as f64).ln()
}

const FRAC_BITS: u32 = 224;

/// Fixed-point real: the stored integer divided by `2^224`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Fixed(BigInt);

impl Fixed {
    fn one_raw() -> BigInt {
        BigInt::from(1) << FRAC_BITS
    }

    pub fn from_int(x: impl Into<BigInt>) -> Self {
        Fixed(x.into() << FRAC_BITS)
    }

    /// The exact binary value of `x` (truncated below `2^-224`).
    pub fn from_f64(x: f64) -> Self {
        assert!(x.is_finite(), "non-finite value {x}");
        if x == 0.0 {
            return Fixed(BigInt::zero());
        }
        let bits = x.to_bits();
        let negative = bits >> 63 == 1;
        let exp_field = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mantissa, exp) = if exp_field == 0 {
            (frac, -1074)
        } else {
            (frac | (1 << 52), exp_field - 1075)
        };
        let shift = exp + FRAC_BITS as i64;
        let m = BigInt::from(mantissa);
        let raw = if shift >= 0 {
            m << shift as u32
        } else {
            m >> (-shift) as u32
        };
        Fixed(if negative { -raw } else { raw })
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN) * 2f64.powi(-(FRAC_BITS as i32))
    }

    pub fn ln2() -> Fixed {
        static LN2: OnceLock<Fixed> = OnceLock::new();
        LN2.get_or_init(|| {
            let third = Fixed(Self::one_raw() / 3);
            atanh_series(&third).double()
        })
        .clone()
    }

    /// Natural logarithm of a positive integer.
    pub fn ln(x: &BigUint) -> Fixed {
        assert!(!x.is_zero(), "ln(0)");
        let k = x.bits() - 1;
        let x = BigInt::from_biguint(Sign::Plus, x.clone());
        // mantissa in [1, 2)
        let mantissa = if k <= FRAC_BITS as u64 {
            Fixed(x << (FRAC_BITS as u64 - k))
        } else {
            Fixed(x >> (k - FRAC_BITS as u64))
        };
        let one = Fixed(Self::one_raw());
        let z = &(&mantissa - &one) / &(&mantissa + &one);
        let ln_m = atanh_series(&z).double();
        &(&Fixed::ln2() * &Fixed::from_int(k)) + &ln_m
    }

    fn double(&self) -> Fixed {
        Fixed(&self.0 << 1u32)
    }
}

// atanh(z) = sum z^(2i+1) / (2i+1), for |z| <= 1/3.
fn atanh_series(z: &Fixed) -> Fixed {
    let z2 = z * z;
    let mut term = z.clone();
    let mut sum = z.clone();
    let mut i = 1u32;
    loop {
        term = &term * &z2;
        if term.0.is_zero() {
            break;
        }
        sum = Fixed(sum.0 + &term.0 / (2 * i + 1));
        i += 1;
    }
    sum
}

impl Add for &Fixed {
    type Output = Fixed;
    fn add(self, rhs: &Fixed) -> Fixed {
        Fixed(&self.0 + &rhs.0)
    }
}

impl Sub for &Fixed {
    type Output = Fixed;
    fn sub(self, rhs: &Fixed) -> Fixed {
        Fixed(&self.0 - &rhs.0)
    }
}

impl Mul for &Fixed {
    type Output = Fixed;
    fn mul(self, rhs: &Fixed) -> Fixed {
        Fixed((&self.0 * &rhs.0) >> FRAC_BITS)
    }
}

impl Div for &Fixed {
    type Output = Fixed;
    fn div(self, rhs: &Fixed) -> Fixed {
        Fixed((&self.0 << FRAC_BITS) / &rhs.0)
    }
}

impl Neg for &Fixed {
    type Output = Fixed;
    fn neg(self) -> Fixed {
        Fixed(-&self.0)
    }
}
