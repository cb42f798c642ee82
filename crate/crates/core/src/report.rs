//! Canonical JSON formatting.
//!
//! Floats are rounded to 12 significant digits before they are written, so
//! parsing an emitted record and writing it again reproduces the same bytes.
//! Big integers are written as decimal strings.

use num_bigint::BigUint;
use serde::Serializer;

/// Round to 12 significant decimal digits.
pub fn round_sig12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

pub fn round12<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(round_sig12(*x))
}

pub fn round12_opt<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.serialize_some(&round_sig12(*v)),
        None => s.serialize_none(),
    }
}

pub fn round12_vec<S: Serializer>(xs: &[f64], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(|x| round_sig12(*x)))
}

pub fn ser_biguint<S: Serializer>(x: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("report types always serialize");
    out.push('\n');
    out
}
