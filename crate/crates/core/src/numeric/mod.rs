//! Floating point at arbitrary precision and certified rational enclosures.

mod bigfloat;
mod enclosure;

pub use bigfloat::BigFloat;
pub use enclosure::{cos_enclosure, pi_enclosure, sin_enclosure, sqrt_enclosure, Interval};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::poly::Rational;

/// Nearest `f64`, for display and loose diagnostics only.
pub fn to_f64(r: &Rational) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    // Fall back through a scaled integer division for huge operands.
    let shift = r.numer().bits() as i64 - r.denom().bits() as i64 - 60;
    let (n, d) = if shift > 0 {
        (r.numer().clone(), r.denom() << shift as u64)
    } else {
        (r.numer() << (-shift) as u64, r.denom().clone())
    };
    let q = (n / d).to_f64().unwrap_or(f64::NAN);
    q * 2f64.powi(shift as i32)
}

/// `2^-bits` as a rational.
pub fn pow2_neg(bits: u32) -> Rational {
    Rational::new(BigInt::from(1), BigInt::from(1) << bits)
}

/// Largest dyadic `m/2^k ≤ r` with about `prec` significant bits.
pub fn round_down(r: &Rational, prec: u32) -> Rational {
    round_dyadic(r, prec, false)
}

/// Smallest dyadic `m/2^k ≥ r` with about `prec` significant bits.
pub fn round_up(r: &Rational, prec: u32) -> Rational {
    round_dyadic(r, prec, true)
}

fn round_dyadic(r: &Rational, prec: u32, up: bool) -> Rational {
    if r.is_zero() {
        return r.clone();
    }
    let mag = r.numer().abs().bits() as i64 - r.denom().bits() as i64;
    let k = i64::from(prec) - mag;
    let scaled = if k >= 0 {
        Rational::new(r.numer() << k as u64, r.denom().clone())
    } else {
        Rational::new(r.numer().clone(), r.denom() << (-k) as u64)
    };
    let (q, rem) = scaled.numer().div_mod_floor(scaled.denom());
    let q = if up && !rem.is_zero() { q + 1 } else { q };
    if k >= 0 {
        Rational::new(q, BigInt::from(1) << k as u64)
    } else {
        Rational::from_integer(q << (-k) as u64)
    }
}
