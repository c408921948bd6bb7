use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::poly::Rational;

/// Binary floating point number `mantissa · 2^exponent` of unbounded
/// exponent range. Every arithmetic operation takes a precision in bits
/// and rounds its exact result to nearest, ties to even.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigFloat {
    mantissa: BigInt,
    exponent: i64,
}

impl BigFloat {
    pub fn zero() -> Self {
        BigFloat {
            mantissa: BigInt::zero(),
            exponent: 0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    fn normalized(mut mantissa: BigInt, mut exponent: i64) -> Self {
        if mantissa.is_zero() {
            return Self::zero();
        }
        let tz = mantissa.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            mantissa >>= tz;
            exponent += tz as i64;
        }
        BigFloat { mantissa, exponent }
    }

    /// Rounds `±mag · 2^exp` to `prec` bits. `sticky` records that the
    /// true value exceeds `mag` by a positive amount below one unit; callers
    /// setting it supply at least `prec + 2` bits.
    fn round(negative: bool, mag: BigUint, exp: i64, sticky: bool, prec: u32) -> Self {
        let bits = mag.bits();
        let prec = u64::from(prec.max(2));
        if bits <= prec {
            debug_assert!(!sticky, "sticky rounding needs guard bits");
            let m = BigInt::from_biguint(if negative { Sign::Minus } else { Sign::Plus }, mag);
            return Self::normalized(m, exp);
        }
        let shift = bits - prec;
        let mut kept = &mag >> shift;
        let dropped = &mag - (&kept << shift);
        let half = BigUint::one() << (shift - 1);
        let round_up = match dropped.cmp(&half) {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => sticky || kept.bit(0),
        };
        if round_up {
            kept += 1u32;
        }
        let m = BigInt::from_biguint(if negative { Sign::Minus } else { Sign::Plus }, kept);
        Self::normalized(m, exp + shift as i64)
    }

    /// Correctly rounded conversion of an exact rational.
    pub fn from_rational(r: &Rational, prec: u32) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        let negative = r.is_negative();
        let p = r.numer().magnitude().clone();
        let q = r.denom().magnitude().clone();
        Self::quotient(negative, p, q, 0, prec)
    }

    /// Rounds `±(p/q) · 2^exp`.
    fn quotient(negative: bool, p: BigUint, q: BigUint, exp: i64, prec: u32) -> Self {
        let k = i64::from(prec) + 3 + q.bits() as i64 - p.bits() as i64;
        let (num, den) = if k >= 0 {
            (p << k as u64, q)
        } else {
            (p, q << (-k) as u64)
        };
        let quot = &num / &den;
        let sticky = !(&num - &quot * &den).is_zero();
        Self::round(negative, quot, exp - k, sticky, prec)
    }

    pub fn from_i64(v: i64) -> Self {
        Self::normalized(BigInt::from(v), 0)
    }

    /// Exact value.
    pub fn to_rational(&self) -> Rational {
        if self.exponent >= 0 {
            Rational::from_integer(&self.mantissa << self.exponent as u64)
        } else {
            Rational::new(
                self.mantissa.clone(),
                BigInt::one() << (-self.exponent) as u64,
            )
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mantissa.bits() as i64;
        let drop = (bits - 62).max(0);
        let top = (&self.mantissa >> drop as u64).to_f64().unwrap_or(f64::NAN);
        let e = self.exponent + drop;
        // Split the scaling so that neither factor overflows prematurely.
        let half = (e / 2) as i32;
        top * 2f64.powi(half) * 2f64.powi(e as i32 - half)
    }

    pub fn neg(&self) -> Self {
        BigFloat {
            mantissa: -&self.mantissa,
            exponent: self.exponent,
        }
    }

    pub fn abs(&self) -> Self {
        BigFloat {
            mantissa: self.mantissa.abs(),
            exponent: self.exponent,
        }
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    pub fn add(&self, other: &Self, prec: u32) -> Self {
        if self.is_zero() {
            return Self::round_exact(&other.mantissa, other.exponent, prec);
        }
        if other.is_zero() {
            return Self::round_exact(&self.mantissa, self.exponent, prec);
        }
        let e = self.exponent.min(other.exponent);
        let a = &self.mantissa << (self.exponent - e) as u64;
        let b = &other.mantissa << (other.exponent - e) as u64;
        Self::round_exact(&(a + b), e, prec)
    }

    pub fn sub(&self, other: &Self, prec: u32) -> Self {
        self.add(&other.neg(), prec)
    }

    pub fn mul(&self, other: &Self, prec: u32) -> Self {
        Self::round_exact(
            &(&self.mantissa * &other.mantissa),
            self.exponent + other.exponent,
            prec,
        )
    }

    /// Panics on division by zero.
    pub fn div(&self, other: &Self, prec: u32) -> Self {
        assert!(!other.is_zero(), "BigFloat division by zero");
        if self.is_zero() {
            return Self::zero();
        }
        let negative = self.mantissa.is_negative() != other.mantissa.is_negative();
        Self::quotient(
            negative,
            self.mantissa.magnitude().clone(),
            other.mantissa.magnitude().clone(),
            self.exponent - other.exponent,
            prec,
        )
    }

    /// Correctly rounded square root; `None` for negative input.
    pub fn sqrt(&self, prec: u32) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let m = self.mantissa.magnitude();
        let want = 2 * (u64::from(prec) + 3);
        let mut t = want.saturating_sub(m.bits()) as i64 + 1;
        if (self.exponent - t).rem_euclid(2) != 0 {
            t += 1;
        }
        let scaled = m << t as u64;
        let root = scaled.sqrt();
        let sticky = &root * &root != scaled;
        Some(Self::round(
            false,
            root,
            (self.exponent - t) / 2,
            sticky,
            prec,
        ))
    }

    fn round_exact(m: &BigInt, exp: i64, prec: u32) -> Self {
        Self::round(m.is_negative(), m.magnitude().clone(), exp, false, prec)
    }
}

impl PartialOrd for BigFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.to_rational().cmp(&other.to_rational()))
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.to_f64())
    }
}
