//! Closed rational intervals with outward rounding.
//!
//! Every function here returns an interval guaranteed to contain the true
//! real value. Comparisons are certified only through [`Interval::certainly_ge`]
//! and friends, which compare the lower end of one side against the upper
//! end of the other.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{round_down, round_up};
use crate::poly::{int, rat, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    lo: Rational,
    hi: Rational,
}

impl Interval {
    /// Panics if `lo > hi`.
    pub fn new(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "empty interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn point(x: Rational) -> Self {
        Interval {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    /// Widens the endpoints to dyadics with about `prec` significant bits.
    pub fn round_out(&self, prec: u32) -> Interval {
        Interval {
            lo: round_down(&self.lo, prec),
            hi: round_up(&self.hi, prec),
        }
    }

    pub fn add(&self, other: &Interval) -> Interval {
        Interval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    pub fn sub(&self, other: &Interval) -> Interval {
        Interval {
            lo: &self.lo - &other.hi,
            hi: &self.hi - &other.lo,
        }
    }

    pub fn neg(&self) -> Interval {
        Interval {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }

    pub fn mul(&self, other: &Interval) -> Interval {
        let products = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = products.iter().min().expect("four products").clone();
        let hi = products.iter().max().expect("four products").clone();
        Interval { lo, hi }
    }

    pub fn scale(&self, c: &Rational) -> Interval {
        self.mul(&Interval::point(c.clone()))
    }

    /// Panics if `other` contains zero.
    pub fn div(&self, other: &Interval) -> Interval {
        assert!(
            other.lo.is_positive() || other.hi.is_negative(),
            "interval division by an interval containing zero"
        );
        let inv = Interval {
            lo: other.hi.recip(),
            hi: other.lo.recip(),
        };
        self.mul(&inv)
    }

    pub fn square(&self) -> Interval {
        if self.lo.is_negative() && self.hi.is_positive() {
            let m = self.lo.abs().max(self.hi.clone());
            Interval {
                lo: Rational::zero(),
                hi: &m * &m,
            }
        } else {
            let a = &self.lo * &self.lo;
            let b = &self.hi * &self.hi;
            if a <= b {
                Interval { lo: a, hi: b }
            } else {
                Interval { lo: b, hi: a }
            }
        }
    }

    /// Enclosure of `√x` over the interval; panics for negative lower end.
    pub fn sqrt(&self, prec: u32) -> Interval {
        let lo = sqrt_enclosure(&self.lo, prec).lo;
        let hi = sqrt_enclosure(&self.hi, prec).hi;
        Interval { lo, hi }
    }

    /// Every point of `self` is ≥ every point of `other`.
    pub fn certainly_ge(&self, other: &Interval) -> bool {
        self.lo >= other.hi
    }

    pub fn certainly_gt(&self, other: &Interval) -> bool {
        self.lo > other.hi
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{:.17e}, {:.17e}]",
            super::to_f64(&self.lo),
            super::to_f64(&self.hi)
        )
    }
}

const PI_CACHE_BITS: u32 = 640;

/// Enclosure of π of width about `2^-prec`, from Machin's formula
/// `π = 16·atan(1/5) − 4·atan(1/239)`.
pub fn pi_enclosure(prec: u32) -> Interval {
    static CACHE: OnceLock<Interval> = OnceLock::new();
    if prec + 8 <= PI_CACHE_BITS {
        return CACHE
            .get_or_init(|| machin_pi(PI_CACHE_BITS))
            .round_out(prec + 2);
    }
    machin_pi(prec + 8).round_out(prec + 2)
}

fn machin_pi(bits: u32) -> Interval {
    let a = atan_inverse(5, bits + 6);
    let b = atan_inverse(239, bits + 6);
    a.scale(&int(16)).sub(&b.scale(&int(4)))
}

/// `atan(1/x)` for integer `x ≥ 2` by its alternating Taylor series.
fn atan_inverse(x: i64, bits: u32) -> Interval {
    let x = BigInt::from(x);
    let x2 = &x * &x;
    let threshold = Rational::new(BigInt::one(), BigInt::one() << bits);
    let mut power = x.clone();
    let mut sum = Rational::zero();
    let mut k: i64 = 0;
    loop {
        let term = Rational::new(BigInt::one(), BigInt::from(2 * k + 1) * &power);
        let next = if k % 2 == 0 { &sum + &term } else { &sum - &term };
        if term < threshold {
            // Terms decrease, so consecutive partial sums bracket the limit.
            let (lo, hi) = if sum < next { (sum, next) } else { (next, sum) };
            return Interval::new(lo, hi);
        }
        sum = next;
        power *= &x2;
        k += 1;
    }
}

/// Enclosure of `√x` for a rational `x ≥ 0`, width about `2^-prec`
/// relative to `√x`.
pub fn sqrt_enclosure(x: &Rational, prec: u32) -> Interval {
    assert!(!x.is_negative(), "square root of a negative number");
    if x.is_zero() {
        return Interval::point(Rational::zero());
    }
    // √(p/q) = √(p·q)/q ; scale by 4^k so the integer root carries `prec` bits.
    let pq = x.numer() * x.denom();
    let k = (i64::from(prec) + 2 - pq.bits() as i64 / 2).max(0) as u64;
    let scaled = &pq << (2 * k);
    let root = scaled.sqrt();
    let den = x.denom() << k;
    if &root * &root == scaled {
        return Interval::point(Rational::new(root, den));
    }
    Interval::new(
        Rational::new(root.clone(), den.clone()),
        Rational::new(root + 1, den),
    )
}

/// Enclosure of `sin` over `x`, which must lie in `[-3/2, 3/2]` where the
/// sine is increasing.
pub fn sin_enclosure(x: &Interval, prec: u32) -> Interval {
    let bound = rat(3, 2);
    assert!(
        x.lo >= -&bound && x.hi <= bound,
        "sin_enclosure needs an argument inside [-3/2, 3/2]"
    );
    let lo = sin_point(&x.lo, prec).lo;
    let hi = sin_point(&x.hi, prec).hi;
    Interval::new(lo, hi).round_out(prec + 4)
}

/// Enclosure of `cos` over `x ⊂ [0, π/2]`, computed as `sin(π/2 − x)`.
pub fn cos_enclosure(x: &Interval, prec: u32) -> Interval {
    let half_pi = pi_enclosure(prec + 8).scale(&rat(1, 2));
    sin_enclosure(&half_pi.sub(x), prec)
}

fn sin_point(t: &Rational, prec: u32) -> Interval {
    if t.is_negative() {
        return sin_point(&-t, prec).neg();
    }
    // Terms t^(2k+1)/(2k+1)! decrease for t ≤ 3/2; partial sums alternate.
    let threshold = Rational::new(BigInt::one(), BigInt::one() << (prec + 8));
    let t2 = t * t;
    let mut term = t.clone();
    let mut sum = Rational::zero();
    let mut k: i64 = 0;
    loop {
        let next = if k % 2 == 0 { &sum + &term } else { &sum - &term };
        if term < threshold {
            let (lo, hi) = if sum < next { (sum, next) } else { (next, sum) };
            return Interval::new(lo, hi);
        }
        sum = next;
        term = term * &t2 / int((2 * k + 2) * (2 * k + 3));
        k += 1;
    }
}
