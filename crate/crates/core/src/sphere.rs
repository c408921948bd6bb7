//! Exact integrals over the unit sphere `S^{d-1}` with surface measure.
//!
//! For a monomial with all exponents even,
//!
//! ```text
//! ∫ x^a dθ = 2 · Π Γ((a_i + 1)/2) / Γ((|a| + d)/2)
//! ```
//!
//! and every Gamma value at a half-integer is a rational multiple of `√π`.
//! Values are therefore rational multiples of `π^(e/2)`, with `e = d` for
//! even `d` and `e = d - 1` for odd `d`.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numeric::{pi_enclosure, sqrt_enclosure, Interval};
use crate::poly::{int, Monomial, Polynomial, Rational};

/// The exact real number `coefficient · π^(twice_pi_exponent / 2)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PiScaled {
    coefficient: Rational,
    twice_pi_exponent: i32,
}

impl PiScaled {
    pub fn new(coefficient: Rational, twice_pi_exponent: i32) -> Self {
        if coefficient.is_zero() {
            return Self::zero();
        }
        PiScaled {
            coefficient,
            twice_pi_exponent,
        }
    }

    pub fn zero() -> Self {
        PiScaled {
            coefficient: Rational::zero(),
            twice_pi_exponent: 0,
        }
    }

    pub fn rational(r: Rational) -> Self {
        Self::new(r, 0)
    }

    pub fn coefficient(&self) -> &Rational {
        &self.coefficient
    }

    pub fn twice_pi_exponent(&self) -> i32 {
        self.twice_pi_exponent
    }

    pub fn is_zero(&self) -> bool {
        self.coefficient.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.coefficient.is_positive()
    }

    /// Sum of two values with the same power of π (or either zero).
    pub fn try_add(&self, other: &PiScaled) -> Result<PiScaled> {
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.twice_pi_exponent != other.twice_pi_exponent {
            return Err(Error::PiExponentMismatch(
                self.twice_pi_exponent,
                other.twice_pi_exponent,
            ));
        }
        Ok(PiScaled::new(
            &self.coefficient + &other.coefficient,
            self.twice_pi_exponent,
        ))
    }

    pub fn neg(&self) -> PiScaled {
        PiScaled::new(-&self.coefficient, self.twice_pi_exponent)
    }

    pub fn scale(&self, c: &Rational) -> PiScaled {
        PiScaled::new(&self.coefficient * c, self.twice_pi_exponent)
    }

    pub fn mul(&self, other: &PiScaled) -> PiScaled {
        PiScaled::new(
            &self.coefficient * &other.coefficient,
            self.twice_pi_exponent + other.twice_pi_exponent,
        )
    }

    /// Panics if `other` is zero.
    pub fn div(&self, other: &PiScaled) -> PiScaled {
        assert!(!other.is_zero(), "PiScaled division by zero");
        PiScaled::new(
            &self.coefficient / &other.coefficient,
            self.twice_pi_exponent - other.twice_pi_exponent,
        )
    }

    /// `self / other` when the powers of π cancel.
    pub fn ratio(&self, other: &PiScaled) -> Result<Rational> {
        if other.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if self.is_zero() {
            return Ok(Rational::zero());
        }
        if self.twice_pi_exponent != other.twice_pi_exponent {
            return Err(Error::PiExponentMismatch(
                self.twice_pi_exponent,
                other.twice_pi_exponent,
            ));
        }
        Ok(&self.coefficient / &other.coefficient)
    }

    /// Certified enclosure of the real value.
    pub fn enclosure(&self, prec: u32) -> Interval {
        let e = self.twice_pi_exponent;
        let pi = pi_enclosure(prec + 16);
        let mut acc = Interval::point(Rational::one());
        for _ in 0..e.unsigned_abs() / 2 {
            acc = acc.mul(&pi);
        }
        if e % 2 != 0 {
            // √π over the enclosure of π.
            let lo = sqrt_enclosure(pi.lo(), prec + 16).lo().clone();
            let hi = sqrt_enclosure(pi.hi(), prec + 16).hi().clone();
            acc = acc.mul(&Interval::new(lo, hi));
        }
        if e < 0 {
            acc = Interval::point(Rational::one()).div(&acc);
        }
        acc.scale(&self.coefficient)
    }
}

impl fmt::Display for PiScaled {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) * pi^({}/2)", self.coefficient, self.twice_pi_exponent)
    }
}

impl Serialize for PiScaled {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

pub(crate) fn ser_rational<S: Serializer>(
    r: &Rational,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

/// `Γ(n/2)` split as `(rational, sqrt_pi)` with `Γ(n/2) = rational · π^(sqrt_pi/2)`.
///
/// Panics for `n = 0`.
pub fn gamma_half(n: u32) -> (Rational, i32) {
    assert!(n > 0, "Gamma has a pole at 0");
    if n.is_multiple_of(2) {
        let k = n / 2;
        let mut f = BigInt::one();
        for i in 2..k {
            f *= i;
        }
        (Rational::from_integer(f), 0)
    } else {
        // Γ(k + 1/2) = (2k-1)!! / 2^k · √π
        let k = (n - 1) / 2;
        let mut num = BigInt::one();
        for i in 1..=k {
            num *= 2 * i - 1;
        }
        (Rational::new(num, BigInt::one() << k), 1)
    }
}

/// Twice the power of π carried by every nonzero sphere integral in
/// dimension `d`.
pub fn pi_power(d: usize) -> i32 {
    if d.is_multiple_of(2) {
        d as i32
    } else {
        d as i32 - 1
    }
}

/// Rational coefficient of `∫ x^a dθ` for an exponent vector with all
/// entries even.
fn even_moment(exps: &[u32]) -> Rational {
    let d = exps.len() as u32;
    let total: u32 = exps.iter().sum();
    let mut c = int(2);
    for &a in exps {
        c *= gamma_half(a + 1).0;
    }
    c / gamma_half(total + d).0
}

/// `∫_{S^{d-1}} x^mono dθ`.
pub fn monomial_sphere_integral(mono: &Monomial, d: usize) -> Result<PiScaled> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("sphere dimension d = {d} must be ≥ 2")));
    }
    if mono.dimension() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: mono.dimension(),
        });
    }
    if mono.parity_class() != 0 {
        return Ok(PiScaled::zero());
    }
    Ok(PiScaled::new(even_moment(mono.exponents()), pi_power(d)))
}

/// `∫ p dθ`.
pub fn integrate(p: &Polynomial) -> Result<PiScaled> {
    let d = p.dimension();
    if d < 2 {
        return Err(Error::InvalidParameter(format!("sphere dimension d = {d} must be ≥ 2")));
    }
    let mut acc = Rational::zero();
    for (m, c) in p.terms() {
        if m.parity_class() == 0 {
            acc += c * even_moment(m.exponents());
        }
    }
    Ok(PiScaled::new(acc, pi_power(d)))
}

/// `⟨f, g⟩ = ∫ f g dθ`.
pub fn inner_product(f: &Polynomial, g: &Polynomial) -> Result<PiScaled> {
    if f.dimension() != g.dimension() {
        return Err(Error::DimensionMismatch {
            expected: f.dimension(),
            found: g.dimension(),
        });
    }
    let d = f.dimension();
    if d < 2 {
        return Err(Error::InvalidParameter(format!("sphere dimension d = {d} must be ≥ 2")));
    }
    let mut acc = Rational::zero();
    let mut exps = vec![0u32; d];
    for (ma, ca) in f.terms() {
        let pa = ma.parity_class();
        for (mb, cb) in g.terms() {
            if mb.parity_class() != pa {
                continue;
            }
            for (e, (x, y)) in exps.iter_mut().zip(ma.exponents().iter().zip(mb.exponents())) {
                *e = x + y;
            }
            acc += ca * cb * even_moment(&exps);
        }
    }
    Ok(PiScaled::new(acc, pi_power(d)))
}

/// Inner products with memoized moments, for repeated use in one dimension.
#[derive(Debug, Clone, Default)]
pub struct MomentCache {
    moments: HashMap<Vec<u32>, Rational>,
}

impl MomentCache {
    pub fn new() -> Self {
        Self::default()
    }

    fn moment(&mut self, exps: &[u32]) -> Rational {
        if let Some(v) = self.moments.get(exps) {
            return v.clone();
        }
        let v = even_moment(exps);
        self.moments.insert(exps.to_vec(), v.clone());
        v
    }

    pub fn inner_product(&mut self, f: &Polynomial, g: &Polynomial) -> Result<PiScaled> {
        if f.dimension() != g.dimension() {
            return Err(Error::DimensionMismatch {
                expected: f.dimension(),
                found: g.dimension(),
            });
        }
        let d = f.dimension();
        let mut acc = Rational::zero();
        let mut exps = vec![0u32; d];
        for (ma, ca) in f.terms() {
            let pa = ma.parity_class();
            for (mb, cb) in g.terms() {
                if mb.parity_class() != pa {
                    continue;
                }
                for (e, (x, y)) in exps.iter_mut().zip(ma.exponents().iter().zip(mb.exponents())) {
                    *e = x + y;
                }
                acc += ca * cb * self.moment(&exps);
            }
        }
        Ok(PiScaled::new(acc, pi_power(d)))
    }
}

/// `⟨weight · f, f⟩ / ⟨f, f⟩`, an exact rational.
pub fn rayleigh_quotient(weight: &Polynomial, f: &Polynomial) -> Result<Rational> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let wf = weight.checked_mul(f)?;
    inner_product(&wf, f)?.ratio(&inner_product(f, f)?)
}
