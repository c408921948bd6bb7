use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_traits::{One, Signed, Zero};

use super::monomial::Monomial;
use super::{int, parse, Rational};
use crate::error::{Error, Result};
use crate::numeric::BigFloat;

/// Sparse polynomial in `dimension` variables with exact rational
/// coefficients.
///
/// No zero coefficient is ever stored, so structural equality is
/// mathematical equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    dim: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(dim: usize) -> Self {
        Polynomial {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: Rational) -> Self {
        Self::monomial(Monomial::one(dim), c)
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, Rational::one())
    }

    /// The coordinate function `x_{var+1}`.
    pub fn var(dim: usize, var: usize) -> Self {
        Self::monomial(Monomial::var_pow(dim, var, 1), Rational::one())
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let dim = m.dimension();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { dim, terms }
    }

    /// Builds a polynomial from `(monomial, coefficient)` pairs, summing
    /// repeated monomials.
    pub fn from_terms<I>(dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut p = Self::zero(dim);
        for (m, c) in terms {
            if m.dimension() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: m.dimension(),
                });
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    /// `|x|^2 = x_1^2 + … + x_d^2`.
    pub fn norm_squared(dim: usize) -> Self {
        let mut p = Self::zero(dim);
        for j in 0..dim {
            p.add_term(Monomial::var_pow(dim, j, 2), Rational::one());
        }
        p
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(Monomial::degree);
        match degrees.next() {
            None => true,
            Some(first) => degrees.all(|d| d == first),
        }
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_dim(&self, other: &Polynomial) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_dim(other)?;
        let mut out = Polynomial::zero(self.dim);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.dim);
        }
        Polynomial {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), v * c))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Polynomial {
        let mut acc = Polynomial::one(self.dim);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Partial derivative with respect to `x_{var+1}`.
    pub fn derivative(&self, var: usize) -> Polynomial {
        let mut out = Polynomial::zero(self.dim);
        for (m, c) in &self.terms {
            let e = m.exponent(var);
            if e == 0 {
                continue;
            }
            let shifted = m.shifted(var, -1).expect("positive exponent");
            out.add_term(shifted, c * int(i64::from(e)));
        }
        out
    }

    /// `Σ_j ∂²p/∂x_j²`.
    pub fn laplacian(&self) -> Polynomial {
        let mut out = Polynomial::zero(self.dim);
        for (m, c) in &self.terms {
            for var in 0..self.dim {
                let e = m.exponent(var);
                if e < 2 {
                    continue;
                }
                let shifted = m.shifted(var, -2).expect("exponent at least two");
                out.add_term(shifted, c * int(i64::from(e) * i64::from(e - 1)));
            }
        }
        out
    }

    /// Sum of the terms of total degree exactly `degree`.
    pub fn homogeneous_component(&self, degree: u32) -> Polynomial {
        Polynomial {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == degree)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Homogeneous components indexed by degree, `0..=deg p`.
    pub fn homogeneous_parts(&self) -> Vec<Polynomial> {
        let top = self.degree().unwrap_or(0);
        let mut parts = vec![Polynomial::zero(self.dim); top as usize + 1];
        for (m, c) in &self.terms {
            parts[m.degree() as usize]
                .terms
                .insert(m.clone(), c.clone());
        }
        parts
    }

    /// `p · |x|^power` for even `power ≥ 0`.
    pub fn substitute_radial(&self, power: u32) -> Result<Polynomial> {
        if !power.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "|x|^{power} is not a polynomial (odd power)"
            )));
        }
        Ok(self * &Polynomial::norm_squared(self.dim).pow(power / 2))
    }

    /// Relabels variables: `x_i` becomes `x_{perm[i]}` (zero-based).
    pub fn permute_variables(&self, perm: &[usize]) -> Result<Polynomial> {
        let mut seen = vec![false; self.dim];
        if perm.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: perm.len(),
            });
        }
        for &p in perm {
            if p >= self.dim || seen[p] {
                return Err(Error::InvalidParameter(format!(
                    "{perm:?} is not a permutation of 0..{}",
                    self.dim
                )));
            }
            seen[p] = true;
        }
        Ok(Polynomial {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.permuted(perm), c.clone()))
                .collect(),
        })
    }

    /// Swaps `x_{i+1}` and `x_{j+1}`.
    pub fn swap_variables(&self, i: usize, j: usize) -> Result<Polynomial> {
        let mut perm: Vec<usize> = (0..self.dim).collect();
        if i >= self.dim || j >= self.dim {
            return Err(Error::InvalidParameter(format!(
                "variable index out of range for dimension {}",
                self.dim
            )));
        }
        perm.swap(i, j);
        self.permute_variables(&perm)
    }

    /// Embeds into one more variable, which does not occur.
    pub fn lift(&self) -> Polynomial {
        Polynomial {
            dim: self.dim + 1,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.extended(0), c.clone()))
                .collect(),
        }
    }

    /// Exact evaluation at a rational point.
    pub fn eval_rational(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: point.len(),
            });
        }
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.exponents()) {
                if e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Evaluates at a big-float point, rounding every operation to
    /// nearest at `prec` bits.
    ///
    /// Uses a recursive Horner scheme: the polynomial is treated as a
    /// univariate polynomial in `x_1` whose coefficients are polynomials in
    /// the remaining variables.
    pub fn evaluate(&self, point: &[BigFloat], prec: u32) -> Result<BigFloat> {
        if point.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: point.len(),
            });
        }
        let terms: Vec<(&[u32], &Rational)> = self
            .terms
            .iter()
            .map(|(m, c)| (m.exponents(), c))
            .collect();
        Ok(horner(&terms, 0, point, prec))
    }

    /// Largest absolute coefficient, zero for the zero polynomial.
    pub fn max_abs_coefficient(&self) -> Rational {
        self.terms
            .values()
            .map(Signed::abs)
            .max()
            .unwrap_or_else(Rational::zero)
    }
}

fn horner(terms: &[(&[u32], &Rational)], var: usize, point: &[BigFloat], prec: u32) -> BigFloat {
    if terms.is_empty() {
        return BigFloat::zero();
    }
    if var == point.len() {
        let mut acc = BigFloat::zero();
        for (_, c) in terms {
            acc = acc.add(&BigFloat::from_rational(c, prec), prec);
        }
        return acc;
    }
    let mut groups: BTreeMap<u32, Vec<(&[u32], &Rational)>> = BTreeMap::new();
    for &(e, c) in terms {
        groups.entry(e[var]).or_default().push((e, c));
    }
    let x = &point[var];
    let mut acc = BigFloat::zero();
    let mut current = *groups.keys().next_back().expect("nonempty");
    for (&e, group) in groups.iter().rev() {
        for _ in e..current {
            acc = acc.mul(x, prec);
        }
        current = e;
        acc = acc.add(&horner(group, var + 1, point, prec), prec);
    }
    for _ in 0..current {
        acc = acc.mul(x, prec);
    }
    acc
}

impl Add for &Polynomial {
    type Output = Polynomial;

    /// Panics on dimension mismatch; use [`Polynomial::checked_add`] for a
    /// fallible version.
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.checked_add(rhs).expect("dimension mismatch in +")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.checked_sub(rhs).expect("dimension mismatch in -")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.checked_mul(rhs).expect("dimension mismatch in *")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        self.scale(&-Rational::one())
    }
}

impl fmt::Display for Polynomial {
    /// Canonical form: descending graded-lex order, `p/q` coefficients,
    /// unit coefficients elided, e.g. `3/2*x1^2*x3 - x2 + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let is_const = m.degree() == 0;
            if is_const {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for Polynomial {
    type Err = Error;

    /// Parses with the dimension inferred from the highest variable index.
    fn from_str(s: &str) -> Result<Self> {
        parse::parse_polynomial(s, None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn p(s: &str, d: usize) -> Polynomial {
        parse::parse_polynomial(s, Some(d)).unwrap()
    }

    #[test]
    fn ring_examples() {
        let x1 = Polynomial::var(2, 0);
        assert_eq!(&x1 * &x1, p("x1^2", 2));
        let q = p("3*x1^2 - x2 + 7/3", 2);
        assert!((&q + &(-&q)).is_zero());
        let circle = p("x1^2 + x2^2 - 1", 2);
        assert_eq!(
            circle.scale(&rat(1, 2)),
            p("1/2*x1^2 + 1/2*x2^2 - 1/2", 2)
        );
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let a = Polynomial::var(2, 0);
        let b = Polynomial::var(3, 0);
        assert!(matches!(
            a.checked_add(&b),
            Err(Error::DimensionMismatch { expected: 2, found: 3 })
        ));
        assert!(a.checked_mul(&b).is_err());
    }

    #[test]
    fn laplacian_examples() {
        assert!(p("x1^2 - x2^2", 2).laplacian().is_zero());
        assert_eq!(p("x1^2", 2).laplacian(), Polynomial::constant(2, int(2)));
        for d in 2..6 {
            assert_eq!(
                Polynomial::norm_squared(d).laplacian(),
                Polynomial::constant(d, int(2 * d as i64))
            );
        }
    }

    #[test]
    fn homogeneous_component_examples() {
        let q = p("x2^2 - x1", 2);
        assert_eq!(q.homogeneous_component(2), p("x2^2", 2));
        assert_eq!(q.homogeneous_component(1), p("-x1", 2));
        assert!(q.homogeneous_component(5).is_zero());
    }

    #[test]
    fn evaluate_examples() {
        let prec = 128;
        let bf = |n, d| BigFloat::from_rational(&rat(n, d), prec);
        let v = p("x1^2 + x2^2", 2)
            .evaluate(&[bf(3, 5), bf(4, 5)], prec)
            .unwrap();
        assert!((v.to_f64() - 1.0).abs() < 1e-30);
        let v = Polynomial::constant(3, int(7))
            .evaluate(&[bf(1, 3), bf(-2, 1), bf(5, 7)], prec)
            .unwrap();
        assert_eq!(v.to_f64(), 7.0);
        let v = p("x1*x2", 2).evaluate(&[bf(2, 1), bf(3, 1)], prec).unwrap();
        assert_eq!(v.to_f64(), 6.0);
        assert!(p("x1", 2).evaluate(&[bf(1, 1)], prec).is_err());
    }

    #[test]
    fn evaluate_matches_exact() {
        let poly = p("3/7*x1^5*x2 - 2*x1^2*x3^4 + x2^3 - 11/13", 3);
        let point = [rat(2, 3), rat(-5, 4), rat(7, 9)];
        let exact = poly.eval_rational(&point).unwrap();
        let prec = 200;
        let fpoint: Vec<_> = point.iter().map(|r| BigFloat::from_rational(r, prec)).collect();
        let approx = poly.evaluate(&fpoint, prec).unwrap();
        let err = (approx.to_rational() - exact).abs();
        assert!(err < rat(1, 1 << 60) * rat(1, 1 << 60));
    }

    #[test]
    fn substitute_radial_examples() {
        let one = Polynomial::one(2);
        assert_eq!(one.substitute_radial(2).unwrap(), p("x1^2 + x2^2", 2));
        let x1 = Polynomial::var(2, 0);
        assert_eq!(x1.substitute_radial(0).unwrap(), x1);
        // (a + b)^2 expanded by the binomial theorem.
        let mut oracle = Polynomial::zero(2);
        for (k, binom) in [1i64, 2, 1].iter().enumerate() {
            let k = k as u32;
            oracle.add_term(Monomial::new(vec![2 * k, 4 - 2 * k]), int(*binom));
        }
        assert_eq!(one.substitute_radial(4).unwrap(), oracle);
        assert!(one.substitute_radial(3).is_err());
    }

    #[test]
    fn permutation() {
        let f = p("x1^2*x3 + 2*x2", 3);
        assert_eq!(f.swap_variables(0, 2).unwrap(), p("x3^2*x1 + 2*x2", 3));
        assert!(f.permute_variables(&[0, 0, 1]).is_err());
    }

    #[test]
    fn canonical_print() {
        let f = p("1 - x2 + 3/2*x3*x1^2", 3);
        assert_eq!(f.to_string(), "3/2*x1^2*x3 - x2 + 1");
        assert_eq!(Polynomial::zero(2).to_string(), "0");
        assert_eq!(p("-x1 - 1", 1).to_string(), "-x1 - 1");
    }
}
