//! Exact polynomial arithmetic.

mod monomial;
mod parse;
mod polynomial;
mod univariate;

pub use monomial::{monomials_of_degree, Monomial};
pub use parse::{parse_polynomial, parse_rational};
pub use polynomial::Polynomial;
pub use univariate::{IntPoly, UniPoly};

use num_bigint::BigInt;
use num_rational::BigRational;

/// Exact rational scalar, always in lowest terms with positive denominator.
pub type Rational = BigRational;

/// Shorthand for the rational `num / den`.
///
/// Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// The integer `n` as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}
