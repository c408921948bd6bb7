//! Exact polynomial machinery for the Dirichlet problem on nonhyperbolic
//! quadratic hypersurfaces.
//!
//! The crate is organised bottom-up:
//!
//! - [`poly`]: sparse multivariate polynomials over the rationals, the
//!   canonical text grammar, and dense univariate helpers.
//! - [`numeric`]: big-float evaluation and certified rational enclosures
//!   (π, square roots, sine/cosine) used wherever an inequality involving
//!   a transcendental constant is certified.
//! - [`linsolve`]: fraction-free Gaussian elimination.
//! - [`roots`]: Sturm sequences and certified real-root brackets.
//! - [`sphere`]: exact integrals over the unit sphere, valued in
//!   rational multiples of half-integer powers of π.
//! - [`jacobi`]: symmetric Jacobi polynomials, their recurrences and zeros.
//! - [`harmonics`]: inductive spherical-harmonic bases, tridiagonal blocks,
//!   smallest eigenvalues and the certified Rayleigh-quotient bound grid.
//! - [`fischer`]: the decomposition `f = q·s + r` with `Δr = 0`, the
//!   induced Dirichlet solver, Gauss decompositions and truncated series.

pub mod error;
pub mod fischer;
pub mod harmonics;
pub mod jacobi;
pub mod linsolve;
pub mod numeric;
pub mod poly;
pub mod roots;
pub mod sphere;

pub use error::{Error, Result};
pub use poly::{Monomial, Polynomial, Rational, UniPoly};
pub use sphere::PiScaled;
