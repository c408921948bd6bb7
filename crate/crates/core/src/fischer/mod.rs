//! Fischer decomposition `f = q·s + r` with `Δr = 0` for nonhyperbolic
//! quadrics `q = Σ a_j² x_j² + Σ b_j x_j + c`.
//!
//! Since `r` is harmonic and equals `f` on `{q = 0}`, `r` solves the
//! Dirichlet problem with data `f` on that hypersurface.

mod boundary;
mod series;

pub use boundary::{boundary_residual, BoundaryReport};
pub use series::{
    cos_series, dirichlet_solve_series, stabilization_profile, SeriesData, SeriesDiagnostics,
    SeriesSolution, StabilizationReport,
};

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linsolve::solve;
use crate::poly::{monomials_of_degree, Monomial, Polynomial, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadricKind {
    /// Every `a_j² > 0`.
    Ellipsoid,
    /// Some `b_j ≠ 0` with `a_j = 0`.
    Paraboloid,
    /// Exactly one `a_j² > 0`.
    Slab,
    /// Some but not all `a_j² > 0` (more than one).
    Cylinder,
}

impl fmt::Display for QuadricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            QuadricKind::Ellipsoid => "ellipsoid",
            QuadricKind::Paraboloid => "paraboloid",
            QuadricKind::Slab => "slab",
            QuadricKind::Cylinder => "cylinder",
        };
        f.write_str(s)
    }
}

/// `q(x) = Σ a_j² x_j² + Σ b_j x_j + c` with every `a_j² ≥ 0` and at least
/// one `a_j² > 0`. The squares are given directly as rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonhyperbolicQuadric {
    squares: Vec<Rational>,
    linear: Vec<Rational>,
    constant: Rational,
}

impl NonhyperbolicQuadric {
    pub fn new(squares: Vec<Rational>, linear: Vec<Rational>, constant: Rational) -> Result<Self> {
        if squares.is_empty() {
            return Err(Error::InvalidQuadric("dimension must be at least 1".into()));
        }
        if squares.len() != linear.len() {
            return Err(Error::DimensionMismatch {
                expected: squares.len(),
                found: linear.len(),
            });
        }
        if let Some(j) = squares.iter().position(Signed::is_negative) {
            return Err(Error::InvalidQuadric(format!(
                "coefficient of x{}^2 is negative ({}); squares a_j^2 must be nonnegative",
                j + 1,
                squares[j]
            )));
        }
        if squares.iter().all(Zero::is_zero) {
            return Err(Error::InvalidQuadric(
                "no square term: at least one a_j must be nonzero".into(),
            ));
        }
        Ok(NonhyperbolicQuadric {
            squares,
            linear,
            constant,
        })
    }

    /// `|x|² - 1` in `d` variables.
    pub fn unit_sphere(d: usize) -> Self {
        Self::new(
            vec![Rational::from_integer(1.into()); d],
            vec![Rational::zero(); d],
            Rational::from_integer((-1).into()),
        )
        .expect("valid quadric")
    }

    /// Reads the coefficients off a polynomial of degree at most 2.
    pub fn from_polynomial(p: &Polynomial) -> Result<Self> {
        let d = p.dimension();
        let mut squares = vec![Rational::zero(); d];
        let mut linear = vec![Rational::zero(); d];
        let mut constant = Rational::zero();
        for (m, c) in p.terms() {
            match m.degree() {
                0 => constant = c.clone(),
                1 => {
                    let j = m.exponents().iter().position(|&e| e == 1).expect("degree 1");
                    linear[j] = c.clone();
                }
                2 => match m.exponents().iter().position(|&e| e == 2) {
                    Some(j) => squares[j] = c.clone(),
                    None => {
                        return Err(Error::InvalidQuadric(format!(
                            "cross term {m} is not allowed; q must be Σ a_j^2 x_j^2 + Σ b_j x_j + c"
                        )))
                    }
                },
                deg => {
                    return Err(Error::InvalidQuadric(format!(
                        "term {m} has degree {deg}; q must have degree at most 2"
                    )))
                }
            }
        }
        Self::new(squares, linear, constant)
    }

    pub fn dimension(&self) -> usize {
        self.squares.len()
    }

    pub fn squares(&self) -> &[Rational] {
        &self.squares
    }

    pub fn linear(&self) -> &[Rational] {
        &self.linear
    }

    pub fn constant(&self) -> &Rational {
        &self.constant
    }

    /// `1` if the linear part is nonzero, else `0`.
    pub fn beta(&self) -> u8 {
        u8::from(self.linear.iter().any(|b| !b.is_zero()))
    }

    /// Geometric family after completing squares: a linear term only makes
    /// a paraboloid when its variable has no square term.
    pub fn kind(&self) -> QuadricKind {
        let open = self
            .squares
            .iter()
            .zip(&self.linear)
            .any(|(a, b)| a.is_zero() && !b.is_zero());
        if open {
            return QuadricKind::Paraboloid;
        }
        match self.squares.iter().filter(|a| a.is_positive()).count() {
            n if n == self.dimension() => QuadricKind::Ellipsoid,
            1 => QuadricKind::Slab,
            _ => QuadricKind::Cylinder,
        }
    }

    /// Whether a declared order `rho` satisfies `ρ < (2 - β)/2`.
    pub fn admits_order(&self, rho: f64) -> bool {
        rho < (2.0 - f64::from(self.beta())) / 2.0
    }

    /// The degree-2 part `Σ a_j² x_j²`.
    pub fn quadratic_part(&self) -> Polynomial {
        let d = self.dimension();
        Polynomial::from_terms(
            d,
            self.squares
                .iter()
                .enumerate()
                .map(|(j, a)| (Monomial::var_pow(d, j, 2), a.clone())),
        )
        .expect("dimensions agree")
    }

    /// The degree-1 part `Σ b_j x_j`.
    pub fn linear_part(&self) -> Polynomial {
        let d = self.dimension();
        Polynomial::from_terms(
            d,
            self.linear
                .iter()
                .enumerate()
                .map(|(j, b)| (Monomial::var_pow(d, j, 1), b.clone())),
        )
        .expect("dimensions agree")
    }

    pub fn to_polynomial(&self) -> Polynomial {
        let d = self.dimension();
        &(&self.quadratic_part() + &self.linear_part()) + &Polynomial::constant(d, self.constant.clone())
    }
}

impl fmt::Display for NonhyperbolicQuadric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_polynomial())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FischerResult {
    pub s: Polynomial,
    pub r: Polynomial,
    /// `f - q·s - r` is the zero polynomial.
    pub residual_is_zero: bool,
    /// `Δr` is the zero polynomial.
    pub laplacian_is_zero: bool,
}

fn check_dims(f: &Polynomial, q: &NonhyperbolicQuadric) -> Result<()> {
    if f.dimension() != q.dimension() {
        return Err(Error::DimensionMismatch {
            expected: q.dimension(),
            found: f.dimension(),
        });
    }
    Ok(())
}

/// Solves `Δ(P_2 · s_k) = rhs` for a homogeneous `s_k` of degree `k`.
///
/// `P_2` is even in every variable, so the operator preserves the parity
/// class of monomials and the system splits into one square block per
/// class.
fn solve_top_operator(p2: &Polynomial, k: u32, rhs: &Polynomial) -> Result<Polynomial> {
    let d = p2.dimension();
    let mut classes: BTreeMap<u64, Vec<Monomial>> = BTreeMap::new();
    for m in monomials_of_degree(d, k) {
        classes.entry(m.parity_class()).or_default().push(m);
    }
    let mut s = Polynomial::zero(d);
    for (class, monos) in classes {
        let b: Vec<Rational> = monos.iter().map(|m| rhs.coefficient(m)).collect();
        if b.iter().all(Zero::is_zero) {
            continue;
        }
        let images: Vec<Polynomial> = monos
            .iter()
            .map(|m| (p2 * &Polynomial::monomial(m.clone(), Rational::from_integer(1.into()))).laplacian())
            .collect();
        // Row i: coefficient of monos[i]; column j: unknown for monos[j].
        let matrix: Vec<Vec<Rational>> = monos
            .iter()
            .map(|row| images.iter().map(|img| img.coefficient(row)).collect())
            .collect();
        let x = solve(&matrix, &b).map_err(|e| match e {
            Error::Singular(msg) => Error::Singular(format!(
                "Fischer operator at degree {k}, parity class {class:#b}: {msg}"
            )),
            other => other,
        })?;
        for (m, c) in monos.into_iter().zip(x) {
            s.add_term(m, c);
        }
    }
    Ok(s)
}

/// Exact decomposition `f = q·s + r` with `Δr = 0`.
///
/// The equation `Δ(q·s) = Δf` is solved degree by degree from the top:
/// at degree `k`, `Δ(P_2 s_k) = [Δf]_k - Δ(P_1 s_{k+1}) - c·Δ s_{k+2}`.
pub fn fischer_decompose(f: &Polynomial, q: &NonhyperbolicQuadric) -> Result<FischerResult> {
    check_dims(f, q)?;
    let d = f.dimension();
    let p2 = q.quadratic_part();
    let p1 = q.linear_part();
    let c = q.constant().clone();
    let lap = f.laplacian();
    let top = f.degree().unwrap_or(0);
    let mut parts: Vec<Polynomial> = vec![Polynomial::zero(d); top as usize + 3];
    if top >= 2 {
        for k in (0..=top - 2).rev() {
            let ku = k as usize;
            let mut rhs = lap.homogeneous_component(k);
            if !parts[ku + 1].is_zero() {
                rhs = &rhs - &(&p1 * &parts[ku + 1]).laplacian();
            }
            if !parts[ku + 2].is_zero() && !c.is_zero() {
                rhs = &rhs - &parts[ku + 2].laplacian().scale(&c);
            }
            if !rhs.is_zero() {
                parts[ku] = solve_top_operator(&p2, k, &rhs)?;
            }
        }
    }
    let s = parts.iter().fold(Polynomial::zero(d), |acc, p| &acc + p);
    let qs = &q.to_polynomial() * &s;
    let r = f - &qs;
    let residual_is_zero = (&(f - &qs) - &r).is_zero();
    let laplacian_is_zero = r.laplacian().is_zero();
    if !laplacian_is_zero {
        return Err(Error::Verification(format!(
            "Δr ≠ 0 after decomposing {f} by {q}"
        )));
    }
    Ok(FischerResult {
        s,
        r,
        residual_is_zero,
        laplacian_is_zero,
    })
}

/// The harmonic `r` that agrees with `f` on `{q = 0}`.
pub fn dirichlet_solve(f: &Polynomial, q: &NonhyperbolicQuadric) -> Result<Polynomial> {
    Ok(fischer_decompose(f, q)?.r)
}

/// `f = Σ |x|^{n - deg h_i} h_i` with every `h_i` homogeneous harmonic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaussResult {
    pub degree: u32,
    /// `parts[i]` has degree `degree % 2 + 2i`.
    pub parts: Vec<Polynomial>,
}

impl GaussResult {
    pub fn reconstruct(&self) -> Result<Polynomial> {
        let d = self.parts.first().map_or(1, Polynomial::dimension);
        let mut acc = Polynomial::zero(d);
        for (i, h) in self.parts.iter().enumerate() {
            let deg = self.degree % 2 + 2 * i as u32;
            acc = &acc + &h.substitute_radial(self.degree - deg)?;
        }
        Ok(acc)
    }
}

/// Gauss decomposition of a homogeneous polynomial by repeated Fischer
/// decomposition with `q = |x|²`.
pub fn gauss_decompose(f: &Polynomial) -> Result<GaussResult> {
    if !f.is_homogeneous() {
        return Err(Error::InvalidParameter(format!("{f} is not homogeneous")));
    }
    let d = f.dimension();
    let degree = f.degree().unwrap_or(0);
    let q = NonhyperbolicQuadric::new(
        vec![Rational::from_integer(1.into()); d],
        vec![Rational::zero(); d],
        Rational::zero(),
    )?;
    let count = degree as usize / 2 + 1;
    let mut parts = vec![Polynomial::zero(d); count];
    let mut rest = f.clone();
    for i in (0..count).rev() {
        if rest.is_zero() {
            break;
        }
        let dec = fischer_decompose(&rest, &q)?;
        parts[i] = dec.r;
        rest = dec.s;
    }
    if !rest.is_zero() {
        return Err(Error::Verification(format!("Gauss decomposition of {f} left {rest}")));
    }
    Ok(GaussResult { degree, parts })
}
