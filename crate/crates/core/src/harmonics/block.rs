use num_traits::{Signed, Zero};
use serde::Serialize;

use super::{alpha_for, HarmonicBasis};
use crate::error::{Error, Result};
use crate::jacobi::{first_positive_zero, first_positive_zero_odd, squared_recurrence};
use crate::poly::{int, Rational, UniPoly};
use crate::roots::smallest_root_above;
use crate::sphere::ser_rational;

/// The block `A_m(s, l)` of multiplication by `x_d²` on degree-`2m`
/// forms, restricted to the harmonics carrying the label `(s, l)`.
///
/// Rows and columns run over `k = σ+δ, …, m`. The stored matrix acts on
/// the unnormalized basis `Y_{2k,(s,l)}`:
/// `diag[i] = b̃_{2k-s}`, `upper[i] = ã_{2k-s}`, `lower[i] = g̃_{2k+2-s}`.
/// It is similar to the symmetric matrix in the normalized basis, whose
/// squared off-diagonal entries are `upper[i]·lower[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockMatrix {
    pub d: usize,
    pub m: u32,
    pub s: u32,
    pub l: usize,
    #[serde(serialize_with = "ser_rational")]
    pub alpha: Rational,
    #[serde(serialize_with = "ser_vec")]
    pub diag: Vec<Rational>,
    #[serde(serialize_with = "ser_vec")]
    pub upper: Vec<Rational>,
    #[serde(serialize_with = "ser_vec")]
    pub lower: Vec<Rational>,
    /// `⟨Y_{2k+2}, Y_{2k+2}⟩ / ⟨Y_{2k}, Y_{2k}⟩`, checked against `lower[i]/upper[i]`.
    #[serde(serialize_with = "ser_vec")]
    pub norm_ratios: Vec<Rational>,
}

fn ser_vec<S: serde::Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for r in v {
        seq.serialize_element(&r.to_string())?;
    }
    seq.end()
}

impl BlockMatrix {
    pub fn size(&self) -> usize {
        self.diag.len()
    }

    pub fn sigma(&self) -> u32 {
        self.s / 2
    }

    pub fn delta(&self) -> u32 {
        self.s % 2
    }

    /// Squares of the off-diagonal entries of the symmetric form.
    pub fn symmetric_offdiag_sq(&self) -> Vec<Rational> {
        self.upper.iter().zip(&self.lower).map(|(u, l)| u * l).collect()
    }

    /// Entry `(i, j)` of the stored matrix; zero off the three diagonals.
    pub fn entry(&self, i: usize, j: usize) -> Rational {
        if i == j {
            self.diag[i].clone()
        } else if j == i + 1 {
            self.upper[i].clone()
        } else if i == j + 1 {
            self.lower[j].clone()
        } else {
            Rational::zero()
        }
    }

    /// `det(λ I - A)` via the three-term recurrence.
    pub fn characteristic_polynomial(&self) -> UniPoly {
        let mut prev = UniPoly::constant(int(1));
        let mut cur = &UniPoly::x() - &UniPoly::constant(self.diag[0].clone());
        for (i, c) in self.symmetric_offdiag_sq().iter().enumerate() {
            let shifted = &UniPoly::x() - &UniPoly::constant(self.diag[i + 1].clone());
            let next = &(&shifted * &cur) - &prev.scale(c);
            prev = cur;
            cur = next;
        }
        cur
    }

    /// Largest row sum of absolute values, an upper bound on every eigenvalue.
    pub fn gershgorin_upper(&self) -> Rational {
        (0..self.size())
            .map(|i| {
                let mut r = self.diag[i].abs();
                if i + 1 < self.size() {
                    r += self.upper[i].abs();
                }
                if i > 0 {
                    r += self.lower[i - 1].abs();
                }
                r
            })
            .max()
            .expect("nonempty block")
    }

    /// Smallest Gershgorin lower end, a lower bound on every eigenvalue.
    pub fn gershgorin_lower(&self) -> Rational {
        (0..self.size())
            .map(|i| {
                let mut r = self.diag[i].clone();
                if i + 1 < self.size() {
                    r -= self.upper[i].abs();
                }
                if i > 0 {
                    r -= self.lower[i - 1].abs();
                }
                r
            })
            .min()
            .expect("nonempty block")
    }

    /// Entries that determine the spectrum; blocks with equal keys share
    /// eigenvalues.
    pub fn content_key(&self) -> (Vec<Rational>, Vec<Rational>, Vec<Rational>) {
        (self.diag.clone(), self.upper.clone(), self.lower.clone())
    }
}

/// Assembles `A_m(s, l)` from the recurrence coefficients of
/// `P^{(α_s, α_s)}` and checks every squared-norm ratio of consecutive
/// basis entries against them.
pub fn assemble_block(basis: &HarmonicBasis, m: u32, s: u32, l: usize) -> Result<BlockMatrix> {
    let d = basis.dimension();
    if s > 2 * m {
        return Err(Error::InvalidParameter(format!("block needs s ≤ 2m, got s = {s}, m = {m}")));
    }
    if basis.max_degree() < 2 * m {
        return Err(Error::InvalidParameter(format!(
            "basis covers degree {} but the block needs {}",
            basis.max_degree(),
            2 * m
        )));
    }
    if l == 0 || l > basis.labels(s) {
        return Err(Error::InvalidParameter(format!(
            "label l = {l} out of range 1..={} for s = {s}",
            basis.labels(s)
        )));
    }
    let alpha = alpha_for(d, s);
    let k0 = s.div_ceil(2);
    let mut diag = Vec::new();
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    let mut norm_ratios = Vec::new();
    for k in k0..=m {
        let n = (2 * k - s) as usize;
        let c = squared_recurrence(n, &alpha)?;
        diag.push(c.b_tilde);
        if k < m {
            let next = squared_recurrence(n + 2, &alpha)?;
            let here = basis
                .get(2 * k, s, l)
                .ok_or_else(|| Error::NormRatio(format!("missing entry ({}, {s}, {l})", 2 * k)))?;
            let there = basis
                .get(2 * k + 2, s, l)
                .ok_or_else(|| Error::NormRatio(format!("missing entry ({}, {s}, {l})", 2 * k + 2)))?;
            let ratio = there
                .norm_sq()
                .ratio(here.norm_sq())
                .map_err(|e| Error::NormRatio(format!("k = {k}, s = {s}, l = {l}: {e}")))?;
            if ratio != &next.g_tilde / &c.a_tilde {
                return Err(Error::NormRatio(format!(
                    "k = {k}, s = {s}, l = {l}: ratio {ratio} disagrees with g̃/ã = {}",
                    &next.g_tilde / &c.a_tilde
                )));
            }
            norm_ratios.push(ratio);
            upper.push(c.a_tilde);
            lower.push(next.g_tilde);
        }
    }
    Ok(BlockMatrix {
        d,
        m,
        s,
        l,
        alpha,
        diag,
        upper,
        lower,
        norm_ratios,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    CharPoly,
    JacobiZero,
    /// Odd `s`: squared first positive zero of `P_{2N+1}`, recorded for
    /// comparison only.
    OddJacobiZero,
    /// Odd `s`: bracket on the smallest eigenvalue of the `s - 1` block,
    /// which bounds the odd block from below by interlacing.
    Interlacing,
}

/// Certified bracket on the smallest eigenvalue of a block.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EigenResult {
    #[serde(serialize_with = "ser_rational")]
    pub lower: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub upper: Rational,
    pub route: Route,
    pub certified: bool,
    pub d: usize,
    pub m: u32,
    pub s: u32,
}

impl EigenResult {
    pub fn width(&self) -> Rational {
        &self.upper - &self.lower
    }

    pub fn overlaps(&self, other: &EigenResult) -> bool {
        self.lower <= other.upper && other.lower <= self.upper
    }
}

fn check_tol(tol: &Rational) -> Result<()> {
    if !tol.is_positive() {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    Ok(())
}

/// Smallest eigenvalue from a Sturm isolation of the characteristic
/// polynomial on `(0, Gershgorin bound]`.
pub fn smallest_eigenvalue_charpoly(block: &BlockMatrix, tol: &Rational) -> Result<EigenResult> {
    check_tol(tol)?;
    let (lower, upper, certified) = if block.size() == 1 {
        (block.diag[0].clone(), block.diag[0].clone(), true)
    } else {
        let p = block.characteristic_polynomial();
        let b = smallest_root_above(&p, &Rational::zero(), &block.gershgorin_upper(), tol)?;
        // The spectrum is positive, so the count on (0, G] must be complete.
        let full = crate::roots::SturmChain::new(&p)?
            .count_roots(&Rational::zero(), &block.gershgorin_upper())
            == block.size();
        (b.lower, b.upper, b.certified && full)
    };
    Ok(EigenResult {
        lower,
        upper,
        route: Route::CharPoly,
        certified,
        d: block.d,
        m: block.m,
        s: block.s,
    })
}

fn squared_bracket(lo: &Rational, hi: &Rational) -> (Rational, Rational) {
    (lo * lo, hi * hi)
}

/// For even `s`: the smallest eigenvalue of `A_m(s, l)` is the square of
/// the first positive zero of `P_{2n}^{(α_s, α_s)}` with `n = m - σ + 1`.
pub fn smallest_eigenvalue_jacobizero(d: usize, m: u32, s: u32, tol: &Rational) -> Result<EigenResult> {
    check_tol(tol)?;
    if s % 2 == 1 {
        return Err(Error::InvalidParameter(format!(
            "the Jacobi-zero route needs even s, got s = {s}; use the interlacing bound"
        )));
    }
    if s > 2 * m {
        return Err(Error::InvalidParameter(format!("block needs s ≤ 2m, got s = {s}, m = {m}")));
    }
    let n = (m - s / 2 + 1) as usize;
    // x ≤ 1, so a bracket of width tol/2 squares to width ≤ tol.
    let z = first_positive_zero(n, &alpha_for(d, s), &(tol / int(2)))?;
    let (lower, upper) = squared_bracket(&z.lower, &z.upper);
    Ok(EigenResult {
        lower,
        upper,
        route: Route::JacobiZero,
        certified: z.certified,
        d,
        m,
        s,
    })
}

/// For odd `s`: the squared first positive zero of `P_{2N+1}^{(α_s, α_s)}`
/// with `N = m - σ`.
pub fn odd_block_jacobizero(d: usize, m: u32, s: u32, tol: &Rational) -> Result<EigenResult> {
    check_tol(tol)?;
    if s.is_multiple_of(2) || s > 2 * m {
        return Err(Error::InvalidParameter(format!(
            "odd-block comparison needs odd s < 2m, got s = {s}, m = {m}"
        )));
    }
    let n = (m - s / 2) as usize;
    let z = first_positive_zero_odd(n, &alpha_for(d, s), &(tol / int(2)))?;
    let (lower, upper) = squared_bracket(&z.lower, &z.upper);
    Ok(EigenResult {
        lower,
        upper,
        route: Route::OddJacobiZero,
        certified: z.certified,
        d,
        m,
        s,
    })
}

/// For odd `s`: the smallest eigenvalue of `A_m(s, l)` is at least that of
/// `A_m(s - 1, l')`, given here by the Jacobi-zero route. Only `lower` is a
/// bound on the odd block.
pub fn interlacing_lower_bound(d: usize, m: u32, s: u32, tol: &Rational) -> Result<EigenResult> {
    if s % 2 == 0 || s > 2 * m {
        return Err(Error::InvalidParameter(format!(
            "interlacing bound needs odd s < 2m, got s = {s}, m = {m}"
        )));
    }
    let even = smallest_eigenvalue_jacobizero(d, m, s - 1, tol)?;
    Ok(EigenResult {
        route: Route::Interlacing,
        s,
        ..even
    })
}
