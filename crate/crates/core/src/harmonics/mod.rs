//! Orthogonal bases of spherical harmonics built by induction on the
//! dimension, and the tridiagonal blocks of multiplication by `x_d²`.
//!
//! In dimension `d` the basis entry of degree `k` attached to the
//! `(d-1)`-dimensional harmonic `Y_{s,l}` is
//!
//! ```text
//! Y_{k,(s,l)}(x) = Y_{s,l}(x_1, …, x_{d-1}) · |x|^{k-s} P_{k-s}^{(α_s,α_s)}(x_d / |x|),
//! α_s = s + (d - 3)/2.
//! ```
//!
//! The induction starts from `d = 1`, where the "harmonics" are `1` and
//! `x_1` on the two-point sphere `S^0`.

mod block;
mod grid;

pub use block::{
    assemble_block, interlacing_lower_bound, odd_block_jacobizero, smallest_eigenvalue_charpoly,
    smallest_eigenvalue_jacobizero, BlockMatrix, EigenResult, Route,
};
pub use grid::{
    bound_enclosures, even_odd_reduction_check, random_homogeneous, rayleigh_quotient_coordinate,
    verify_bound_grid, BoundEnclosures, GridRow, ReductionRow,
};

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::jacobi::jacobi_sequence;
use crate::poly::{int, rat, Polynomial, Rational, UniPoly};
use crate::sphere::{gamma_half, PiScaled};

/// Label of a basis entry. `l` counts from 1 within degree `s` of the
/// `(d-1)`-dimensional basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BasisIndex {
    pub d: usize,
    pub k: u32,
    pub s: u32,
    pub l: usize,
}

impl BasisIndex {
    pub fn sigma(&self) -> u32 {
        self.s / 2
    }

    pub fn delta(&self) -> u32 {
        self.s % 2
    }
}

/// `α_s = s + (d-3)/2`.
pub fn alpha_for(d: usize, s: u32) -> Rational {
    int(i64::from(s)) + rat(d as i64 - 3, 2)
}

fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < k || n < 0 {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `dim H_k(R^d) = C(k+d-1, d-1) - C(k+d-3, d-1)`.
pub fn dim_harmonic(d: usize, k: u32) -> usize {
    let (d, k) = (d as i64, i64::from(k));
    let v = binomial(k + d - 1, d - 1) - binomial(k + d - 3, d - 1);
    usize::try_from(v).unwrap_or(0)
}

#[derive(Debug, Clone)]
pub struct BasisEntry {
    pub index: BasisIndex,
    lower: Arc<Polynomial>,
    jacobi: UniPoly,
    alpha: Rational,
    norm_sq: PiScaled,
}

impl BasisEntry {
    /// `⟨Y, Y⟩` over the unit sphere.
    pub fn norm_sq(&self) -> &PiScaled {
        &self.norm_sq
    }

    pub fn alpha(&self) -> &Rational {
        &self.alpha
    }

    /// The `(d-1)`-dimensional factor `Y_{s,l}`.
    pub fn lower(&self) -> &Polynomial {
        &self.lower
    }

    /// Expands the entry as a polynomial in `d` variables. All `|x|` factors
    /// cancel because `P_{k-s}` has the parity of `k - s`.
    pub fn polynomial(&self) -> Polynomial {
        let d = self.index.d;
        let n = (self.index.k - self.index.s) as usize;
        let r2 = Polynomial::norm_squared(d);
        let xd = Polynomial::var(d, d - 1);
        let mut radial = Polynomial::zero(d);
        for (j, c) in self.jacobi.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            debug_assert_eq!((n - j) % 2, 0);
            let term = &xd.pow(j as u32) * &r2.pow(((n - j) / 2) as u32);
            radial = &radial + &term.scale(c);
        }
        &self.lower.lift() * &radial
    }
}

/// Orthogonal basis of `⊕_{k ≤ K} H_k(R^d)`.
#[derive(Debug, Clone)]
pub struct HarmonicBasis {
    d: usize,
    max_degree: u32,
    entries: Vec<BasisEntry>,
    lookup: HashMap<(u32, u32, usize), usize>,
}

/// Degree-`s` entries of the `(d-1)`-dimensional basis, materialized.
type LowerLayer = Vec<Vec<(Arc<Polynomial>, PiScaled)>>;

impl HarmonicBasis {
    pub fn dimension(&self) -> usize {
        self.d
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn entries(&self) -> &[BasisEntry] {
        &self.entries
    }

    pub fn get(&self, k: u32, s: u32, l: usize) -> Option<&BasisEntry> {
        self.lookup.get(&(k, s, l)).map(|&i| &self.entries[i])
    }

    pub fn degree(&self, k: u32) -> impl Iterator<Item = &BasisEntry> {
        self.entries.iter().filter(move |e| e.index.k == k)
    }

    /// Number of `l` labels available for a given `s`.
    pub fn labels(&self, s: u32) -> usize {
        dim_harmonic(self.d - 1, s)
    }
}

fn floor_layer(max_degree: u32) -> LowerLayer {
    // S^0 = {±1} with counting measure: ⟨1,1⟩ = ⟨x1,x1⟩ = 2.
    let two = PiScaled::rational(int(2));
    (0..=max_degree)
        .map(|s| match s {
            0 => vec![(Arc::new(Polynomial::one(1)), two.clone())],
            1 => vec![(Arc::new(Polynomial::var(1, 0)), two.clone())],
            _ => Vec::new(),
        })
        .collect()
}

/// `∫_{-1}^{1} P(t)² (1-t²)^{s+(d-3)/2} dt` as a multiple of a power of π.
fn radial_norm(d: usize, s: u32, p: &UniPoly) -> PiScaled {
    let sq = p * p;
    let (g_mid, e_mid) = gamma_half(2 * s + d as u32 - 1);
    let mut acc = PiScaled::zero();
    for (i, c) in sq.coeffs().iter().enumerate() {
        if i % 2 == 1 || c.is_zero() {
            continue;
        }
        let j = (i / 2) as u32;
        let (g_top, e_top) = gamma_half(2 * j + 1);
        let (g_bot, e_bot) = gamma_half(2 * s + 2 * j + d as u32);
        let w = PiScaled::new(c * g_top * &g_mid / g_bot, e_top + e_mid - e_bot);
        acc = acc.try_add(&w).expect("π powers agree across j");
    }
    acc
}

fn build_layer(d: usize, max_degree: u32, lower: &LowerLayer) -> HarmonicBasis {
    let mut entries = Vec::new();
    let mut lookup = HashMap::new();
    let sequences: Vec<Vec<UniPoly>> = (0..=max_degree)
        .map(|s| {
            if lower[s as usize].is_empty() {
                Vec::new()
            } else {
                jacobi_sequence((max_degree - s) as usize, &alpha_for(d, s))
                    .expect("α_s > -1 for d ≥ 2")
            }
        })
        .collect();
    for k in 0..=max_degree {
        for s in 0..=k {
            let alpha = alpha_for(d, s);
            for (l0, (poly, norm)) in lower[s as usize].iter().enumerate() {
                let jacobi = sequences[s as usize][(k - s) as usize].clone();
                let norm_sq = norm.mul(&radial_norm(d, s, &jacobi));
                let index = BasisIndex { d, k, s, l: l0 + 1 };
                lookup.insert((k, s, l0 + 1), entries.len());
                entries.push(BasisEntry {
                    index,
                    lower: Arc::clone(poly),
                    jacobi,
                    alpha: alpha.clone(),
                    norm_sq,
                });
            }
        }
    }
    HarmonicBasis {
        d,
        max_degree,
        entries,
        lookup,
    }
}

/// Builds the basis of harmonics of degree at most `max_degree` in `d`
/// variables. Lower-dimensional layers are materialized; entries of the
/// top layer expand on demand through [`BasisEntry::polynomial`].
pub fn build_basis(d: usize, max_degree: u32) -> Result<HarmonicBasis> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("basis dimension d = {d} must be ≥ 2")));
    }
    let mut layer = floor_layer(max_degree);
    for dim in 2..d {
        let basis = build_layer(dim, max_degree, &layer);
        let mut next: LowerLayer = vec![Vec::new(); max_degree as usize + 1];
        for e in &basis.entries {
            next[e.index.k as usize].push((Arc::new(e.polynomial()), e.norm_sq.clone()));
        }
        layer = next;
    }
    Ok(build_layer(d, max_degree, &layer))
}
