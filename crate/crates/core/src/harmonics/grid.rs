use std::collections::HashMap;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{assemble_block, build_basis, smallest_eigenvalue_charpoly, BlockMatrix, EigenResult};
use crate::error::{Error, Result};
use crate::numeric::{pi_enclosure, to_f64, Interval};
use crate::poly::{int, monomials_of_degree, Polynomial, Rational};
use crate::sphere::{rayleigh_quotient, ser_rational};

const BOUND_BITS: u32 = 128;

/// `π² · c` enclosed at 128 bits.
fn pi_squared_times(c: &Rational) -> Interval {
    pi_enclosure(BOUND_BITS).square().scale(c)
}

fn inverse_square_quarter(q: u32) -> Rational {
    let q = int(i64::from(q));
    (&q * &q * int(4)).recip()
}

/// Enclosures of the three constants compared in a grid row of degree `m`
/// in dimension `d` (block index `⌈m/2⌉`).
#[derive(Debug, Clone)]
pub struct BoundEnclosures {
    /// `π² / (4 (m + 2d + 1)²)`
    pub thm3: Interval,
    /// `π² / (4 (2⌈m/2⌉ + 2d)²)`
    pub even: Interval,
    /// `π² / (16 (⌈m/2⌉ + d)²)`
    pub proof: Interval,
}

pub fn bound_enclosures(d: usize, m: u32) -> BoundEnclosures {
    let d = d as u32;
    let mb = m.div_ceil(2);
    let proof_q = mb + d;
    BoundEnclosures {
        thm3: pi_squared_times(&inverse_square_quarter(m + 2 * d + 1)),
        even: pi_squared_times(&inverse_square_quarter(2 * mb + 2 * d)),
        proof: pi_squared_times(&(int(16) * int(i64::from(proof_q * proof_q))).recip()),
    }
}

/// One certified comparison. Bounds are stored as the upper ends of their
/// enclosures; `pass` is `lambda_lower ≥` each of them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GridRow {
    pub d: usize,
    pub m: u32,
    pub s: u32,
    pub l: usize,
    pub size: usize,
    #[serde(serialize_with = "ser_rational")]
    pub lambda_lower: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub lambda_upper: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub bound_thm3: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub bound_even: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub bound_proof: Rational,
    pub pass: bool,
}

impl GridRow {
    pub const CSV_HEADER: &'static str =
        "d,m,s,l,size,lambda_lower,lambda_upper,bound_thm3,bound_even,bound_proof,pass";

    pub fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{}",
            self.d,
            self.m,
            self.s,
            self.l,
            self.size,
            to_f64(&self.lambda_lower),
            to_f64(&self.lambda_upper),
            to_f64(&self.bound_thm3),
            to_f64(&self.bound_even),
            to_f64(&self.bound_proof),
            self.pass
        )
    }

    /// `lambda_lower / bound_thm3`, for tightness statistics.
    pub fn margin(&self) -> f64 {
        to_f64(&(&self.lambda_lower / &self.bound_thm3))
    }
}

/// Certifies the Rayleigh-quotient bound for every degree `m ≤ max_degree`
/// and every block `(s, l)` in dimension `d`. A row of degree `m` uses the
/// block `A_{⌈m/2⌉}(s, l)` on forms of degree `2⌈m/2⌉`.
///
/// Eigenvalues are computed once per distinct block content, in parallel;
/// rows come back in `(m, s, l)` order.
pub fn verify_bound_grid(d: usize, max_degree: u32, tol: &Rational) -> Result<Vec<GridRow>> {
    let top = max_degree.div_ceil(2);
    let basis = build_basis(d, 2 * top)?;
    let mut blocks: Vec<(u32, BlockMatrix)> = Vec::new();
    for m in 0..=max_degree {
        let mb = m.div_ceil(2);
        for s in 0..=2 * mb {
            for l in 1..=basis.labels(s) {
                blocks.push((m, assemble_block(&basis, mb, s, l)?));
            }
        }
    }
    let mut unique: HashMap<_, usize> = HashMap::new();
    let mut distinct: Vec<&BlockMatrix> = Vec::new();
    for (_, b) in &blocks {
        unique.entry(b.content_key()).or_insert_with(|| {
            distinct.push(b);
            distinct.len() - 1
        });
    }
    let eigen: Vec<EigenResult> = distinct
        .par_iter()
        .map(|b| smallest_eigenvalue_charpoly(b, tol))
        .collect::<Result<_>>()?;
    let mut rows = Vec::with_capacity(blocks.len());
    let mut bounds: HashMap<u32, BoundEnclosures> = HashMap::new();
    for (m, b) in &blocks {
        let e = &eigen[unique[&b.content_key()]];
        let enc = bounds.entry(*m).or_insert_with(|| bound_enclosures(d, *m));
        let pass = e.certified
            && &e.lower >= enc.thm3.hi()
            && &e.lower >= enc.even.hi()
            && &e.lower >= enc.proof.hi();
        rows.push(GridRow {
            d,
            m: *m,
            s: b.s,
            l: b.l,
            size: b.size(),
            lambda_lower: e.lower.clone(),
            lambda_upper: e.upper.clone(),
            bound_thm3: enc.thm3.hi().clone(),
            bound_even: enc.even.hi().clone(),
            bound_proof: enc.proof.hi().clone(),
            pass,
        });
    }
    Ok(rows)
}

/// Random nonzero homogeneous polynomial with small integer coefficients.
pub fn random_homogeneous<R: Rng>(d: usize, degree: u32, rng: &mut R) -> Polynomial {
    let monos = monomials_of_degree(d, degree);
    loop {
        let mut terms = Vec::new();
        for m in &monos {
            if rng.gen_bool(0.6) {
                terms.push((m.clone(), int(rng.gen_range(-3..=3))));
            }
        }
        let p = Polynomial::from_terms(d, terms).expect("dimensions agree");
        if !p.is_zero() {
            return p;
        }
    }
}

/// `⟨x_j² f, f⟩ / ⟨f, f⟩` computed as the `x_d²` quotient of `f` with the
/// variables `j` and `d` exchanged. `j` counts from 1.
pub fn rayleigh_quotient_coordinate(j: usize, f: &Polynomial) -> Result<Rational> {
    let d = f.dimension();
    if j == 0 || j > d {
        return Err(Error::InvalidParameter(format!("coordinate x{j} out of range for d = {d}")));
    }
    let swapped = f.swap_variables(j - 1, d - 1)?;
    rayleigh_quotient(&Polynomial::var(d, d - 1).pow(2), &swapped)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductionRow {
    pub d: usize,
    pub m: u32,
    pub trial: usize,
    #[serde(serialize_with = "ser_rational")]
    pub quotient: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub bound: Rational,
    pub pass: bool,
}

/// Random odd-degree checks: for `f` homogeneous of degree `2m+1`,
/// `⟨x_d² f, f⟩ / ⟨f, f⟩ ≥ π² / (4 (2m + 2 + 2d)²)`.
pub fn even_odd_reduction_check<R: Rng>(
    d: usize,
    m: u32,
    trials: usize,
    rng: &mut R,
) -> Result<Vec<ReductionRow>> {
    let bound = pi_squared_times(&inverse_square_quarter(2 * m + 2 + 2 * d as u32));
    let xd2 = Polynomial::var(d, d - 1).pow(2);
    (0..trials)
        .map(|trial| {
            let f = random_homogeneous(d, 2 * m + 1, rng);
            let quotient = rayleigh_quotient(&xd2, &f)?;
            let pass = &quotient >= bound.hi();
            Ok(ReductionRow {
                d,
                m,
                trial,
                quotient,
                bound: bound.hi().clone(),
                pass,
            })
        })
        .collect()
}
