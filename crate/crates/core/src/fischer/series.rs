use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{fischer_decompose, FischerResult, NonhyperbolicQuadric};
use crate::error::{Error, Result};
use crate::numeric::to_f64;
use crate::poly::{Monomial, Polynomial, Rational};
use crate::sphere::ser_rational;

/// An entire function given by its homogeneous parts `f_0, …, f_N`, with a
/// declared order `ρ` used only for the admissibility diagnostic.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesData {
    parts: Vec<Polynomial>,
    rho: f64,
}

impl SeriesData {
    pub fn new(parts: Vec<Polynomial>, rho: f64) -> Result<Self> {
        let d = parts.first().map(Polynomial::dimension).ok_or_else(|| {
            Error::InvalidParameter("series needs at least the degree-0 part".into())
        })?;
        for (i, p) in parts.iter().enumerate() {
            if p.dimension() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: p.dimension(),
                });
            }
            if !p.is_zero() && (!p.is_homogeneous() || p.degree() != Some(i as u32)) {
                return Err(Error::InvalidParameter(format!(
                    "part {i} must be homogeneous of degree {i}, got {p}"
                )));
            }
        }
        if !rho.is_finite() || rho < 0.0 {
            return Err(Error::InvalidParameter(format!("declared order {rho} must be ≥ 0")));
        }
        Ok(SeriesData { parts, rho })
    }

    /// Splits a polynomial into its homogeneous parts.
    pub fn from_polynomial(p: &Polynomial, rho: f64) -> Result<Self> {
        let mut parts = p.homogeneous_parts();
        if parts.is_empty() {
            parts.push(Polynomial::zero(p.dimension()));
        }
        Self::new(parts, rho)
    }

    pub fn dimension(&self) -> usize {
        self.parts[0].dimension()
    }

    pub fn degree(&self) -> usize {
        self.parts.len() - 1
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn parts(&self) -> &[Polynomial] {
        &self.parts
    }

    /// The sum of the parts of degree at most `n`.
    pub fn truncate(&self, n: usize) -> Polynomial {
        self.parts
            .iter()
            .take(n + 1)
            .fold(Polynomial::zero(self.dimension()), |acc, p| &acc + p)
    }
}

/// Taylor parts of `cos(x_1)` in `d` variables up to degree `n`.
pub fn cos_series(d: usize, n: usize) -> SeriesData {
    let mut parts = Vec::with_capacity(n + 1);
    let mut fact = BigInt::one();
    for k in 0..=n {
        if k > 0 {
            fact *= k;
        }
        if k % 2 == 1 {
            parts.push(Polynomial::zero(d));
            continue;
        }
        let sign = if k % 4 == 0 { 1 } else { -1 };
        let c = Rational::new(BigInt::from(sign), fact.clone());
        parts.push(Polynomial::monomial(Monomial::var_pow(d, 0, k as u32), c));
    }
    // cos has order 1.
    SeriesData::new(parts, 1.0).expect("homogeneous by construction")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesDiagnostics {
    pub beta: u8,
    pub declared_rho: f64,
    /// `ρ < (2 - β)/2`.
    pub admissible: bool,
    pub warning: Option<String>,
    /// Largest absolute coefficient of each homogeneous part of `r`.
    #[serde(serialize_with = "ser_rationals")]
    pub r_norms: Vec<Rational>,
    #[serde(serialize_with = "ser_rationals")]
    pub s_norms: Vec<Rational>,
    /// `k ln k / -ln M_k` for the parts of `r`, where defined.
    pub order_proxy: Vec<Option<f64>>,
}

fn ser_rationals<S: serde::Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for r in v {
        seq.serialize_element(&r.to_string())?;
    }
    seq.end()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesSolution {
    pub truncation: usize,
    pub fischer: FischerResult,
    pub r: SeriesData,
    pub diagnostics: SeriesDiagnostics,
}

fn part_norms(p: &Polynomial, n: usize) -> Vec<Rational> {
    (0..=n)
        .map(|k| p.homogeneous_component(k as u32).max_abs_coefficient())
        .collect()
}

fn order_proxy(norms: &[Rational]) -> Vec<Option<f64>> {
    norms
        .iter()
        .enumerate()
        .map(|(k, m)| {
            if k < 2 || m.is_zero() {
                return None;
            }
            let log_m = to_f64(m).ln();
            if log_m >= 0.0 {
                return None;
            }
            let k = k as f64;
            Some(k * k.ln() / -log_m)
        })
        .collect()
}

/// Exact decomposition of the degree-`truncation` part sum of `data`.
pub fn dirichlet_solve_series(
    data: &SeriesData,
    q: &NonhyperbolicQuadric,
    truncation: usize,
) -> Result<SeriesSolution> {
    let n = truncation.min(data.degree());
    let f = data.truncate(n);
    let fischer = fischer_decompose(&f, q)?;
    let r_norms = part_norms(&fischer.r, n);
    let s_norms = part_norms(&fischer.s, n);
    let admissible = q.admits_order(data.rho());
    let warning = (!admissible).then(|| {
        format!(
            "declared order {} violates rho < (2 - beta)/2 = {} for beta = {}",
            data.rho(),
            (2.0 - f64::from(q.beta())) / 2.0,
            q.beta()
        )
    });
    let diagnostics = SeriesDiagnostics {
        beta: q.beta(),
        declared_rho: data.rho(),
        admissible,
        warning,
        order_proxy: order_proxy(&r_norms),
        r_norms,
        s_norms,
    };
    let r = SeriesData::from_polynomial(&fischer.r, data.rho())?;
    Ok(SeriesSolution {
        truncation: n,
        fischer,
        r,
        diagnostics,
    })
}

/// How the parts of `r_N` change across truncation degrees.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilizationReport {
    pub truncations: Vec<usize>,
    /// For each degree `k`, the largest coefficient change of part `k` of
    /// `r_N` between consecutive truncations (in `f64`).
    pub max_change: Vec<f64>,
    /// Degrees whose part of `r_N` is identical for every truncation.
    pub exactly_stable: Vec<usize>,
    #[serde(serialize_with = "ser_rational")]
    pub largest_change: Rational,
}

pub fn stabilization_profile(
    data: &SeriesData,
    q: &NonhyperbolicQuadric,
    truncations: &[usize],
) -> Result<StabilizationReport> {
    let solutions: Vec<Polynomial> = truncations
        .iter()
        .map(|&n| Ok(dirichlet_solve_series(data, q, n)?.fischer.r))
        .collect::<Result<_>>()?;
    let top = truncations.iter().copied().min().unwrap_or(0);
    let mut max_change = Vec::with_capacity(top + 1);
    let mut exactly_stable = Vec::new();
    let mut largest_change = Rational::zero();
    for k in 0..=top {
        let parts: Vec<Polynomial> = solutions
            .iter()
            .map(|r| r.homogeneous_component(k as u32))
            .collect();
        let change = parts
            .windows(2)
            .map(|w| (&w[1] - &w[0]).max_abs_coefficient())
            .max()
            .unwrap_or_else(Rational::zero);
        if change.is_zero() {
            exactly_stable.push(k);
        }
        max_change.push(to_f64(&change));
        if change > largest_change {
            largest_change = change;
        }
    }
    Ok(StabilizationReport {
        truncations: truncations.to_vec(),
        max_change,
        exactly_stable,
        largest_change,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;

    fn slab() -> NonhyperbolicQuadric {
        NonhyperbolicQuadric::from_polynomial(&parse_polynomial("x2^2 - 1", Some(2)).unwrap()).unwrap()
    }

    #[test]
    fn cosine_parts() {
        let c = cos_series(2, 6);
        assert_eq!(c.truncate(6), parse_polynomial("1 - 1/2*x1^2 + 1/24*x1^4 - 1/720*x1^6", Some(2)).unwrap());
        assert!(c.parts()[3].is_zero());
    }

    #[test]
    fn truncated_cosine_on_slab_is_exact() {
        let q = slab();
        let sol = dirichlet_solve_series(&cos_series(2, 8), &q, 8).unwrap();
        let f = cos_series(2, 8).truncate(8);
        assert!((&(&f - &(&q.to_polynomial() * &sol.fischer.s)) - &sol.fischer.r).is_zero());
        assert!(sol.fischer.r.laplacian().is_zero());
        assert_eq!(sol.diagnostics.beta, 0);
        assert!(!sol.diagnostics.admissible);
        assert!(sol.diagnostics.warning.is_some());
    }

    #[test]
    fn constant_series() {
        let data = SeriesData::from_polynomial(&Polynomial::one(2), 0.0).unwrap();
        for n in [0, 4, 9] {
            let sol = dirichlet_solve_series(&data, &slab(), n).unwrap();
            assert_eq!(sol.fischer.r, Polynomial::one(2));
            assert!(sol.diagnostics.admissible);
        }
    }

    #[test]
    fn admissibility_by_family() {
        let data = SeriesData::from_polynomial(&Polynomial::one(3), 0.75).unwrap();
        let fams = [("x1^2 + x2^2 + x3^2 - 1", 0u8, true), ("x2^2 + x3^2 - 1", 0, true), ("x3^2 - x1", 1, false)];
        for (text, beta, ok) in fams {
            let q = NonhyperbolicQuadric::from_polynomial(&parse_polynomial(text, Some(3)).unwrap()).unwrap();
            let sol = dirichlet_solve_series(&data, &q, 2).unwrap();
            assert_eq!((sol.diagnostics.beta, sol.diagnostics.admissible), (beta, ok), "{text}");
        }
    }

    #[test]
    fn stabilization_is_recorded() {
        let rep = stabilization_profile(&cos_series(2, 12), &slab(), &[8, 10, 12]).unwrap();
        assert_eq!(rep.max_change.len(), 9);
        assert!(rep.max_change.iter().all(|c| c.is_finite()));
    }

    #[test]
    fn rejects_bad_parts() {
        let bad = vec![Polynomial::one(2), parse_polynomial("x1^2", Some(2)).unwrap()];
        assert!(SeriesData::new(bad, 0.5).is_err());
        assert!(SeriesData::new(vec![Polynomial::one(2)], -1.0).is_err());
    }
}
