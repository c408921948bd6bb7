use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;
use serde::Serialize;

use super::NonhyperbolicQuadric;
use crate::error::{Error, Result};
use crate::numeric::BigFloat;
use crate::poly::{Polynomial, Rational};

/// Largest `|f - r|` over sampled points of `{q = 0}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryReport {
    pub requested: usize,
    pub found: usize,
    pub precision: u32,
    pub max_residual: f64,
    /// Set when fewer real points than requested were found.
    pub shortfall: Option<String>,
}

const PARAMETER_BITS: u32 = 16;

fn random_unit_rational<R: Rng>(rng: &mut R) -> Rational {
    let den = 1i64 << PARAMETER_BITS;
    Rational::new(BigInt::from(rng.gen_range(-den..=den)), BigInt::from(den))
}

/// Samples points on `{q = 0}`: every coordinate except the first one with
/// `a_j² > 0` is a random dyadic in `[-1, 1]`; the remaining one solves
/// the quadratic, alternating between its two roots. Parameter choices
/// without a real root are discarded.
pub fn boundary_residual<R: Rng>(
    f: &Polynomial,
    r: &Polynomial,
    q: &NonhyperbolicQuadric,
    samples: usize,
    precision: u32,
    rng: &mut R,
) -> Result<BoundaryReport> {
    let d = q.dimension();
    if f.dimension() != d || r.dimension() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: if f.dimension() != d { f.dimension() } else { r.dimension() },
        });
    }
    let j = q
        .squares()
        .iter()
        .position(|a| !a.is_zero())
        .expect("a valid quadric has a square term");
    let a = q.squares()[j].clone();
    let b = q.linear()[j].clone();
    let four = Rational::from_integer(4.into());
    let mut found = 0;
    let mut attempts = 0;
    let mut max = BigFloat::zero();
    let mut plus = true;
    while found < samples && attempts < samples * 64 {
        attempts += 1;
        let params: Vec<Rational> = (0..d)
            .map(|i| if i == j { Rational::zero() } else { random_unit_rational(rng) })
            .collect();
        let mut rest = q.constant().clone();
        for (i, x) in params.iter().enumerate() {
            if i != j {
                rest += &q.squares()[i] * x * x + &q.linear()[i] * x;
            }
        }
        let disc = &b * &b - &four * &a * &rest;
        if disc < Rational::zero() {
            continue;
        }
        let root = BigFloat::from_rational(&disc, precision + 8)
            .sqrt(precision + 8)
            .expect("nonnegative");
        let signed = if plus { root } else { root.neg() };
        plus = !plus;
        let num = BigFloat::from_rational(&-&b, precision + 8).add(&signed, precision + 8);
        let xj = num.div(&BigFloat::from_rational(&(&a * Rational::from_integer(2.into())), precision), precision);
        let point: Vec<BigFloat> = params
            .iter()
            .enumerate()
            .map(|(i, x)| if i == j { xj.clone() } else { BigFloat::from_rational(x, precision) })
            .collect();
        let fv = f.evaluate(&point, precision)?;
        let rv = r.evaluate(&point, precision)?;
        let diff = fv.sub(&rv, precision).abs();
        if diff > max {
            max = diff;
        }
        found += 1;
    }
    let shortfall = (found < samples).then(|| {
        format!("found {found} real boundary points of {samples} requested after {attempts} attempts")
    });
    Ok(BoundaryReport {
        requested: samples,
        found,
        precision,
        max_residual: max.to_f64(),
        shortfall,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fischer::fischer_decompose;
    use crate::poly::{parse_polynomial, rat};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(s: &str, d: usize) -> Polynomial {
        parse_polynomial(s, Some(d)).unwrap()
    }

    #[test]
    fn ellipse_residual_is_rounding_only() {
        let q = NonhyperbolicQuadric::from_polynomial(&p("x1^2 + x2^2 - 1", 2)).unwrap();
        let f = p("x1^2", 2);
        let r = fischer_decompose(&f, &q).unwrap().r;
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let rep = boundary_residual(&f, &r, &q, 100, 128, &mut rng).unwrap();
        assert_eq!(rep.found, 100);
        assert!(rep.max_residual <= 1e-30, "{}", rep.max_residual);
        assert!(rep.shortfall.is_none());
    }

    #[test]
    fn rational_paraboloid_points_are_exact() {
        let q = NonhyperbolicQuadric::from_polynomial(&p("x2^2 - x1", 2)).unwrap();
        let f = p("x1^3 + x2^4 - 2*x1*x2", 2);
        let r = fischer_decompose(&f, &q).unwrap().r;
        for t in -10..=10 {
            let t = rat(t, 3);
            let pt = [&t * &t, t.clone()];
            assert_eq!(f.eval_rational(&pt).unwrap(), r.eval_rational(&pt).unwrap());
        }
    }

    #[test]
    fn paraboloid_sampling_discards_some_parameters() {
        let q = NonhyperbolicQuadric::from_polynomial(&p("x2^2 - x1", 2)).unwrap();
        let f = p("x1^2*x2", 2);
        let r = fischer_decompose(&f, &q).unwrap().r;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let rep = boundary_residual(&f, &r, &q, 50, 128, &mut rng).unwrap();
        assert_eq!(rep.found, 50);
        assert!(rep.max_residual <= 1e-30);
    }

    #[test]
    fn reports_shortfall() {
        // x1^2 + 1 = 0 has no real points.
        let q = NonhyperbolicQuadric::from_polynomial(&p("x1^2 + 1", 2)).unwrap();
        let f = p("x1", 2);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let rep = boundary_residual(&f, &f, &q, 5, 64, &mut rng).unwrap();
        assert_eq!(rep.found, 0);
        assert!(rep.shortfall.is_some());
    }
}
