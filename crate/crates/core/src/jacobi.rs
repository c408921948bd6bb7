//! Symmetric Jacobi polynomials `P_n^{(α,α)}` with rational `α`.
//!
//! The polynomials satisfy `x P_n = a_n P_{n+1} + g_n P_{n-1}` with
//! `P_0 = 1` and `P_1 = (α+1) x`, and
//! `x² P_n = ã_n P_{n+2} + b̃_n P_n + g̃_n P_{n-2}`.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{pi_enclosure, round_down, sin_enclosure, sqrt_enclosure, to_f64, Interval};
use crate::poly::{int, rat, Rational, UniPoly};
use crate::roots::{smallest_positive_root, ZeroBracket};
use crate::sphere::ser_rational;

/// Bits used for every π-dependent comparison in this module.
pub const CERT_BITS: u32 = 128;

fn check_alpha(alpha: &Rational) -> Result<()> {
    if *alpha <= int(-1) {
        return Err(Error::InvalidParameter(format!("alpha = {alpha} must exceed -1")));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecurrenceCoeffs {
    pub n: usize,
    pub alpha: Rational,
    pub a: Rational,
    pub g: Rational,
}

impl RecurrenceCoeffs {
    /// `a_0 = 1/(α+1)` and `g_0 = 0`; the general formulas are used for `n ≥ 1`.
    pub fn new(n: usize, alpha: &Rational) -> Result<Self> {
        check_alpha(alpha)?;
        let one = Rational::one();
        let (a, g) = if n == 0 {
            ((alpha + &one).recip(), Rational::zero())
        } else {
            let nn = int(n as i64);
            let two_a = alpha * int(2);
            let a = (&nn + &one) * (&nn + &two_a + &one)
                / ((&nn * int(2) + &two_a + &one) * (&nn + alpha + &one));
            let g = (&nn + alpha) / (&nn * int(2) + &two_a + &one);
            (a, g)
        };
        Ok(RecurrenceCoeffs {
            n,
            alpha: alpha.clone(),
            a,
            g,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquaredRecurrenceCoeffs {
    pub n: usize,
    pub alpha: Rational,
    pub a_tilde: Rational,
    pub b_tilde: Rational,
    pub g_tilde: Rational,
}

/// Coefficients of `x² P_n` in terms of `P_{n+2}, P_n, P_{n-2}`. Terms that
/// would involve `P_{-1}` or `P_{-2}` are dropped for `n < 2`.
pub fn squared_recurrence(n: usize, alpha: &Rational) -> Result<SquaredRecurrenceCoeffs> {
    let c = RecurrenceCoeffs::new(n, alpha)?;
    let up = RecurrenceCoeffs::new(n + 1, alpha)?;
    let a_tilde = &c.a * &up.a;
    let (b_tilde, g_tilde) = if n == 0 {
        (&c.a * &up.g, Rational::zero())
    } else {
        let down = RecurrenceCoeffs::new(n - 1, alpha)?;
        let b = &c.a * &up.g + &c.g * &down.a;
        let g = if n == 1 { Rational::zero() } else { &c.g * &down.g };
        (b, g)
    };
    Ok(SquaredRecurrenceCoeffs {
        n,
        alpha: alpha.clone(),
        a_tilde,
        b_tilde,
        g_tilde,
    })
}

/// `P_0, …, P_n` for the given `α`.
pub fn jacobi_sequence(n: usize, alpha: &Rational) -> Result<Vec<UniPoly>> {
    check_alpha(alpha)?;
    let mut seq = vec![UniPoly::constant(Rational::one())];
    if n == 0 {
        return Ok(seq);
    }
    seq.push(UniPoly::monomial(1, alpha + Rational::one()));
    for k in 1..n {
        let c = RecurrenceCoeffs::new(k, alpha)?;
        let next = (&seq[k].mul_x() - &seq[k - 1].scale(&c.g)).scale(&c.a.recip());
        seq.push(next);
    }
    Ok(seq)
}

pub fn jacobi_poly(n: usize, alpha: &Rational) -> Result<UniPoly> {
    Ok(jacobi_sequence(n, alpha)?.pop().expect("nonempty"))
}

/// Splits an even polynomial `p(x)` as `r(x²)`.
pub fn even_part_in_square(p: &UniPoly) -> Result<UniPoly> {
    if !p.is_even() {
        return Err(Error::Verification(format!("{p} has odd-degree terms")));
    }
    Ok(UniPoly::new(p.coeffs().iter().step_by(2).cloned().collect()))
}

/// `r_n(y) = P_{2n}(√y)`.
pub fn even_substitution(n: usize, alpha: &Rational) -> Result<UniPoly> {
    even_part_in_square(&jacobi_poly(2 * n, alpha)?)
}

/// `t_n(y)` with `P_{2n+1}(x) = x · t_n(x²)`.
pub fn odd_substitution(n: usize, alpha: &Rational) -> Result<UniPoly> {
    let p = jacobi_poly(2 * n + 1, alpha)?;
    if !p.is_odd() {
        return Err(Error::Verification(format!("{p} has even-degree terms")));
    }
    Ok(UniPoly::new(p.coeffs().iter().skip(1).step_by(2).cloned().collect()))
}

/// Certified bracket of width at most `width` around the first positive
/// zero of `P_{2n}^{(α,α)}`.
pub fn first_positive_zero(n: usize, alpha: &Rational, width: &Rational) -> Result<ZeroBracket> {
    if n == 0 {
        return Err(Error::InvalidParameter("P_0 has no zeros; n must be ≥ 1".into()));
    }
    if !width.is_positive() {
        return Err(Error::InvalidParameter(format!("bracket width must be positive, got {width}")));
    }
    smallest_positive_root(&jacobi_poly(2 * n, alpha)?, width)
}

/// First positive zero of the odd polynomial `P_{2n+1}^{(α,α)}` (its zero
/// at the origin excluded).
pub fn first_positive_zero_odd(n: usize, alpha: &Rational, width: &Rational) -> Result<ZeroBracket> {
    if n == 0 {
        return Err(Error::InvalidParameter("P_1 has no positive zero; n must be ≥ 1".into()));
    }
    let t = odd_substitution(n, alpha)?;
    smallest_positive_root(&t.compose_square(), width)
}

/// Certified rational lower bound for `π / (4 √((α + 1/2 + n)(n + 2)))`,
/// without range checks.
pub fn zero_bound_formula(n: usize, alpha: &Rational) -> Result<Rational> {
    check_alpha(alpha)?;
    let nn = int(n as i64);
    let radicand = (alpha + rat(1, 2) + &nn) * (&nn + int(2));
    if !radicand.is_positive() {
        return Err(Error::InvalidParameter(format!(
            "bound undefined for n = {n}, alpha = {alpha}"
        )));
    }
    let pi = pi_enclosure(CERT_BITS);
    let root = sqrt_enclosure(&radicand, CERT_BITS);
    let exact_lower = pi.lo() / (root.hi() * int(4));
    Ok(round_down(&exact_lower, CERT_BITS))
}

/// The zero bound, offered only on its proven range (`n ≥ 3`, `α ≥ -1/2`).
pub fn zero_lower_bound(n: usize, alpha: &Rational) -> Result<Rational> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!(
            "the zero bound is stated for n ≥ 3, got n = {n}"
        )));
    }
    if *alpha < rat(-1, 2) {
        return Err(Error::InvalidParameter(format!(
            "the zero bound is stated for alpha ≥ -1/2, got {alpha}"
        )));
    }
    zero_bound_formula(n, alpha)
}

/// `T_0, …, T_n` from `T_{k+1} = 2x T_k - T_{k-1}`.
pub fn chebyshev_t(n: usize) -> UniPoly {
    let mut prev = UniPoly::constant(Rational::one());
    if n == 0 {
        return prev;
    }
    let mut cur = UniPoly::x();
    for _ in 1..n {
        let next = &cur.mul_x().scale(&int(2)) - &prev;
        prev = cur;
        cur = next;
    }
    cur
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChebyshevReport {
    pub n: usize,
    /// `c` with `P_{2n}^{(-1/2,-1/2)} = c · T_{2n}`.
    #[serde(serialize_with = "ser_rational")]
    pub scalar: Rational,
    pub proportional: bool,
    pub zeros_agree: bool,
}

pub fn chebyshev_cross_check(n: usize, width: &Rational) -> Result<ChebyshevReport> {
    let alpha = rat(-1, 2);
    let p = jacobi_poly(2 * n, &alpha)?;
    let t = chebyshev_t(2 * n);
    let scalar = p.leading() / t.leading();
    let proportional = (&p - &t.scale(&scalar)).is_zero();
    let zp = first_positive_zero(n, &alpha, width)?;
    let zt = smallest_positive_root(&t, width)?;
    Ok(ChebyshevReport {
        n,
        scalar,
        proportional,
        zeros_agree: zp.overlaps(&zt),
    })
}

/// Certified check of `sin(π/(4n)) ≥ π/(4n+2)`.
pub fn sin_inequality_check(n: usize) -> Result<bool> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be ≥ 1".into()));
    }
    let pi = pi_enclosure(CERT_BITS + 8);
    let arg = pi.scale(&rat(1, 4 * n as i64));
    let lhs = sin_enclosure(&arg, CERT_BITS);
    let rhs = pi.scale(&rat(1, 4 * n as i64 + 2));
    Ok(lhs.certainly_ge(&rhs))
}

/// Samples `λ ↦ √(λ + (8n²+1)/(8n+2)) · x_{2n,1}(λ - 1/2)` on the given grid.
/// Returns the sampled values and whether they are nondecreasing up to
/// `tolerance`.
pub fn monotonicity_check(n: usize, lambdas: &[Rational], tolerance: f64) -> Result<(Vec<f64>, bool)> {
    let shift = rat(8 * (n * n) as i64 + 1, 8 * n as i64 + 2);
    let width = crate::numeric::pow2_neg(60);
    let mut values = Vec::with_capacity(lambdas.len());
    for lambda in lambdas {
        let z = first_positive_zero(n, &(lambda - rat(1, 2)), &width)?;
        let scale = Interval::point(lambda + &shift).sqrt(80);
        values.push(to_f64(&z.midpoint()) * to_f64(&scale.lo().clone()));
    }
    let ok = values.windows(2).all(|w| w[1] >= w[0] - tolerance);
    Ok((values, ok))
}

/// One line of the zero/bound table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JacobiRow {
    pub n: usize,
    #[serde(serialize_with = "ser_rational")]
    pub alpha: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub zero_lower: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub zero_upper: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub elbert_bound: Rational,
    /// `theorem` where the bound is claimed, `empirical` for `n < 3` or
    /// `α < -1/2`.
    pub route: &'static str,
    pub pass: bool,
}

impl JacobiRow {
    pub const CSV_HEADER: &'static str = "n,alpha,zero_lower,zero_upper,elbert_bound,route,pass";

    pub fn csv(&self) -> String {
        format!(
            "{},{},{:.20e},{:.20e},{:.20e},{},{}",
            self.n,
            self.alpha,
            to_f64(&self.zero_lower),
            to_f64(&self.zero_upper),
            to_f64(&self.elbert_bound),
            self.route,
            self.pass
        )
    }
}

pub fn jacobi_row(n: usize, alpha: &Rational, width: &Rational) -> Result<JacobiRow> {
    let zero = first_positive_zero(n, alpha, width)?;
    let (bound, route) = match zero_lower_bound(n, alpha) {
        Ok(b) => (b, "theorem"),
        Err(_) => (zero_bound_formula(n, alpha)?, "empirical"),
    };
    let pass = zero.certified && zero.lower >= bound;
    Ok(JacobiRow {
        n,
        alpha: alpha.clone(),
        zero_lower: zero.lower,
        zero_upper: zero.upper,
        elbert_bound: bound,
        route,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{cos_enclosure, pow2_neg, BigFloat};
    use proptest::prelude::*;

    fn up(c: &[Rational]) -> UniPoly {
        UniPoly::new(c.to_vec())
    }

    fn alpha_grid() -> Vec<Rational> {
        vec![rat(-1, 2), int(0), rat(1, 2), int(1), rat(3, 2), rat(5, 2)]
    }

    #[test]
    fn low_degrees() {
        assert_eq!(jacobi_poly(0, &rat(3, 7)).unwrap(), UniPoly::constant(int(1)));
        assert_eq!(jacobi_poly(1, &rat(1, 2)).unwrap(), UniPoly::monomial(1, rat(3, 2)));
        assert!(jacobi_poly(2, &int(-1)).is_err());
    }

    /// Legendre polynomials from Rodrigues' formula `P_n = (1/(2^n n!)) d^n/dx^n (x²-1)^n`.
    fn rodrigues(n: usize) -> UniPoly {
        let base = up(&[int(-1), int(0), int(1)]);
        let mut p = UniPoly::constant(int(1));
        for _ in 0..n {
            p = &p * &base;
        }
        let mut scale = int(1);
        for k in 1..=n {
            p = p.derivative();
            scale *= int(2 * k as i64);
        }
        p.scale(&scale.recip())
    }

    #[test]
    fn legendre_agrees_with_rodrigues() {
        assert_eq!(jacobi_poly(2, &int(0)).unwrap(), up(&[rat(-1, 2), int(0), rat(3, 2)]));
        for n in 0..9 {
            assert_eq!(jacobi_poly(n, &int(0)).unwrap(), rodrigues(n), "n = {n}");
        }
    }

    #[test]
    fn squared_coefficients_at_zero_alpha() {
        let c = squared_recurrence(2, &int(0)).unwrap();
        assert_eq!(c.a_tilde, rat(12, 35));
        assert_eq!(c.g_tilde, rat(2, 15));
        // x² P_2 in the Legendre basis: 12/35 P_4 + 11/21 P_2 + 2/15 P_0.
        assert_eq!(c.b_tilde, rat(11, 21));
    }

    #[test]
    fn squared_recurrence_identity() {
        for alpha in alpha_grid() {
            let seq = jacobi_sequence(14, &alpha).unwrap();
            for n in 0..=12 {
                let c = squared_recurrence(n, &alpha).unwrap();
                let mut rhs = &seq[n + 2].scale(&c.a_tilde) + &seq[n].scale(&c.b_tilde);
                if n >= 2 {
                    rhs = &rhs + &seq[n - 2].scale(&c.g_tilde);
                }
                let lhs = seq[n].mul_x().mul_x();
                assert!((&lhs - &rhs).is_zero(), "n = {n}, alpha = {alpha}");
                if n >= 2 {
                    assert!(c.a_tilde.is_positive() && c.b_tilde.is_positive() && c.g_tilde.is_positive());
                }
            }
        }
    }

    #[test]
    fn even_substitution_identity() {
        assert_eq!(even_substitution(1, &int(0)).unwrap(), up(&[rat(-1, 2), rat(3, 2)]));
        assert_eq!(even_substitution(0, &rat(5, 2)).unwrap(), UniPoly::constant(int(1)));
        for alpha in alpha_grid() {
            let r: Vec<UniPoly> = (0..=7).map(|u| even_substitution(u, &alpha).unwrap()).collect();
            for u in 0..=6 {
                assert_eq!(r[u].compose_square(), jacobi_poly(2 * u, &alpha).unwrap());
                let c = squared_recurrence(2 * u, &alpha).unwrap();
                let mut rhs = &r[u + 1].scale(&c.a_tilde) + &r[u].scale(&c.b_tilde);
                if u >= 1 {
                    rhs = &rhs + &r[u - 1].scale(&c.g_tilde);
                }
                assert!((&r[u].mul_x() - &rhs).is_zero(), "u = {u}, alpha = {alpha}");
            }
        }
    }

    #[test]
    fn parity() {
        for alpha in alpha_grid() {
            for (n, p) in jacobi_sequence(13, &alpha).unwrap().iter().enumerate() {
                if n % 2 == 0 {
                    assert!(p.is_even());
                } else {
                    assert!(p.is_odd());
                }
            }
        }
    }

    #[test]
    fn chebyshev_zero_closed_form() {
        let w = pow2_neg(40);
        let z = first_positive_zero(3, &rat(-1, 2), &w).unwrap();
        assert!(z.certified);
        assert!(z.width() <= w);
        let pi = pi_enclosure(128);
        let c = cos_enclosure(&pi.scale(&rat(5, 12)), 128);
        assert!(z.lower <= *c.hi() && *c.lo() <= z.upper);
        assert!((to_f64(&z.midpoint()) - 0.258_819_045_102_520_8).abs() < 1e-11);
    }

    #[test]
    fn legendre_zero() {
        let z = first_positive_zero(1, &int(0), &pow2_neg(50)).unwrap();
        // Oracle: 1/√3.
        assert!(&z.lower * &z.lower * int(3) < int(1));
        assert!(&z.upper * &z.upper * int(3) > int(1));
        assert!(first_positive_zero(1, &int(0), &int(0)).is_err());
    }

    #[test]
    fn zero_bound_values() {
        // Independent oracle: BigFloat at 256 bits from Machin's π.
        let prec = 256;
        let pi = BigFloat::from_rational(&crate::numeric::pi_enclosure(300).lo().clone(), prec);
        for (alpha, radicand) in [(rat(-1, 2), 15i64), (rat(1, 2), 20)] {
            let root = BigFloat::from_i64(radicand).sqrt(prec).unwrap();
            let oracle = pi.div(&root.mul(&BigFloat::from_i64(4), prec), prec).to_rational();
            let b = zero_lower_bound(3, &alpha).unwrap();
            assert!(b <= &oracle + pow2_neg(250));
            assert!(oracle - &b < rat(1, 100_000_000_000) * rat(1, 1_000_000_000));
        }
        assert!((to_f64(&zero_lower_bound(3, &rat(-1, 2)).unwrap()) - 0.202_789_3).abs() < 1e-6);
        assert!(zero_lower_bound(2, &int(0)).is_err());
        assert!(zero_lower_bound(4, &rat(-3, 4)).is_err());
    }

    #[test]
    fn zero_exceeds_bound() {
        let w = pow2_neg(40);
        for alpha in alpha_grid() {
            for n in 3..=8 {
                let row = jacobi_row(n, &alpha, &w).unwrap();
                assert!(row.pass, "n = {n}, alpha = {alpha}");
                assert_eq!(row.route, "theorem");
            }
        }
        assert_eq!(jacobi_row(2, &int(0), &w).unwrap().route, "empirical");
    }

    #[test]
    fn chebyshev_proportionality() {
        for n in 1..=6 {
            let r = chebyshev_cross_check(n, &pow2_neg(40)).unwrap();
            assert!(r.proportional && r.zeros_agree && !r.scalar.is_zero(), "n = {n}");
        }
        assert_eq!(chebyshev_t(2), up(&[int(-1), int(0), int(2)]));
    }

    #[test]
    fn sine_inequality() {
        assert!(sin_inequality_check(1).unwrap());
        assert!(sin_inequality_check(10).unwrap());
        for n in (1..=10_000).step_by(499) {
            assert!(sin_inequality_check(n).unwrap(), "n = {n}");
        }
        assert!(sin_inequality_check(10_000).unwrap());
    }

    #[test]
    fn scaled_zero_is_monotone() {
        let grid = [rat(1, 10), rat(1, 2), int(1), int(2), int(4)];
        for n in [1, 3, 5] {
            let (_, ok) = monotonicity_check(n, &grid, 1e-9).unwrap();
            assert!(ok, "n = {n}");
        }
    }

    #[test]
    fn odd_substitution_identity() {
        let t = odd_substitution(2, &int(1)).unwrap();
        assert_eq!(t.compose_square().mul_x(), jacobi_poly(5, &int(1)).unwrap());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn three_term_recurrence_holds(n in 1usize..10, num in -3i64..12, den in 1i64..5) {
            let alpha = rat(num, den);
            prop_assume!(alpha > int(-1));
            let seq = jacobi_sequence(n + 1, &alpha).unwrap();
            let c = RecurrenceCoeffs::new(n, &alpha).unwrap();
            let rhs = &seq[n + 1].scale(&c.a) + &seq[n - 1].scale(&c.g);
            prop_assert!((&seq[n].mul_x() - &rhs).is_zero());
        }
    }
}
