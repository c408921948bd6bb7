use proptest::prelude::*;

use qdirichlet::fischer::{dirichlet_solve, fischer_decompose, gauss_decompose, NonhyperbolicQuadric, QuadricKind};
use qdirichlet::harmonics::{assemble_block, build_basis, smallest_eigenvalue_charpoly, verify_bound_grid};
use qdirichlet::numeric::pow2_neg;
use qdirichlet::poly::{parse_polynomial, rat};
use qdirichlet::sphere::{inner_product, rayleigh_quotient};
use qdirichlet::{Polynomial, Rational};

fn p(text: &str, d: usize) -> Polynomial {
    parse_polynomial(text, Some(d)).unwrap()
}

fn quadric(text: &str, d: usize) -> NonhyperbolicQuadric {
    NonhyperbolicQuadric::from_polynomial(&p(text, d)).unwrap()
}

#[test]
fn canonical_text_round_trips() {
    for text in ["3/2*x1^2*x3 - x2 + 1", "x1^10 - 7/3*x1*x2*x3*x4", "0", "-1/2"] {
        let poly = p(text, 4);
        assert_eq!(p(&poly.to_string(), 4), poly);
    }
}

#[test]
fn ellipse_dirichlet_solution_matches_on_a_rational_point() {
    let q = quadric("x1^2 + x2^2 - 1", 2);
    let f = p("x1^2", 2);
    let r = dirichlet_solve(&f, &q).unwrap();
    assert_eq!(r, p("1/2*x1^2 - 1/2*x2^2 + 1/2", 2));
    let pt = [rat(3, 5), rat(4, 5)];
    assert_eq!(r.eval_rational(&pt).unwrap(), rat(9, 25));
}

#[test]
fn families_from_text() {
    assert_eq!(quadric("x1^2 + 2*x2^2 + x3^2 - 3", 3).kind(), QuadricKind::Ellipsoid);
    assert_eq!(quadric("x2^2 + x3^2 - x1", 3).kind(), QuadricKind::Paraboloid);
    assert_eq!(quadric("x2^2 + x3^2 - 1", 3).kind(), QuadricKind::Cylinder);
    assert_eq!(quadric("x3^2 - 4", 3).kind(), QuadricKind::Slab);
}

#[test]
fn sphere_inner_products_feed_the_block_entries() {
    // The smallest eigenvalue of the planar degree-2 block is the minimum
    // of <x2^2 f, f>/<f, f> over span{Y_0, Y_2} attached to s = 0.
    let basis = build_basis(2, 2).unwrap();
    let block = assemble_block(&basis, 1, 0, 1).unwrap();
    let e = smallest_eigenvalue_charpoly(&block, &pow2_neg(50)).unwrap();
    let x22 = p("x2^2", 2);
    for f in ["1", "x1^2", "x2^2", "x1^2 - 3*x2^2 + 1"] {
        let q = rayleigh_quotient(&x22, &p(f, 2)).unwrap();
        assert!(q >= e.lower, "{f}");
    }
    // The minimiser is known in closed form: 1/2 - √2/4.
    let target = 0.5 - 2f64.sqrt() / 4.0;
    assert!((qdirichlet::numeric::to_f64(&e.lower) - target).abs() < 1e-12);
}

#[test]
fn grid_and_basis_agree_on_norms() {
    let basis = build_basis(3, 4).unwrap();
    for entry in basis.entries() {
        let y = entry.polynomial();
        assert_eq!(&inner_product(&y, &y).unwrap(), entry.norm_sq());
    }
    assert!(verify_bound_grid(3, 4, &pow2_neg(40)).unwrap().iter().all(|r| r.pass));
}

#[test]
fn gauss_parts_of_a_quartic() {
    let f = p("x1^4", 3);
    let g = gauss_decompose(&f).unwrap();
    assert_eq!(g.parts.len(), 3);
    assert_eq!(g.parts[0], Polynomial::constant(3, rat(1, 5)));
    assert_eq!(g.reconstruct().unwrap(), f);
}

fn small_poly() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((0u32..4, 0u32..4, 0u32..3, -6i64..=6), 0..8).prop_map(|terms| {
        let text = terms
            .iter()
            .map(|(a, b, c, k)| format!("{k}*x1^{a}*x2^{b}*x3^{c}"))
            .collect::<Vec<_>>()
            .join(" + ");
        if text.is_empty() {
            Polynomial::zero(3)
        } else {
            parse_polynomial(&text, Some(3)).unwrap()
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn decomposition_is_exact_on_every_family(f in small_poly(), which in 0usize..4) {
        let q = ["x1^2 + 2*x2^2 + x3^2 - 1", "x2^2 + x3^2 - x1", "x1^2 + x3^2 - 2", "x2^2 - 1/4"][which];
        let q = quadric(q, 3);
        let dec = fischer_decompose(&f, &q).unwrap();
        prop_assert!((&(&f - &(&q.to_polynomial() * &dec.s)) - &dec.r).is_zero());
        prop_assert!(dec.r.laplacian().is_zero());
        if let Some(deg) = f.degree() {
            prop_assert!(dec.r.degree().unwrap_or(0) <= deg);
            prop_assert!(dec.s.is_zero() || dec.s.degree().unwrap() + 2 <= deg);
        }
    }

    #[test]
    fn harmonic_data_is_its_own_solution(a in -5i64..=5, b in -5i64..=5) {
        let h = &p("x1^2 - x2^2", 3).scale(&Rational::from_integer(a.into())) + &p("x1*x2*x3", 3).scale(&Rational::from_integer(b.into()));
        let dec = fischer_decompose(&h, &quadric("x1^2 + x2^2 + x3^2 - 1", 3)).unwrap();
        prop_assert!(dec.s.is_zero());
        prop_assert_eq!(dec.r, h);
    }
}
