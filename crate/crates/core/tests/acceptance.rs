//! Acceptance suite. Runs with `harness = false` so that each criterion
//! prints exactly one PASS/FAIL line, whatever the capture settings.

use std::process::ExitCode;
use std::time::Instant;

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use qdirichlet::fischer::{
    boundary_residual, cos_series, dirichlet_solve_series, fischer_decompose, gauss_decompose,
    stabilization_profile, NonhyperbolicQuadric, SeriesData,
};
use qdirichlet::harmonics::{
    assemble_block, build_basis, dim_harmonic, interlacing_lower_bound, odd_block_jacobizero,
    smallest_eigenvalue_charpoly, smallest_eigenvalue_jacobizero, verify_bound_grid, GridRow,
};
use qdirichlet::jacobi::{
    first_positive_zero, jacobi_sequence, squared_recurrence, RecurrenceCoeffs, CERT_BITS,
};
use qdirichlet::numeric::{cos_enclosure, pi_enclosure, pow2_neg, sqrt_enclosure, Interval};
use qdirichlet::poly::{int, monomials_of_degree, parse_polynomial, rat};
use qdirichlet::sphere::MomentCache;
use qdirichlet::{Polynomial, Rational, UniPoly};

/// Bracket width for every certified eigenvalue and zero.
const WIDTH_BITS: u32 = 40;
/// Largest admissible `|f - r|` on sampled boundary points.
const BOUNDARY_TOL: f64 = 1e-25;
const BOUNDARY_BITS: u32 = 128;
const BOUNDARY_POINTS: usize = 100;
const RANDOM_CASES: usize = 200;
const SEED: u64 = 0x5eed_2024;

type Check<'a> = (&'static str, Box<dyn Fn() -> Outcome + Sync + 'a>);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn width() -> Rational {
    pow2_neg(WIDTH_BITS)
}

fn grids() -> Vec<(usize, Vec<GridRow>)> {
    (2..=4usize)
        .into_par_iter()
        .map(|d| (d, verify_bound_grid(d, 8, &width()).expect("grid")))
        .collect()
}

fn criterion_1(grids: &[(usize, Vec<GridRow>)]) -> Outcome {
    let mut rows = 0;
    let mut failing = Vec::new();
    let mut tightest = f64::INFINITY;
    for (d, g) in grids {
        for r in g {
            rows += 1;
            tightest = tightest.min(r.margin());
            if r.lambda_lower < r.bound_thm3 || &r.lambda_upper - &r.lambda_lower > width() {
                failing.push(format!("d={d} m={} s={} l={}", r.m, r.s, r.l));
            }
        }
    }
    outcome(
        failing.is_empty() && rows > 0,
        format!("{rows} rows, {} failing, smallest lambda/bound {tightest:.4}", failing.len()),
    )
}

fn criterion_2(grids: &[(usize, Vec<GridRow>)]) -> Outcome {
    let mut rows = 0;
    let mut failing = 0;
    for (_, g) in grids {
        for r in g.iter().filter(|r| r.m % 2 == 0) {
            rows += 1;
            if r.lambda_lower < r.bound_even || r.lambda_lower < r.bound_proof {
                failing += 1;
            }
        }
    }
    outcome(failing == 0 && rows > 0, format!("{rows} even-degree rows, {failing} failing"))
}

#[derive(Default)]
struct RouteTally {
    even_checked: usize,
    even_bad: Vec<String>,
    odd_checked: usize,
    odd_interlacing: usize,
    odd_zero_overlap: usize,
}

fn criterion_3() -> Outcome {
    let tol = width();
    let tallies: Vec<RouteTally> = (2..=4usize)
        .into_par_iter()
        .map(|d| {
            let basis = build_basis(d, 16).expect("basis");
            let mut t = RouteTally::default();
            for m in 0..=8u32 {
                for s in 0..=2 * m {
                    for l in 1..=basis.labels(s) {
                        let block = assemble_block(&basis, m, s, l).expect("block");
                        let cp = smallest_eigenvalue_charpoly(&block, &tol).expect("charpoly route");
                        if s % 2 == 0 {
                            let jz = smallest_eigenvalue_jacobizero(d, m, s, &tol).expect("jacobi route");
                            t.even_checked += 1;
                            let ok = cp.certified
                                && jz.certified
                                && cp.overlaps(&jz)
                                && cp.width() <= tol
                                && jz.width() <= tol;
                            if !ok {
                                t.even_bad.push(format!("d={d} m={m} s={s} l={l}"));
                            }
                        } else {
                            // Recorded only: interlacing and the odd-degree zero.
                            t.odd_checked += 1;
                            let il = interlacing_lower_bound(d, m, s, &tol).expect("interlacing");
                            t.odd_interlacing += usize::from(cp.lower >= il.lower);
                            let oz = odd_block_jacobizero(d, m, s, &tol).expect("odd zero");
                            t.odd_zero_overlap += usize::from(cp.overlaps(&oz));
                        }
                    }
                }
            }
            t
        })
        .collect();
    let sum = |f: fn(&RouteTally) -> usize| tallies.iter().map(f).sum::<usize>();
    let bad: Vec<&String> = tallies.iter().flat_map(|t| &t.even_bad).collect();
    outcome(
        bad.is_empty(),
        format!(
            "{} even-s blocks (block index m <= 8), {} disagreeing {bad:?}; odd s recorded: {} blocks, \
             interlacing holds on {}, overlap with squared P_(2N+1) zero {}",
            sum(|t| t.even_checked),
            bad.len(),
            sum(|t| t.odd_checked),
            sum(|t| t.odd_interlacing),
            sum(|t| t.odd_zero_overlap),
        ),
    )
}

/// Independent lower/upper enclosure of `π / (4 √((α + 1/2 + n)(n + 2)))`.
fn zero_bound_enclosure(n: usize, alpha: &Rational) -> Interval {
    let nn = int(n as i64);
    let radicand = (alpha + rat(1, 2) + &nn) * (&nn + int(2));
    let root = sqrt_enclosure(&radicand, 200).scale(&int(4));
    pi_enclosure(200).div(&root)
}

fn criterion_4() -> Outcome {
    let alphas = [rat(-1, 2), int(0), rat(1, 2), int(1), rat(3, 2)];
    let mut checked = 0;
    let mut bad = Vec::new();
    for alpha in &alphas {
        for n in 3..=12 {
            let z = first_positive_zero(n, alpha, &width()).expect("zero");
            let bound = zero_bound_enclosure(n, alpha);
            checked += 1;
            if !(z.certified && &z.lower >= bound.hi()) {
                bad.push(format!("n={n} alpha={alpha}"));
            }
        }
    }
    // P_6^{(-1/2,-1/2)} is proportional to T_6, whose first positive zero is cos(5π/12).
    let z = first_positive_zero(3, &rat(-1, 2), &width()).expect("zero");
    let angle = pi_enclosure(CERT_BITS).scale(&rat(5, 12));
    let c = cos_enclosure(&angle, CERT_BITS);
    let distance = (&z.upper - c.lo()).abs().max((c.hi() - &z.lower).abs());
    let chebyshev = distance <= width();
    outcome(
        bad.is_empty() && chebyshev,
        format!(
            "{checked} (n, alpha) pairs, {} failing; P_6 zero to cos(5pi/12) distance <= 2^-{WIDTH_BITS}: {chebyshev}",
            bad.len()
        ),
    )
}

fn random_polynomial(rng: &mut ChaCha8Rng, d: usize, degree: u32) -> Polynomial {
    let mut terms = Vec::new();
    for k in 0..=degree {
        for m in monomials_of_degree(d, k) {
            if rng.gen_bool(0.25) || (k == degree && terms.is_empty()) {
                let num = rng.gen_range(-9i64..=9);
                let den = rng.gen_range(1i64..=4);
                terms.push((m, rat(num, den)));
            }
        }
    }
    Polynomial::from_terms(d, terms).expect("dimensions agree")
}

fn positive(rng: &mut ChaCha8Rng) -> Rational {
    rat(rng.gen_range(1i64..=4), rng.gen_range(1i64..=3))
}

/// One quadric per family, cycling ellipsoid, paraboloid, cylinder, slab.
fn random_quadric(rng: &mut ChaCha8Rng, d: usize, family: usize) -> NonhyperbolicQuadric {
    let mut squares = vec![Rational::zero(); d];
    let mut linear = vec![Rational::zero(); d];
    let constant;
    match family {
        0 => {
            for a in squares.iter_mut() {
                *a = positive(rng);
            }
            constant = -positive(rng);
        }
        1 => {
            for a in squares.iter_mut().skip(1) {
                *a = positive(rng);
            }
            linear[0] = -positive(rng);
            constant = Rational::zero();
        }
        2 => {
            let k = rng.gen_range(1..d);
            for a in squares.iter_mut().skip(d - k) {
                *a = positive(rng);
            }
            constant = -positive(rng);
        }
        _ => {
            squares[d - 1] = positive(rng);
            constant = -positive(rng);
        }
    }
    NonhyperbolicQuadric::new(squares, linear, constant).expect("nonhyperbolic by construction")
}

fn criterion_5() -> Outcome {
    let cases: Vec<(u64, usize, u32, usize)> = {
        let mut rng = ChaCha8Rng::seed_from_u64(SEED);
        (0..RANDOM_CASES)
            .map(|i| (rng.gen(), rng.gen_range(2..=4), rng.gen_range(0..=10), i % 4))
            .collect()
    };
    let results: Vec<Result<f64, String>> = cases
        .par_iter()
        .map(|&(seed, d, degree, family)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = random_polynomial(&mut rng, d, degree);
            let q = random_quadric(&mut rng, d, family);
            let dec = fischer_decompose(&f, &q).map_err(|e| format!("{f} / {q}: {e}"))?;
            let residual = &(&f - &(&q.to_polynomial() * &dec.s)) - &dec.r;
            if !residual.is_zero() || !dec.r.laplacian().is_zero() {
                return Err(format!("inexact decomposition of {f} by {q}"));
            }
            let rep = boundary_residual(&f, &dec.r, &q, BOUNDARY_POINTS, BOUNDARY_BITS, &mut rng)
                .map_err(|e| e.to_string())?;
            if rep.found < BOUNDARY_POINTS {
                return Err(format!("only {} boundary points for {q}", rep.found));
            }
            if rep.max_residual > BOUNDARY_TOL {
                return Err(format!("boundary residual {:e} for {f} / {q}", rep.max_residual));
            }
            Ok(rep.max_residual)
        })
        .collect();
    let worst = results.iter().filter_map(|r| r.as_ref().ok()).fold(0.0f64, |a, &b| a.max(b));
    let errors: Vec<&String> = results.iter().filter_map(|r| r.as_ref().err()).collect();
    outcome(
        errors.is_empty(),
        format!(
            "{RANDOM_CASES} cases, {} failing, worst boundary residual {worst:e}{}",
            errors.len(),
            errors.first().map(|e| format!(" (first: {e})")).unwrap_or_default()
        ),
    )
}

fn recurrence_identities() -> Result<(), String> {
    let alphas = [rat(-1, 2), int(0), rat(1, 2), int(1), rat(3, 2)];
    for alpha in &alphas {
        let seq = jacobi_sequence(14, alpha).map_err(|e| e.to_string())?;
        let zero = UniPoly::constant(Rational::zero());
        for n in 0..=12 {
            let c = RecurrenceCoeffs::new(n, alpha).map_err(|e| e.to_string())?;
            let below = if n >= 1 { seq[n - 1].clone() } else { zero.clone() };
            let rhs = &seq[n + 1].scale(&c.a) + &below.scale(&c.g);
            if seq[n].mul_x() != rhs {
                return Err(format!("first-order recurrence fails at n={n}, alpha={alpha}"));
            }
            let t = squared_recurrence(n, alpha).map_err(|e| e.to_string())?;
            let below2 = if n >= 2 { seq[n - 2].clone() } else { zero.clone() };
            let rhs2 = &(&seq[n + 2].scale(&t.a_tilde) + &seq[n].scale(&t.b_tilde))
                + &below2.scale(&t.g_tilde);
            if seq[n].mul_x().mul_x() != rhs2 {
                return Err(format!("squared recurrence fails at n={n}, alpha={alpha}"));
            }
        }
    }
    Ok(())
}

fn basis_checks() -> Result<usize, String> {
    let per_d: Vec<Result<usize, String>> = (2..=4usize)
        .into_par_iter()
        .map(|d| {
            let basis = build_basis(d, 8).map_err(|e| e.to_string())?;
            for k in 0..=8 {
                let count = basis.degree(k).count();
                if count != dim_harmonic(d, k) {
                    return Err(format!("d={d} k={k}: {count} entries, expected {}", dim_harmonic(d, k)));
                }
            }
            let polys: Vec<(u32, Polynomial)> =
                basis.entries().iter().map(|e| (e.index.k, e.polynomial())).collect();
            for (k, p) in &polys {
                if !p.laplacian().is_zero() || p.degree() != Some(*k) || !p.is_homogeneous() {
                    return Err(format!("d={d}: entry {p} is not a degree-{k} harmonic"));
                }
            }
            let mut cache = MomentCache::new();
            let mut pairs = 0;
            for i in 0..polys.len() {
                for j in 0..i {
                    // Opposite parities integrate to zero term by term.
                    if (polys[i].0 + polys[j].0) % 2 == 1 {
                        continue;
                    }
                    pairs += 1;
                    let v = cache.inner_product(&polys[i].1, &polys[j].1).map_err(|e| e.to_string())?;
                    if !v.is_zero() {
                        return Err(format!("d={d}: entries {i} and {j} are not orthogonal"));
                    }
                }
            }
            Ok(pairs)
        })
        .collect();
    per_d.into_iter().sum()
}

fn gauss_checks() -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 1);
    let mut n = 0;
    for d in 2..=4usize {
        for degree in 0..=8u32 {
            let terms: Vec<_> = monomials_of_degree(d, degree)
                .into_iter()
                .map(|m| (m, int(rng.gen_range(-5i64..=5))))
                .collect();
            let f = Polynomial::from_terms(d, terms).map_err(|e| e.to_string())?;
            let g = gauss_decompose(&f).map_err(|e| e.to_string())?;
            if g.reconstruct().map_err(|e| e.to_string())? != f {
                return Err(format!("Gauss reconstruction fails for {f}"));
            }
            if g.parts.iter().any(|h| !h.laplacian().is_zero()) {
                return Err(format!("non-harmonic Gauss part for {f}"));
            }
            n += 1;
        }
    }
    Ok(n)
}

fn criterion_6() -> Outcome {
    let rec = recurrence_identities();
    let basis = basis_checks();
    let gauss = gauss_checks();
    let detail = format!(
        "recurrences: {}; basis counts/harmonicity/orthogonality: {}; Gauss: {}",
        rec.as_ref().map(|_| "exact".to_string()).unwrap_or_else(|e| e.clone()),
        basis.as_ref().map(|p| format!("{p} pairs orthogonal")).unwrap_or_else(|e| e.clone()),
        gauss.as_ref().map(|n| format!("{n} reconstructions")).unwrap_or_else(|e| e.clone()),
    );
    outcome(rec.is_ok() && basis.is_ok() && gauss.is_ok(), detail)
}

fn criterion_7() -> Outcome {
    let slab = NonhyperbolicQuadric::from_polynomial(&parse_polynomial("x2^2 - 1", Some(2)).unwrap()).unwrap();
    let data = cos_series(2, 12);
    let mut exact = true;
    for n in [8usize, 10, 12] {
        let sol = dirichlet_solve_series(&data, &slab, n).expect("series solve");
        let f = data.truncate(n);
        let residual = &(&f - &(&slab.to_polynomial() * &sol.fischer.s)) - &sol.fischer.r;
        exact &= residual.is_zero() && sol.fischer.r.laplacian().is_zero();
    }
    let families = [
        ("x1^2 + x2^2 + x3^2 - 1", 0u8),
        ("x2^2 + x3^2 - 1", 0),
        ("x2^2 + x3^2 - x1", 1),
    ];
    let mut admissibility = true;
    for (text, beta) in families {
        let q = NonhyperbolicQuadric::from_polynomial(&parse_polynomial(text, Some(3)).unwrap()).unwrap();
        for rho in [0.0, 0.25, 0.49, 0.5, 0.75, 0.99, 1.0, 1.5] {
            let data = SeriesData::from_polynomial(&parse_polynomial("x1*x2 + 1", Some(3)).unwrap(), rho).unwrap();
            let sol = dirichlet_solve_series(&data, &q, 4).expect("series solve");
            let expected = rho < (2.0 - f64::from(beta)) / 2.0;
            admissibility &= sol.diagnostics.beta == beta
                && sol.diagnostics.admissible == expected
                && sol.diagnostics.warning.is_some() != expected;
        }
    }
    let rep = stabilization_profile(&data, &slab, &[8, 10, 12]).expect("stabilization");
    let recorded = rep.max_change.len() == 9;
    outcome(
        exact && admissibility && recorded,
        format!(
            "truncations exact: {exact}; admissibility flags: {admissibility}; stabilization N=8,10,12 recorded \
             (exactly stable degrees {:?}, largest change {:e})",
            rep.exactly_stable,
            rep.max_change.iter().cloned().fold(0.0f64, f64::max)
        ),
    )
}

fn main() -> ExitCode {
    let start = Instant::now();
    let grids = grids();
    let checks: Vec<Check> = vec![
        ("1 bound grid, d=2..4, m<=8", Box::new(|| criterion_1(&grids))),
        ("2 even-index and proof constants", Box::new(|| criterion_2(&grids))),
        ("3 eigenvalue identity, even s", Box::new(criterion_3)),
        ("4 Jacobi zero bound and Chebyshev zero", Box::new(criterion_4)),
        ("5 exact Fischer/Dirichlet suite", Box::new(criterion_5)),
        ("6 structural identities", Box::new(criterion_6)),
        ("7 truncated series", Box::new(criterion_7)),
    ];
    let outcomes: Vec<Outcome> = checks.par_iter().map(|(_, f)| f()).collect();
    let mut all = true;
    for ((name, _), o) in checks.iter().zip(&outcomes) {
        all &= o.pass;
        println!("criterion {name}: {} ({})", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("acceptance finished in {:.1}s", start.elapsed().as_secs_f64());
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
