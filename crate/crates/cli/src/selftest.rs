//! A compact invariant suite that runs in a few seconds.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use qdirichlet::fischer::{
    boundary_residual, cos_series, dirichlet_solve_series, fischer_decompose, gauss_decompose,
    NonhyperbolicQuadric,
};
use qdirichlet::harmonics::{
    assemble_block, bound_enclosures, build_basis, dim_harmonic, random_homogeneous,
    smallest_eigenvalue_charpoly, smallest_eigenvalue_jacobizero, verify_bound_grid,
};
use qdirichlet::jacobi::{chebyshev_cross_check, jacobi_row, jacobi_sequence, squared_recurrence, RecurrenceCoeffs};
use qdirichlet::poly::{int, monomials_of_degree, parse_polynomial, rat};
use qdirichlet::sphere::{rayleigh_quotient, MomentCache};
use qdirichlet::{Polynomial, Rational, UniPoly};

use crate::args::{Format, RunConfig};
use crate::commands::{to_json, Report};
use crate::error::CliError;

#[derive(Debug, Clone, Serialize)]
struct Check {
    name: &'static str,
    pass: bool,
    detail: String,
}

type CheckResult = Result<String, String>;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn alpha_grid() -> Vec<Rational> {
    vec![rat(-1, 2), int(0), rat(1, 2), int(1), rat(3, 2)]
}

fn recurrences() -> CheckResult {
    for alpha in alpha_grid() {
        let seq = jacobi_sequence(14, &alpha).map_err(err)?;
        let zero = UniPoly::constant(Rational::from_integer(0.into()));
        for n in 0..=12 {
            let c = RecurrenceCoeffs::new(n, &alpha).map_err(err)?;
            let t = squared_recurrence(n, &alpha).map_err(err)?;
            let p1 = if n >= 1 { &seq[n - 1] } else { &zero };
            let p2 = if n >= 2 { &seq[n - 2] } else { &zero };
            if seq[n].mul_x() != &seq[n + 1].scale(&c.a) + &p1.scale(&c.g) {
                return Err(format!("x P_n recurrence fails at n = {n}, alpha = {alpha}"));
            }
            let rhs = &(&seq[n + 2].scale(&t.a_tilde) + &seq[n].scale(&t.b_tilde)) + &p2.scale(&t.g_tilde);
            if seq[n].mul_x().mul_x() != rhs {
                return Err(format!("x^2 P_n recurrence fails at n = {n}, alpha = {alpha}"));
            }
        }
    }
    Ok("n <= 12 on the alpha grid".into())
}

fn zero_bounds(cfg: &RunConfig) -> CheckResult {
    let tol = cfg.tol();
    for alpha in alpha_grid() {
        for n in 3..=12 {
            let row = jacobi_row(n, &alpha, &tol).map_err(err)?;
            if !row.pass {
                return Err(format!("zero below bound at n = {n}, alpha = {alpha}"));
            }
        }
    }
    let cheb = chebyshev_cross_check(3, &tol).map_err(err)?;
    if !(cheb.proportional && cheb.zeros_agree) {
        return Err("P_6 with alpha = -1/2 disagrees with T_6".into());
    }
    Ok("50 rows pass; P_6 matches T_6".into())
}

fn bound_grid(cfg: &RunConfig) -> CheckResult {
    let mut rows = 0;
    for (d, m) in [(2, 6), (3, 4)] {
        let g = verify_bound_grid(d, m, &cfg.tol()).map_err(err)?;
        if let Some(r) = g.iter().find(|r| !r.pass) {
            return Err(format!("row d = {d}, m = {}, s = {}, l = {} fails", r.m, r.s, r.l));
        }
        rows += g.len();
    }
    Ok(format!("{rows} rows pass (d = 2, m <= 6; d = 3, m <= 4)"))
}

fn eigen_routes(cfg: &RunConfig) -> CheckResult {
    let tol = cfg.tol();
    let mut n = 0;
    for d in 2..=3usize {
        let basis = build_basis(d, 8).map_err(err)?;
        for m in 0..=4u32 {
            for s in (0..=2 * m).step_by(2) {
                let jz = smallest_eigenvalue_jacobizero(d, m, s, &tol).map_err(err)?;
                for l in 1..=basis.labels(s) {
                    let b = assemble_block(&basis, m, s, l).map_err(err)?;
                    let cp = smallest_eigenvalue_charpoly(&b, &tol).map_err(err)?;
                    if !cp.overlaps(&jz) {
                        return Err(format!("routes disagree at d = {d}, m = {m}, s = {s}, l = {l}"));
                    }
                    n += 1;
                }
            }
        }
    }
    Ok(format!("{n} even-s blocks agree"))
}

fn basis_structure() -> CheckResult {
    for d in 2..=3usize {
        let b = build_basis(d, 4).map_err(err)?;
        let polys: Vec<Polynomial> = b.entries().iter().map(|e| e.polynomial()).collect();
        for k in 0..=4 {
            if b.degree(k).count() != dim_harmonic(d, k) {
                return Err(format!("wrong count at d = {d}, k = {k}"));
            }
        }
        let mut cache = MomentCache::new();
        for i in 0..polys.len() {
            if !polys[i].laplacian().is_zero() {
                return Err(format!("{} is not harmonic", polys[i]));
            }
            for j in 0..i {
                if !cache.inner_product(&polys[i], &polys[j]).map_err(err)?.is_zero() {
                    return Err(format!("entries {i}, {j} not orthogonal for d = {d}"));
                }
            }
        }
    }
    Ok("counts, harmonicity and orthogonality for d = 2, 3 through degree 4".into())
}

fn ellipse_example() -> CheckResult {
    let q = NonhyperbolicQuadric::from_polynomial(&parse_polynomial("x1^2 + 4*x2^2 - 1", Some(2)).map_err(err)?)
        .map_err(err)?;
    let f = parse_polynomial("x1^2", Some(2)).map_err(err)?;
    let dec = fischer_decompose(&f, &q).map_err(err)?;
    if dec.s != Polynomial::constant(2, rat(1, 5)) {
        return Err(format!("expected s = 1/5, got {}", dec.s));
    }
    Ok(format!("x1^2 on {q}: s = {}, r = {}", dec.s, dec.r))
}

fn family(rng: &mut ChaCha8Rng, d: usize, kind: usize) -> NonhyperbolicQuadric {
    let pos = |rng: &mut ChaCha8Rng| rat(rng.gen_range(1..=4), rng.gen_range(1..=3));
    let mut a = vec![int(0); d];
    let mut b = vec![int(0); d];
    let mut c = int(0);
    match kind {
        0 => {
            a.iter_mut().for_each(|x| *x = pos(rng));
            c = -pos(rng);
        }
        1 => {
            a.iter_mut().skip(1).for_each(|x| *x = pos(rng));
            b[0] = -pos(rng);
        }
        _ => {
            a[d - 1] = pos(rng);
            c = -pos(rng);
        }
    }
    NonhyperbolicQuadric::new(a, b, c).expect("valid family")
}

fn random_fischer(cfg: &RunConfig) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut worst = 0.0f64;
    for i in 0..24 {
        let d = rng.gen_range(2..=3);
        let degree = rng.gen_range(0..=6);
        let mut terms = Vec::new();
        for k in 0..=degree {
            for m in monomials_of_degree(d, k) {
                if rng.gen_bool(0.3) {
                    terms.push((m, int(rng.gen_range(-5..=5))));
                }
            }
        }
        let f = Polynomial::from_terms(d, terms).map_err(err)?;
        let q = family(&mut rng, d, i % 3);
        let dec = fischer_decompose(&f, &q).map_err(err)?;
        let residual = &(&f - &(&q.to_polynomial() * &dec.s)) - &dec.r;
        if !residual.is_zero() || !dec.r.laplacian().is_zero() {
            return Err(format!("inexact decomposition of {f} by {q}"));
        }
        let again = fischer_decompose(&dec.r, &q).map_err(err)?;
        if !again.s.is_zero() || again.r != dec.r {
            return Err(format!("decomposing r again changed it for {f} by {q}"));
        }
        let rep = boundary_residual(&f, &dec.r, &q, 20, 128, &mut rng).map_err(err)?;
        worst = worst.max(rep.max_residual);
    }
    if worst > 1e-25 {
        return Err(format!("boundary residual {worst:e}"));
    }
    Ok(format!("24 random cases exact, boundary residual <= {worst:e}"))
}

fn gauss() -> CheckResult {
    let f = parse_polynomial("x1^2", Some(2)).map_err(err)?;
    let g = gauss_decompose(&f).map_err(err)?;
    if g.parts[0] != Polynomial::constant(2, rat(1, 2)) || g.reconstruct().map_err(err)? != f {
        return Err(format!("unexpected parts {:?}", g.parts.iter().map(ToString::to_string).collect::<Vec<_>>()));
    }
    Ok(format!("x1^2 = |x|^2 * 1/2 + ({})", g.parts[1]))
}

fn series() -> CheckResult {
    let q = NonhyperbolicQuadric::from_polynomial(&parse_polynomial("x2^2 - 1", Some(2)).map_err(err)?).map_err(err)?;
    let data = cos_series(2, 8);
    let sol = dirichlet_solve_series(&data, &q, 8).map_err(err)?;
    let residual = &(&data.truncate(8) - &(&q.to_polynomial() * &sol.fischer.s)) - &sol.fischer.r;
    if !residual.is_zero() || sol.diagnostics.beta != 0 {
        return Err("truncated cosine on the slab is not exact".into());
    }
    Ok("cos(x1) to degree 8 on x2^2 - 1 exact".into())
}

fn random_quotients(cfg: &RunConfig) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x9e37_79b9);
    let mut n = 0;
    for d in 2..=4usize {
        let w = Polynomial::var(d, d - 1).pow(2);
        for m in 0..=5 {
            let bound = bound_enclosures(d, m).thm3.hi().clone();
            for _ in 0..3 {
                let f = random_homogeneous(d, m, &mut rng);
                if rayleigh_quotient(&w, &f).map_err(err)? < bound {
                    return Err(format!("quotient of {f} below the bound"));
                }
                n += 1;
            }
        }
    }
    Ok(format!("{n} random forms above the bound"))
}

pub fn run(cfg: &RunConfig) -> Result<Report, CliError> {
    let suite: Vec<(&'static str, CheckResult)> = vec![
        ("recurrences", recurrences()),
        ("zero-bounds", zero_bounds(cfg)),
        ("bound-grid", bound_grid(cfg)),
        ("eigenvalue-routes", eigen_routes(cfg)),
        ("basis", basis_structure()),
        ("fischer-ellipse", ellipse_example()),
        ("fischer-random", random_fischer(cfg)),
        ("gauss", gauss()),
        ("series", series()),
        ("random-quotients", random_quotients(cfg)),
    ];
    let checks: Vec<Check> = suite
        .into_iter()
        .map(|(name, r)| {
            let pass = r.is_ok();
            Check {
                name,
                pass,
                detail: r.unwrap_or_else(|e| e),
            }
        })
        .collect();
    let certified = checks.iter().all(|c| c.pass);
    let body = match cfg.format {
        Format::Json => to_json(&json!({
            "command": "selftest",
            "seed": cfg.seed,
            "checks": checks,
            "pass": certified,
        })),
        Format::Csv => {
            let mut s = String::from("check,pass,detail\n");
            for c in &checks {
                let _ = writeln!(s, "{},{},\"{}\"", c.name, c.pass, c.detail.replace('"', "\"\""));
            }
            s
        }
        Format::Text => {
            let mut s = format!("selftest (seed {})\n", cfg.seed);
            for c in &checks {
                let _ = writeln!(s, "{:<18} {}  {}", c.name, if c.pass { "PASS" } else { "FAIL" }, c.detail);
            }
            let failing = checks.iter().filter(|c| !c.pass).count();
            let _ = writeln!(s, "{} checks, {failing} failing", checks.len());
            s
        }
    };
    Ok(Report { body, certified })
}
