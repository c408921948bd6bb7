use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use qdirichlet::fischer::{
    boundary_residual, dirichlet_solve_series, fischer_decompose, stabilization_profile,
    BoundaryReport, FischerResult, NonhyperbolicQuadric, SeriesData,
};
use qdirichlet::harmonics::{bound_enclosures, build_basis, random_homogeneous, verify_bound_grid, GridRow};
use qdirichlet::jacobi::{jacobi_row, JacobiRow};
use qdirichlet::numeric::to_f64;
use qdirichlet::sphere::rayleigh_quotient;
use qdirichlet::{Polynomial, Rational};

use crate::args::{Command, Format, RunConfig, Verb};
use crate::error::CliError;
use crate::selftest;

/// A rendered report and whether every certification in it passed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub body: String,
    pub certified: bool,
}

pub(crate) fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report values serialize");
    s.push('\n');
    s
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn run(cmd: &Command) -> Result<Report, CliError> {
    let cfg = &cmd.config;
    match &cmd.verb {
        Verb::Jacobi { alphas } => jacobi(cfg, alphas),
        Verb::Basis => basis(cfg),
        Verb::BoundGrid { trials } => bound_grid(cfg, *trials),
        Verb::Fischer { q, f } => fischer(cfg, q, f, None),
        Verb::Dirichlet { q, f, samples } => fischer(cfg, q, f, Some(*samples)),
        Verb::Series {
            q,
            data,
            label,
            stabilize,
        } => series(cfg, q, data, label, stabilize),
        Verb::Selftest => selftest::run(cfg),
    }
}

fn jacobi(cfg: &RunConfig, alphas: &[Rational]) -> Result<Report, CliError> {
    let tol = cfg.tol();
    let mut rows: Vec<JacobiRow> = Vec::new();
    for alpha in alphas {
        for n in 1..=cfg.max_degree.max(1) as usize {
            rows.push(jacobi_row(n, alpha, &tol).map_err(|e| CliError::compute("jacobi", e))?);
        }
    }
    // Rows outside the bound's proven range are informational.
    let certified = rows.iter().filter(|r| r.route == "theorem").all(|r| r.pass);
    let body = match cfg.format {
        Format::Csv => {
            let mut s = format!("{}\n", JacobiRow::CSV_HEADER);
            for r in &rows {
                s.push_str(&r.csv());
                s.push('\n');
            }
            s
        }
        Format::Json => to_json(&json!({
            "command": "jacobi",
            "tol_bits": cfg.tol_bits,
            "rows": rows,
            "pass": certified,
        })),
        Format::Text => {
            let mut s = format!(
                "jacobi: first positive zero of P_2n^(a,a) vs pi/(4 sqrt((a+1/2+n)(n+2))), bracket width 2^-{}\n",
                cfg.tol_bits
            );
            let _ = writeln!(s, "{:>3} {:>6} {:>22} {:>22} {:>9} pass", "n", "alpha", "zero", "bound", "route");
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{:>3} {:>6} {:>22.17} {:>22.17} {:>9} {}",
                    r.n,
                    r.alpha.to_string(),
                    to_f64(&r.zero_lower),
                    to_f64(&r.elbert_bound),
                    r.route,
                    r.pass
                );
            }
            let failing = rows.iter().filter(|r| !r.pass).count();
            let _ = writeln!(s, "{} rows, {failing} failing", rows.len());
            s
        }
    };
    Ok(Report { body, certified })
}

#[derive(Serialize)]
struct BasisRow {
    k: u32,
    s: u32,
    l: usize,
    norm_sq: String,
    polynomial: String,
}

fn basis(cfg: &RunConfig) -> Result<Report, CliError> {
    let b = build_basis(cfg.dimension, cfg.max_degree).map_err(|e| CliError::compute("basis", e))?;
    let rows: Vec<BasisRow> = b
        .entries()
        .iter()
        .map(|e| BasisRow {
            k: e.index.k,
            s: e.index.s,
            l: e.index.l,
            norm_sq: e.norm_sq().to_string(),
            polynomial: e.polynomial().to_string(),
        })
        .collect();
    let body = match cfg.format {
        Format::Csv => {
            let mut s = String::from("k,s,l,norm_sq,polynomial\n");
            for r in &rows {
                let _ = writeln!(s, "{},{},{},{},{}", r.k, r.s, r.l, csv_field(&r.norm_sq), csv_field(&r.polynomial));
            }
            s
        }
        Format::Json => to_json(&json!({
            "command": "basis",
            "d": cfg.dimension,
            "max_degree": cfg.max_degree,
            "entries": rows,
        })),
        Format::Text => {
            let mut s = format!("basis: d = {}, degrees 0..={}\n", cfg.dimension, cfg.max_degree);
            for r in &rows {
                let _ = writeln!(s, "Y[k={}, s={}, l={}] = {}    |Y|^2 = {}", r.k, r.s, r.l, r.polynomial, r.norm_sq);
            }
            let _ = writeln!(s, "{} entries", rows.len());
            s
        }
    };
    Ok(Report { body, certified: true })
}

#[derive(Serialize)]
struct RandomCheck {
    m: u32,
    trial: usize,
    f: String,
    quotient: String,
    bound: String,
    pass: bool,
}

fn random_quotient_checks(cfg: &RunConfig, trials: usize) -> Result<Vec<RandomCheck>, CliError> {
    let d = cfg.dimension;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let weight = Polynomial::var(d, d - 1).pow(2);
    let mut out = Vec::new();
    for m in 0..=cfg.max_degree {
        let bound = bound_enclosures(d, m).thm3.hi().clone();
        for trial in 0..trials {
            let f = random_homogeneous(d, m, &mut rng);
            let q = rayleigh_quotient(&weight, &f).map_err(|e| CliError::compute("bound-grid", e))?;
            out.push(RandomCheck {
                m,
                trial,
                f: f.to_string(),
                pass: q >= bound,
                quotient: q.to_string(),
                bound: bound.to_string(),
            });
        }
    }
    Ok(out)
}

fn bound_grid(cfg: &RunConfig, trials: usize) -> Result<Report, CliError> {
    let rows = verify_bound_grid(cfg.dimension, cfg.max_degree, &cfg.tol())
        .map_err(|e| CliError::compute("bound-grid", e))?;
    let checks = random_quotient_checks(cfg, trials)?;
    let certified = rows.iter().all(|r| r.pass) && checks.iter().all(|c| c.pass);
    let body = match cfg.format {
        Format::Csv => {
            let mut s = format!("{}\n", GridRow::CSV_HEADER);
            for r in &rows {
                s.push_str(&r.csv());
                s.push('\n');
            }
            s
        }
        Format::Json => to_json(&json!({
            "command": "bound-grid",
            "d": cfg.dimension,
            "max_degree": cfg.max_degree,
            "tol_bits": cfg.tol_bits,
            "seed": cfg.seed,
            "rows": rows,
            "random_checks": checks,
            "pass": certified,
        })),
        Format::Text => {
            let mut s = format!(
                "bound-grid: d = {}, degrees 0..={}, bracket width 2^-{}, seed {}\n",
                cfg.dimension, cfg.max_degree, cfg.tol_bits, cfg.seed
            );
            for m in 0..=cfg.max_degree {
                let at: Vec<&GridRow> = rows.iter().filter(|r| r.m == m).collect();
                let tightest = at.iter().map(|r| r.margin()).fold(f64::INFINITY, f64::min);
                let failing = at.iter().filter(|r| !r.pass).count();
                let _ = writeln!(
                    s,
                    "m = {m:>2}: {:>4} blocks, min lambda {:.12e}, bound {:.12e}, min ratio {tightest:.4}, {failing} failing",
                    at.len(),
                    at.iter().map(|r| to_f64(&r.lambda_lower)).fold(f64::INFINITY, f64::min),
                    at.first().map_or(0.0, |r| to_f64(&r.bound_thm3)),
                );
            }
            let bad = checks.iter().filter(|c| !c.pass).count();
            let _ = writeln!(s, "random forms: {} quotients, {bad} below the bound", checks.len());
            let _ = writeln!(s, "{}", if certified { "all rows pass" } else { "FAILED" });
            s
        }
    };
    Ok(Report { body, certified })
}

#[derive(Serialize)]
struct Checks {
    residual_zero: bool,
    laplacian_zero: bool,
}

#[derive(Serialize)]
struct FischerReport {
    s: String,
    r: String,
    quadric: String,
    kind: String,
    beta: u8,
    f: String,
    checks: Checks,
    #[serde(skip_serializing_if = "Option::is_none")]
    boundary: Option<BoundarySection>,
}

#[derive(Serialize)]
struct BoundarySection {
    seed: u64,
    #[serde(flatten)]
    report: BoundaryReport,
}

fn decompose(q: &NonhyperbolicQuadric, f: &Polynomial) -> Result<FischerResult, CliError> {
    fischer_decompose(f, q).map_err(|e| CliError::compute(&format!("decomposing {f} by {q}"), e))
}

fn fischer(
    cfg: &RunConfig,
    q: &NonhyperbolicQuadric,
    f: &Polynomial,
    samples: Option<usize>,
) -> Result<Report, CliError> {
    let dec = decompose(q, f)?;
    let boundary = match samples {
        Some(n) => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let report = boundary_residual(f, &dec.r, q, n, cfg.precision, &mut rng)
                .map_err(|e| CliError::compute("boundary sampling", e))?;
            Some(BoundarySection { seed: cfg.seed, report })
        }
        None => None,
    };
    let report = FischerReport {
        s: dec.s.to_string(),
        r: dec.r.to_string(),
        quadric: q.to_string(),
        kind: q.kind().to_string(),
        beta: q.beta(),
        f: f.to_string(),
        checks: Checks {
            residual_zero: dec.residual_is_zero,
            laplacian_zero: dec.laplacian_is_zero,
        },
        boundary,
    };
    let certified = dec.residual_is_zero && dec.laplacian_is_zero;
    let body = match cfg.format {
        Format::Json => to_json(&report),
        Format::Csv => {
            let mut s = String::from("quadric,f,s,r,residual_zero,laplacian_zero");
            if report.boundary.is_some() {
                s.push_str(",samples_found,max_boundary_residual");
            }
            s.push('\n');
            let _ = write!(
                s,
                "{},{},{},{},{},{}",
                csv_field(&report.quadric),
                csv_field(&report.f),
                csv_field(&report.s),
                csv_field(&report.r),
                report.checks.residual_zero,
                report.checks.laplacian_zero
            );
            if let Some(b) = &report.boundary {
                let _ = write!(s, ",{},{:e}", b.report.found, b.report.max_residual);
            }
            s.push('\n');
            s
        }
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "quadric  q = {} ({}, beta = {})", report.quadric, report.kind, report.beta);
            let _ = writeln!(s, "data     f = {}", report.f);
            let _ = writeln!(s, "quotient s = {}", report.s);
            let _ = writeln!(s, "harmonic r = {}", report.r);
            let _ = writeln!(
                s,
                "checks   f - q*s - r = 0: {}, laplacian(r) = 0: {}",
                report.checks.residual_zero, report.checks.laplacian_zero
            );
            if let Some(b) = &report.boundary {
                let _ = writeln!(
                    s,
                    "boundary max |f - r| = {:e} over {} points at {} bits (seed {})",
                    b.report.max_residual, b.report.found, b.report.precision, b.seed
                );
                if let Some(w) = &b.report.shortfall {
                    let _ = writeln!(s, "warning: {w}");
                }
            }
            s
        }
    };
    Ok(Report { body, certified })
}

fn series(
    cfg: &RunConfig,
    q: &NonhyperbolicQuadric,
    data: &SeriesData,
    label: &str,
    stabilize: &[usize],
) -> Result<Report, CliError> {
    let n = cfg.max_degree as usize;
    let sol = dirichlet_solve_series(data, q, n).map_err(|e| CliError::compute("series", e))?;
    let stab = if stabilize.is_empty() {
        None
    } else {
        Some(stabilization_profile(data, q, stabilize).map_err(|e| CliError::compute("stabilization", e))?)
    };
    let certified = sol.fischer.residual_is_zero && sol.fischer.laplacian_is_zero;
    let dg = &sol.diagnostics;
    let body = match cfg.format {
        Format::Json => to_json(&json!({
            "command": "series",
            "data": label,
            "quadric": q.to_string(),
            "truncation": sol.truncation,
            "s": sol.fischer.s.to_string(),
            "r": sol.fischer.r.to_string(),
            "checks": {
                "residual_zero": sol.fischer.residual_is_zero,
                "laplacian_zero": sol.fischer.laplacian_is_zero,
            },
            "diagnostics": dg,
            "stabilization": stab,
        })),
        Format::Csv => {
            let mut s = String::from("k,r_norm,s_norm,order_proxy\n");
            for k in 0..dg.r_norms.len() {
                let proxy = dg.order_proxy[k].map(|p| format!("{p:.6}")).unwrap_or_default();
                let _ = writeln!(s, "{k},{},{},{proxy}", dg.r_norms[k], dg.s_norms[k]);
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "series   data {label}, truncation N = {}", sol.truncation);
            let _ = writeln!(s, "quadric  q = {} ({}, beta = {})", q, q.kind(), dg.beta);
            let _ = writeln!(s, "harmonic r_N = {}", sol.fischer.r);
            let _ = writeln!(
                s,
                "checks   exact residual: {}, laplacian(r) = 0: {}",
                sol.fischer.residual_is_zero, sol.fischer.laplacian_is_zero
            );
            let _ = writeln!(
                s,
                "order    declared rho = {}, admissible (rho < (2 - beta)/2): {}",
                dg.declared_rho, dg.admissible
            );
            if let Some(w) = &dg.warning {
                let _ = writeln!(s, "warning: {w}");
            }
            for k in 0..dg.r_norms.len() {
                let _ = writeln!(
                    s,
                    "  k = {k:>2}: max|r_k| = {:.6e}, max|s_k| = {:.6e}",
                    to_f64(&dg.r_norms[k]),
                    to_f64(&dg.s_norms[k])
                );
            }
            if let Some(st) = &stab {
                let _ = writeln!(s, "stabilization over N = {:?}:", st.truncations);
                for (k, c) in st.max_change.iter().enumerate() {
                    let _ = writeln!(s, "  k = {k:>2}: max change {c:.6e}");
                }
            }
            s
        }
    };
    Ok(Report { body, certified })
}
