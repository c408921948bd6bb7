use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use qdirichlet::fischer::{cos_series, NonhyperbolicQuadric, SeriesData};
use qdirichlet::numeric::pow2_neg;
use qdirichlet::poly::parse_polynomial;
use qdirichlet::{Polynomial, Rational};

use crate::error::{exit, CliError};

pub const DEFAULT_SEED: u64 = 20_240_601;
pub const DEFAULT_TOL_BITS: u32 = 40;
pub const DEFAULT_PRECISION: u32 = 128;
const MAX_TOL_BITS: u32 = 256;
const MAX_PRECISION: u32 = 8192;
const MAX_DIMENSION: usize = 12;
const MAX_DEGREE: u32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Builtin {
    /// Taylor parts of cos(x1).
    Cos1,
}

#[derive(Debug, Parser)]
#[command(
    name = "qdirichlet",
    version,
    about = "Exact Dirichlet solver for nonhyperbolic quadrics and certified Jacobi-matrix bounds"
)]
struct Cli {
    #[command(subcommand)]
    verb: VerbArgs,

    /// Dimension; inferred from the highest variable index when omitted.
    #[arg(short = 'd', long = "dim", global = true)]
    dim: Option<usize>,

    /// Largest degree (or truncation order) to process.
    #[arg(long, global = true)]
    max_degree: Option<u32>,

    /// Bracket width, as `2^-k` or just `k`.
    #[arg(long, global = true)]
    tol: Option<String>,

    /// Big-float precision in bits for boundary evaluation.
    #[arg(long, global = true, default_value_t = DEFAULT_PRECISION)]
    precision: u32,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Worker threads for the grid computations.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Seed for randomized checks and boundary sampling.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum VerbArgs {
    /// Table of first positive zeros of P_2n against their lower bound.
    Jacobi {
        /// Comma-separated parameters, e.g. `-1/2,0,1/2`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        alpha: Vec<String>,
    },
    /// Spherical-harmonic basis polynomials up to `--max-degree`.
    Basis,
    /// Certify the Rayleigh-quotient lower bound on every block.
    BoundGrid {
        /// Random forms per degree for the seeded quotient check.
        #[arg(long, default_value_t = 4)]
        trials: usize,
    },
    /// Decompose f = q·s + r with r harmonic.
    Fischer {
        #[arg(long, allow_hyphen_values = true)]
        q: String,
        #[arg(long, allow_hyphen_values = true)]
        f: Option<String>,
    },
    /// Harmonic r with r = f on {q = 0}, plus a sampled boundary check.
    Dirichlet {
        #[arg(long, allow_hyphen_values = true)]
        q: String,
        #[arg(long, allow_hyphen_values = true)]
        f: Option<String>,
        /// Boundary points to sample.
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Solve truncations of entire data given by homogeneous parts.
    Series {
        #[arg(long, allow_hyphen_values = true)]
        q: String,
        /// Polynomial data (split into homogeneous parts).
        #[arg(long, allow_hyphen_values = true)]
        f: Option<String>,
        #[arg(long, value_enum)]
        builtin: Option<Builtin>,
        /// Declared order of the entire data.
        #[arg(long)]
        order: Option<f64>,
        /// Truncation degrees for the stabilization profile, e.g. `8,10,12`.
        #[arg(long, value_delimiter = ',')]
        stabilize: Vec<usize>,
    },
    /// Run the built-in invariant suite.
    Selftest,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub dimension: usize,
    pub max_degree: u32,
    pub tol_bits: u32,
    pub precision: u32,
    pub format: Format,
    pub jobs: Option<usize>,
    pub seed: u64,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn tol(&self) -> Rational {
        pow2_neg(self.tol_bits)
    }
}

#[derive(Debug, Clone)]
pub enum Verb {
    Jacobi {
        alphas: Vec<Rational>,
    },
    Basis,
    BoundGrid {
        trials: usize,
    },
    Fischer {
        q: NonhyperbolicQuadric,
        f: Polynomial,
    },
    Dirichlet {
        q: NonhyperbolicQuadric,
        f: Polynomial,
        samples: usize,
    },
    Series {
        q: NonhyperbolicQuadric,
        data: SeriesData,
        label: String,
        stabilize: Vec<usize>,
    },
    Selftest,
}

impl Verb {
    pub fn name(&self) -> &'static str {
        match self {
            Verb::Jacobi { .. } => "jacobi",
            Verb::Basis => "basis",
            Verb::BoundGrid { .. } => "bound-grid",
            Verb::Fischer { .. } => "fischer",
            Verb::Dirichlet { .. } => "dirichlet",
            Verb::Series { .. } => "series",
            Verb::Selftest => "selftest",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Command {
    pub verb: Verb,
    pub config: RunConfig,
}

fn parse_tol(text: &str) -> Result<u32, CliError> {
    let bits = text.strip_prefix("2^-").unwrap_or(text);
    let k: u32 = bits
        .parse()
        .map_err(|_| CliError::usage(format!("--tol expects `2^-k` or `k`, got `{text}`")))?;
    if k == 0 || k > MAX_TOL_BITS {
        return Err(CliError::out_of_range(format!(
            "--tol exponent must be in 1..={MAX_TOL_BITS}, got {k}"
        )));
    }
    Ok(k)
}

fn parse_alpha(text: &str) -> Result<Rational, CliError> {
    let a: Rational = text
        .trim()
        .parse()
        .map_err(|_| CliError::usage(format!("--alpha expects rationals like -1/2, got `{text}`")))?;
    if a <= Rational::from_integer((-1).into()) {
        return Err(CliError::out_of_range(format!("alpha must exceed -1, got {a}")));
    }
    Ok(a)
}

fn parse_poly(flag: &str, text: &str, dim: Option<usize>) -> Result<Polynomial, CliError> {
    parse_polynomial(text, dim).map_err(|e| CliError::input(&format!("{flag} `{text}`"), e))
}

/// Dimension from `-d`, or from the highest variable index in the inputs
/// (at least 2). With `-d`, an input mentioning a larger index is rejected.
fn resolve_dimension(explicit: Option<usize>, inputs: &[(&str, &str)]) -> Result<usize, CliError> {
    match explicit {
        Some(d) => {
            for (flag, text) in inputs {
                parse_poly(flag, text, Some(d))?;
            }
            Ok(d)
        }
        None => {
            let mut d = 2;
            for (flag, text) in inputs {
                d = d.max(parse_poly(flag, text, None)?.dimension());
            }
            Ok(d)
        }
    }
}

fn parse_quadric(text: &str, d: usize) -> Result<NonhyperbolicQuadric, CliError> {
    let p = parse_poly("--q", text, Some(d))?;
    NonhyperbolicQuadric::from_polynomial(&p).map_err(|e| CliError::input(&format!("--q `{text}`"), e))
}

/// The quadric is validated before the data is required, so a bad `--q`
/// is reported as such even when `--f` is missing.
fn quadric_and_data(
    verb: &str,
    dim: Option<usize>,
    q: &str,
    f: Option<&str>,
) -> Result<(usize, NonhyperbolicQuadric, Polynomial), CliError> {
    let mut inputs = vec![("--q", q)];
    if let Some(f) = f {
        inputs.push(("--f", f));
    }
    let d = resolve_dimension(dim, &inputs)?;
    let quadric = parse_quadric(q, d)?;
    let f = f.ok_or_else(|| CliError::usage(format!("{verb} needs data --f")))?;
    Ok((d, quadric, parse_poly("--f", f, Some(d))?))
}

fn check_range<T: PartialOrd + std::fmt::Display>(name: &str, v: T, lo: T, hi: T) -> Result<T, CliError> {
    if v < lo || v > hi {
        return Err(CliError::out_of_range(format!("{name} must be in {lo}..={hi}, got {v}")));
    }
    Ok(v)
}

/// Parses and validates a full argument vector (including the program name).
///
/// `--help` and `--version` come back as an error with code 0 whose
/// message is the text to print.
pub fn parse_args<I, T>(argv: I) -> Result<Command, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| {
        let code = if e.use_stderr() { exit::USAGE } else { exit::OK };
        CliError::new(code, e.render().to_string())
    })?;

    if let Some(d) = cli.dim {
        check_range("-d", d, 2, MAX_DIMENSION)?;
    }
    let tol_bits = match &cli.tol {
        Some(t) => parse_tol(t)?,
        None => DEFAULT_TOL_BITS,
    };
    check_range("--precision", cli.precision, 64, MAX_PRECISION)?;
    if let Some(j) = cli.jobs {
        check_range("--jobs", j, 1, 1024)?;
    }
    if let Some(m) = cli.max_degree {
        check_range("--max-degree", m, 0, MAX_DEGREE)?;
    }

    let mut dimension = cli.dim.unwrap_or(2);
    let mut default_degree = 8;
    let verb = match cli.verb {
        VerbArgs::Jacobi { alpha } => {
            default_degree = 12;
            let alphas = if alpha.is_empty() {
                ["-1/2", "0", "1/2", "1", "3/2"].iter().map(|a| parse_alpha(a)).collect()
            } else {
                alpha.iter().map(|a| parse_alpha(a)).collect::<Result<Vec<_>, _>>()
            }?;
            Verb::Jacobi { alphas }
        }
        VerbArgs::Basis => {
            default_degree = 4;
            Verb::Basis
        }
        VerbArgs::BoundGrid { trials } => Verb::BoundGrid {
            trials: check_range("--trials", trials, 0, 1000)?,
        },
        VerbArgs::Fischer { q, f } => {
            let (d, quadric, f) = quadric_and_data("fischer", cli.dim, &q, f.as_deref())?;
            dimension = d;
            Verb::Fischer { q: quadric, f }
        }
        VerbArgs::Dirichlet { q, f, samples } => {
            let (d, quadric, f) = quadric_and_data("dirichlet", cli.dim, &q, f.as_deref())?;
            dimension = d;
            Verb::Dirichlet {
                q: quadric,
                f,
                samples: check_range("--samples", samples, 1, 100_000)?,
            }
        }
        VerbArgs::Series {
            q,
            f,
            builtin,
            order,
            stabilize,
        } => {
            if let Some(rho) = order {
                if !rho.is_finite() || rho < 0.0 {
                    return Err(CliError::out_of_range(format!("--order must be finite and ≥ 0, got {rho}")));
                }
            }
            for &n in &stabilize {
                check_range("--stabilize", n as u32, 0, MAX_DEGREE)?;
            }
            let mut inputs = vec![("--q", q.as_str())];
            if let Some(f) = &f {
                inputs.push(("--f", f.as_str()));
            }
            dimension = resolve_dimension(cli.dim, &inputs)?;
            let quadric = parse_quadric(&q, dimension)?;
            let (data, label) = match (f, builtin) {
                (Some(_), Some(_)) => return Err(CliError::usage("give either --f or --builtin, not both")),
                (None, None) => return Err(CliError::usage("series needs --f or --builtin")),
                (Some(text), None) => {
                    let p = parse_poly("--f", &text, Some(dimension))?;
                    default_degree = p.degree().unwrap_or(0);
                    let data = SeriesData::from_polynomial(&p, order.unwrap_or(0.0))
                        .map_err(|e| CliError::input("--f", e))?;
                    (data, text)
                }
                (None, Some(Builtin::Cos1)) => {
                    let top = cli
                        .max_degree
                        .unwrap_or(default_degree)
                        .max(stabilize.iter().copied().max().unwrap_or(0) as u32);
                    let mut data = cos_series(dimension, top as usize);
                    if let Some(rho) = order {
                        data = SeriesData::new(data.parts().to_vec(), rho)
                            .map_err(|e| CliError::input("--order", e))?;
                    }
                    (data, "cos(x1)".to_string())
                }
            };
            Verb::Series {
                q: quadric,
                data,
                label,
                stabilize,
            }
        }
        VerbArgs::Selftest => Verb::Selftest,
    };

    Ok(Command {
        verb,
        config: RunConfig {
            dimension,
            max_degree: cli.max_degree.unwrap_or(default_degree),
            tol_bits,
            precision: cli.precision,
            format: cli.format,
            jobs: cli.jobs,
            seed: cli.seed,
            out: cli.out,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use qdirichlet::fischer::QuadricKind;

    fn parse(args: &[&str]) -> Result<Command, CliError> {
        parse_args(std::iter::once("qdirichlet").chain(args.iter().copied()))
    }

    #[test]
    fn dirichlet_command() {
        let cmd = parse(&["dirichlet", "--q", "x1^2+x2^2-1", "--f", "x1^2", "-d", "2"]).unwrap();
        assert_eq!(cmd.verb.name(), "dirichlet");
        assert_eq!(cmd.config.dimension, 2);
        assert_eq!(cmd.config.precision, DEFAULT_PRECISION);
    }

    #[test]
    fn bound_grid_command() {
        let cmd = parse(&["bound-grid", "-d", "3", "--max-degree", "8", "--format", "csv"]).unwrap();
        assert_eq!(cmd.verb.name(), "bound-grid");
        assert_eq!((cmd.config.dimension, cmd.config.max_degree), (3, 8));
        assert_eq!(cmd.config.format, Format::Csv);
        assert_eq!(cmd.config.tol(), pow2_neg(DEFAULT_TOL_BITS));
    }

    #[test]
    fn quadric_without_square_term() {
        let e = parse(&["dirichlet", "--q", "x1-1"]).unwrap_err();
        assert_eq!(e.code, exit::INVALID_QUADRIC);
        assert!(e.message.contains("no square term"), "{}", e.message);
    }

    #[test]
    fn quadric_families() {
        let kind = |q: &str| match parse(&["fischer", "--q", q, "--f", "1"]).unwrap().verb {
            Verb::Fischer { q, .. } => (q.kind(), q.beta(), q.dimension()),
            _ => unreachable!(),
        };
        assert_eq!(kind("x2^2 - x1"), (QuadricKind::Paraboloid, 1, 2));
        assert_eq!(kind("x2^2 + x3^2 - 1"), (QuadricKind::Cylinder, 0, 3));
        let e = parse(&["fischer", "--q", "x1^2 - x2^2 - 1", "--f", "1"]).unwrap_err();
        assert_eq!(e.code, exit::INVALID_QUADRIC);
        let e = parse(&["fischer", "--q", "x1*x2 + x1^2 - 1", "--f", "1"]).unwrap_err();
        assert_eq!(e.code, exit::INVALID_QUADRIC);
    }

    #[test]
    fn dimension_inference_and_mismatch() {
        let cmd = parse(&["fischer", "--q", "x1^2 - 1", "--f", "x4"]).unwrap();
        assert_eq!(cmd.config.dimension, 4);
        let cmd = parse(&["fischer", "--q", "x1^2 - 1", "--f", "x1"]).unwrap();
        assert_eq!(cmd.config.dimension, 2);
        let e = parse(&["fischer", "-d", "2", "--q", "x1^2 - 1", "--f", "x3"]).unwrap_err();
        assert_eq!(e.code, exit::MALFORMED_POLYNOMIAL);
    }

    #[test]
    fn error_codes_are_distinct() {
        assert_eq!(parse(&["frobnicate"]).unwrap_err().code, exit::USAGE);
        assert_eq!(parse(&["fischer", "--q", "x1^2-1", "--f", "x1 +"]).unwrap_err().code, exit::MALFORMED_POLYNOMIAL);
        assert_eq!(parse(&["basis", "-d", "1"]).unwrap_err().code, exit::OUT_OF_RANGE);
        assert_eq!(parse(&["basis", "--precision", "32"]).unwrap_err().code, exit::OUT_OF_RANGE);
        assert_eq!(parse(&["jacobi", "--tol", "0"]).unwrap_err().code, exit::OUT_OF_RANGE);
        assert_eq!(parse(&["jacobi", "--tol", "2^-x"]).unwrap_err().code, exit::USAGE);
        assert_eq!(parse(&["jacobi", "--alpha", "-1"]).unwrap_err().code, exit::OUT_OF_RANGE);
        assert_eq!(parse(&["fischer", "--q", "x1^2-1"]).unwrap_err().code, exit::USAGE);
        assert_eq!(parse(&["series", "--q", "x1^2-1"]).unwrap_err().code, exit::USAGE);
        assert_eq!(parse(&["--help"]).unwrap_err().code, exit::OK);
    }

    #[test]
    fn tolerance_forms() {
        assert_eq!(parse_tol("2^-30").unwrap(), 30);
        assert_eq!(parse_tol("52").unwrap(), 52);
        assert!(parse_tol("1/3").is_err());
    }

    #[test]
    fn series_builtin_covers_stabilization_range() {
        let cmd = parse(&["series", "--q", "x2^2-1", "--builtin", "cos1", "--max-degree", "8", "--stabilize", "8,10,12"])
            .unwrap();
        match cmd.verb {
            Verb::Series { data, stabilize, .. } => {
                assert_eq!(data.degree(), 12);
                assert_eq!(data.rho(), 1.0);
                assert_eq!(stabilize, vec![8, 10, 12]);
            }
            _ => unreachable!(),
        }
        assert_eq!(cmd.config.max_degree, 8);
    }
}
