//! Command-line front end: argument parsing, dispatch and report rendering.

mod args;
mod commands;
mod error;
mod selftest;

use std::ffi::OsString;
use std::io::Write;

pub use args::{parse_args, Builtin, Command, Format, RunConfig, Verb, DEFAULT_SEED};
pub use commands::{run, Report};
pub use error::{exit, CliError};

/// Runs `cmd`, on a dedicated thread pool when `--jobs` is set.
pub fn execute(cmd: &Command) -> Result<Report, CliError> {
    match cmd.config.jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::new(exit::SOFTWARE, format!("cannot start {n} workers: {e}")))?
            .install(|| run(cmd)),
        None => run(cmd),
    }
}

fn emit(cmd: &Command, report: &Report) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::new(exit::IO, format!("writing report: {e}"));
    match &cmd.config.out {
        Some(path) => std::fs::write(path, &report.body)
            .map_err(|e| CliError::new(exit::IO, format!("writing {}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(report.body.as_bytes()).map_err(io)?;
            out.flush().map_err(io)
        }
    }
}

/// Full program: parse, run, write. Returns the process exit code.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cmd = match parse_args(argv) {
        Ok(cmd) => cmd,
        Err(e) if e.code == exit::OK => {
            print!("{}", e.message);
            return exit::OK;
        }
        Err(e) => {
            eprint!("{}", e.message);
            if !e.message.ends_with('\n') {
                eprintln!();
            }
            return e.code;
        }
    };
    let report = match execute(&cmd) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {}", e.message);
            if e.code == exit::SOFTWARE {
                eprintln!("verb: {}", cmd.verb.name());
                eprintln!("config: {:?}", cmd.config);
                eprintln!("input: {:?}", cmd.verb);
            }
            return e.code;
        }
    };
    if let Err(e) = emit(&cmd, &report) {
        eprintln!("error: {}", e.message);
        return e.code;
    }
    if report.certified {
        exit::OK
    } else {
        eprintln!("certification failed; see the report rows with pass = false");
        exit::CERTIFICATION_FAILED
    }
}
