//! `selberg-det`: heat traces, Selberg zeta values and regularized
//! determinants from an orbifold class-data file.

mod check;
mod commands;
mod grid;
mod table;

use clap::{Parser, Subcommand};
use selberg_det::Error;
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_USAGE: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_VALIDATION: u8 = 3;
const EXIT_ACCURACY: u8 = 4;

#[derive(Parser, Debug)]
#[command(name = "selberg-det", version, about = "Heat traces, Selberg zeta functions and regularized determinants for cofinite Kleinian groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Orbifold class-data file.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,

    /// Write CSV or the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Spectral parameter grid, `start:stop:step` or a comma list.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub s: Option<String>,

    /// Time grid for `trace`, same syntax as --s.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub t: Option<String>,

    /// Target accuracy.
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol: f64,

    /// Worker threads (0 picks the machine default).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,

    /// `det`: skip the numeric route.
    #[arg(long, global = true)]
    pub closed_only: bool,

    /// `check`: list the checks without running them.
    #[arg(long, global = true)]
    pub list: bool,

    /// `check`: file of `name = value` lines overriding built-in golden values.
    #[arg(long, global = true)]
    pub golden: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// θ(t) and its per-family breakdown on a t grid.
    Trace,
    /// log Z(s), Z′/Z(s) and the Euler product on an s grid.
    Zeta,
    /// log det(Δ − (1 − s²)) by the closed forms and the numeric route.
    Det,
    /// The relative zeta function on an s grid.
    Relzeta,
    /// The expanded loxodromic length spectrum.
    Spectrum,
    /// Run the invariant and golden-value suite.
    Check,
}

/// Why a run stopped early.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Lib(Error),
    /// The check suite ran and these checks failed.
    Checks(Vec<String>),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn exit_code(f: &Failure) -> u8 {
    match f {
        Failure::Usage(_) => EXIT_USAGE,
        Failure::Checks(_) => EXIT_ACCURACY,
        Failure::Lib(e) => match e {
            Error::Parse { .. } | Error::Io(_) => EXIT_PARSE,
            Error::Validation { .. } | Error::Data(_) | Error::Ambiguity(_) => EXIT_VALIDATION,
            Error::Domain(_) | Error::Pole { .. } | Error::BoundaryAmbiguous(_) => EXIT_USAGE,
            Error::Accuracy { .. } | Error::Convergence { .. } => EXIT_ACCURACY,
        },
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    if cli.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
            eprintln!("error: could not start {} worker threads: {e}", cli.threads);
            return ExitCode::from(EXIT_USAGE);
        }
    }
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Usage(m) => eprintln!("error: {m}"),
                Failure::Lib(e) => eprintln!("error: {e}"),
                Failure::Checks(names) => eprintln!("error: failed checks: {}", names.join(", ")),
            }
            ExitCode::from(exit_code(&f))
        }
    }
}
