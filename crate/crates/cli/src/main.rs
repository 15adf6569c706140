//! `hopf-trunc`: truncated spectral measures and duality checks for complex
//! Hadamard matrices.
//!
//! Exit codes: 0 success, 1 a mathematical check failed, 2 usage or parse
//! error, 3 resource cap exceeded.

mod commands;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hopf_trunc::{Config, Error};

#[derive(Debug, Parser)]
#[command(name = "hopf-trunc", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Pass threshold for duality residuals.
    #[arg(long, global = true, default_value_t = 1e-8, value_parser = positive_f64)]
    pub tol: f64,

    /// Largest dimension of any dense matrix the run may form.
    #[arg(long, global = true, default_value_t = 4096, value_parser = clap::value_parser!(u64).range(1..))]
    pub cap: u64,

    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Bound on `||H_ij| - 1|` when validating matrices.
    #[arg(long, global = true, default_value_t = 1e-10, value_parser = positive_f64)]
    pub unimodular_tol: f64,

    /// Row orthogonality bound, in units of `N`.
    #[arg(long, global = true, default_value_t = 1e-8, value_parser = positive_f64)]
    pub orthogonal_factor: f64,

    /// Eigenvalue clustering tolerance, in units of `N`.
    #[arg(long, global = true, default_value_t = 1e-6, value_parser = positive_f64)]
    pub cluster_factor: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the Hadamard conditions for a matrix spec.
    Validate {
        spec: String,
        /// Also write the matrix as JSON to this path.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Truncated law μ^r as a list of atoms.
    Measure {
        spec: String,
        #[arg(short, long)]
        r: usize,
    },
    /// Table of c_p^r and γ_p^r.
    Moments {
        spec: String,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        p_max: u64,
        #[arg(long)]
        r_max: usize,
    },
    /// Cesàro averages of c_p^r and the resulting Haar moment estimate.
    Cesaro {
        spec: String,
        #[arg(short, value_parser = clap::value_parser!(u64).range(1..))]
        p: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        k_max: u64,
        /// Convergence tolerance of the estimate.
        #[arg(long, default_value_t = 1e-6, value_parser = positive_f64)]
        haar_tol: f64,
    },
    /// Moment/truncation duality residuals between H and its transpose.
    Duality {
        spec: String,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        p_max: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        r_max: u64,
    },
    /// Self-duality residuals of a Diță deformation.
    DitaCheck {
        #[arg(value_parser = clap::value_parser!(u64).range(1..))]
        m: u64,
        #[arg(value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        /// Phase source: `seed=UINT` or `file=PATH`.
        phases: String,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        p_max: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        r_max: u64,
    },
    /// Time structured against dense moment evaluation for a Diță deformation.
    Bench {
        #[arg(value_parser = clap::value_parser!(u64).range(1..))]
        m: u64,
        #[arg(value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        /// Phase source: `seed=UINT` or `file=PATH`.
        phases: String,
        #[arg(short, value_parser = clap::value_parser!(u64).range(1..))]
        p: u64,
        #[arg(short, value_parser = clap::value_parser!(u64).range(1..))]
        r: u64,
        #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
        reps: u64,
    },
    /// Write the matrix of a spec as JSON.
    Gen { spec: String },
}

fn positive_f64(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() && v > 0.0 => Ok(v),
        Ok(_) => Err("must be a positive finite number".into()),
        Err(e) => Err(e.to_string()),
    }
}

impl Cli {
    pub fn config(&self) -> Config {
        Config {
            size_cap: usize::try_from(self.cap).unwrap_or(usize::MAX),
            unimodular_tol: self.unimodular_tol,
            orthogonal_factor: self.orthogonal_factor,
            cluster_factor: self.cluster_factor,
            check_tol: self.tol,
        }
    }
}

/// Outcome of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    CheckFailed,
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::CapExceeded { .. } => 3,
        e if e.is_usage() => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = hopf_trunc::selftest::run_selftest() {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    match commands::run(&cli) {
        Ok(Status::Pass) => ExitCode::SUCCESS,
        Ok(Status::CheckFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
