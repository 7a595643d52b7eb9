//! `openmap`: build, analyze and invert subsystem dynamical maps, and rerun
//! the two-qubit example against its closed forms.
//!
//! Exit codes: 0 success, 1 oracle mismatch, 2 input error, 3 precondition
//! failure (non-unitary `U`, singular or non-trace-preserving map).

mod angle;
mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use angle::parse_angle;

/// Default tolerance for oracle comparisons.
pub const DEFAULT_TOL: f64 = 1e-10;

#[derive(Debug, Parser)]
#[command(name = "openmap", version, about = "Affine subsystem dynamical maps from bipartite unitaries")]
pub struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,

    /// Tolerance for oracle comparisons.
    #[arg(long, global = true, env = "OPENMAP_TOL", default_value_t = DEFAULT_TOL)]
    pub tol: f64,

    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a fixed-mean-value (omega) or fixed-correlation (phi) map.
    Build {
        #[arg(value_enum)]
        kind: Kind,
        /// Unitary on S + R as a JSON matrix.
        #[arg(long)]
        unitary: PathBuf,
        /// Map parameters as JSON.
        #[arg(long)]
        params: PathBuf,
    },
    /// Invertibility, complete positivity and realizability of a map.
    Analyze {
        /// Affine map as JSON, as written by `build` or `invert`.
        #[arg(long)]
        map: PathBuf,
    },
    /// Inverse of a trace-preserving affine map.
    Invert {
        /// Affine map as JSON, as written by `build` or `invert`.
        #[arg(long)]
        map: PathBuf,
    },
    /// Rerun a two-qubit scenario against its closed forms.
    Demo {
        #[arg(value_enum)]
        name: Demo,
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Initial Bloch vector for the disconnection demo.
        #[arg(long, default_value = "1,0,0", value_parser = parse_bloch)]
        bloch: [f64; 3],
        /// Grid points per Bloch axis for the domain demo.
        #[arg(long, default_value_t = 20)]
        grid: usize,
        /// Sample this many random states instead of the grid.
        #[arg(long)]
        random: Option<usize>,
        /// Use the feasibility search, not only the canonical completion.
        #[arg(long)]
        thorough: bool,
        /// Write a CSV table (angle sweep or domain samples) here.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Decide whether a mean-value vector lies in a map's compatibility domain.
    Domain {
        #[arg(value_enum)]
        kind: Kind,
        /// Map parameters as JSON.
        #[arg(long)]
        params: PathBuf,
        /// Mean values of S, comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        means: Vec<f64>,
        /// Hold only the parameters this unitary couples to; without it every
        /// quantity in the parameter file is held.
        #[arg(long)]
        unitary: Option<PathBuf>,
        /// Use the feasibility search, not only the canonical completion.
        #[arg(long)]
        thorough: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Omega,
    Phi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Demo {
    FixedMean,
    FixedCorr,
    Disconnect,
    Domain,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct ScenarioArgs {
    /// Coupling angle: a number or a multiple of pi such as `pi/3`.
    #[arg(long, default_value = "pi/3", value_parser = parse_angle, allow_hyphen_values = true)]
    pub gamma: f64,
    /// Mean of Xi_3 in the state of R.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub xi3: f64,
    /// Correlation Gamma_13.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub corr13: f64,
    /// Correlation Gamma_23.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub corr23: f64,
    /// Fixed mean of Sigma_2 Xi_3.
    #[arg(long = "mean-s2x3", default_value_t = 0.0, allow_hyphen_values = true)]
    pub mean_s2x3: f64,
    /// Fixed mean of Sigma_1 Xi_3.
    #[arg(long = "mean-s1x3", default_value_t = 0.0, allow_hyphen_values = true)]
    pub mean_s1x3: f64,
}

fn parse_bloch(text: &str) -> Result<[f64; 3], String> {
    let v = angle::parse_reals(text)?;
    <[f64; 3]>::try_from(v).map_err(|v| format!("expected 3 components, got {}", v.len()))
}

/// Why a command stopped.
#[derive(Debug)]
pub enum Failure {
    Oracle(String),
    Input(String),
    Precondition(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Oracle(_) => 1,
            Failure::Input(_) => 2,
            Failure::Precondition(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Oracle(m) | Failure::Input(m) | Failure::Precondition(m) => m,
        }
    }
}

impl From<openmap_core::Error> for Failure {
    fn from(e: openmap_core::Error) -> Self {
        use openmap_core::Error as E;
        match e {
            E::NotUnitary { .. }
            | E::NotHermiticityPreserving(_)
            | E::NotTracePreserving(_)
            | E::NotUnital(_)
            | E::Singular { .. }
            | E::InconsistentVerdict { .. } => Failure::Precondition(e.to_string()),
            E::ZeroDimension
            | E::DimensionMismatch { .. }
            | E::NotHermitian { .. }
            | E::InvalidState(_)
            | E::InvalidParameters(_) => Failure::Input(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if !(cli.tol.is_finite() && cli.tol >= 0.0) {
        eprintln!("error: tolerance must be a finite non-negative number, got {}", cli.tol);
        return ExitCode::from(2);
    }
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
