use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Float,
    Rational,
}

#[derive(Debug, Clone, Parser)]
#[command(name = "fracbilevel", version, about = "Checks optimality and duality claims for fractional bilevel programs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: GlobalArgs,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Point to check, comma separated (`x..., y...`); defaults to the problem's reference point.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub point: Option<String>,
    /// Arithmetic for the certificate search.
    #[arg(long, global = true, value_enum, default_value = "float")]
    pub mode: Mode,
    /// Override the x and y grid steps.
    #[arg(long, global = true)]
    pub step: Option<f64>,
    /// Sample count for randomized checks.
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for grid scans and sampling.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[arg(long, global = true)]
    pub skip_oracle: bool,
    /// Write the machine summary to this file.
    #[arg(long, global = true)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Convexificators, constraint qualification, star-shapedness and a stationarity certificate.
    CheckNecessary { file: PathBuf },
    /// Certificate plus generalized convexity, cross-checked by the grid oracle.
    CheckSufficient {
        file: PathBuf,
        /// Certificate file to verify instead of searching for one.
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Dual feasibility, weak-duality scan and the dual point built from a primal point.
    Duality {
        file: PathBuf,
        /// File with `dualpoint` blocks.
        #[arg(long)]
        dual: Option<PathBuf>,
        /// Build a dual point from a stationarity certificate at this primal point.
        #[arg(long, allow_hyphen_values = true)]
        from_primal: Option<String>,
    },
    /// Grid weak-Pareto verdict for a point, or the weak-Pareto set.
    Oracle {
        file: PathBuf,
        /// Tab-separated dump of the feasible grid points.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Convexificator checks only.
    Validate { file: PathBuf },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::CheckNecessary { .. } => "check-necessary",
            Command::CheckSufficient { .. } => "check-sufficient",
            Command::Duality { .. } => "duality",
            Command::Oracle { .. } => "oracle",
            Command::Validate { .. } => "validate",
        }
    }

    pub fn file(&self) -> &PathBuf {
        match self {
            Command::CheckNecessary { file }
            | Command::CheckSufficient { file, .. }
            | Command::Duality { file, .. }
            | Command::Oracle { file, .. }
            | Command::Validate { file } => file,
        }
    }
}
