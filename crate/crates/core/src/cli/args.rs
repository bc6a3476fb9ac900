use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::stabilization::TauSpec;

/// HDG(k) with Scharfetter-Gummel stabilization for 1D drift-diffusion.
#[derive(Debug, Parser)]
#[command(name = "sghdg", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one problem and report errors against the exact solution.
    Solve(SolveArgs),
    /// Print the mesh Peclet number, delta_k and tau_k.
    Tau(TauArgs),
    /// Trace, L2 and midpoint errors over a log-spaced range of fixed tau.
    SweepTau(SweepArgs),
    /// Errors and observed orders over a sequence of meshes.
    Convergence(ConvergenceArgs),
    /// Compare the HDG trace with the SG finite-volume solution.
    CompareSg(CompareArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct ProblemArgs {
    /// Polynomial degree.
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    /// Number of cells, or a comma-separated list for convergence runs.
    #[arg(long, default_value = "8", value_parser = parse_cells)]
    pub cells: CellList,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub beta: f64,
    /// Constant source term.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub f: f64,
    /// Dirichlet values `left,right`.
    #[arg(long, default_value = "0,1", value_parser = parse_pair, allow_hyphen_values = true)]
    pub bc: (f64, f64),
    #[arg(long, default_value = "0,1", value_parser = parse_pair, allow_hyphen_values = true)]
    pub domain: (f64, f64),
    /// `sg` or `fixed:VALUE`.
    #[arg(long, default_value = "sg")]
    pub tau: TauArg,
    /// Use tau = alpha/h when the Peclet number vanishes.
    #[arg(long)]
    pub degenerate_fallback: bool,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Also solve the SG finite-volume scheme and report the discrepancy.
    #[arg(long)]
    pub with_sg: bool,
}

#[derive(Debug, Clone, Args)]
pub struct TauArgs {
    #[arg(long, default_value_t = 0)]
    pub k: usize,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub beta: f64,
    /// Mesh size; defaults to 1 when `--peclet` is given.
    #[arg(long)]
    pub h: Option<f64>,
    /// Mesh Peclet number; overrides `beta h / alpha`.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "beta")]
    pub peclet: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    #[arg(long, default_value_t = 1e-3)]
    pub tau_min: f64,
    #[arg(long, default_value_t = 1e3)]
    pub tau_max: f64,
    #[arg(long, default_value_t = 61)]
    pub points: usize,
    /// gnuplot script plotting the CSV written to `--out`.
    #[arg(long)]
    pub plot_script: Option<PathBuf>,
    /// Worker threads; all cores when absent.
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct ConvergenceArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    #[arg(long)]
    pub plot_script: Option<PathBuf>,
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Largest accepted `max_i |u_hat_i - v_i|`, relative to `max(1, max |v_i|)`.
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellList(pub Vec<usize>);

fn parse_cells(s: &str) -> Result<CellList, String> {
    s.split(',')
        .map(|c| {
            c.trim()
                .parse::<usize>()
                .map_err(|_| format!("invalid cell count '{}'", c.trim()))
        })
        .collect::<Result<Vec<_>, _>>()
        .map(CellList)
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected two comma-separated values, got '{s}'"))?;
    let p = |v: &str| {
        v.trim()
            .parse::<f64>()
            .map_err(|_| format!("invalid number '{}'", v.trim()))
    };
    Ok((p(a)?, p(b)?))
}

/// Unvalidated `--tau` text; checked together with the rest of the
/// configuration so that a bad value exits with the validation code.
#[derive(Debug, Clone, PartialEq)]
pub struct TauArg(pub String);

impl std::str::FromStr for TauArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Ok(TauArg(s.to_string()))
    }
}

impl TauArg {
    pub fn resolve(&self, degenerate_fallback: bool) -> crate::Result<TauSpec> {
        match self.0.parse::<TauSpec>()? {
            TauSpec::Sg { .. } => Ok(TauSpec::Sg {
                degenerate_fallback,
            }),
            fixed => Ok(fixed),
        }
    }
}
