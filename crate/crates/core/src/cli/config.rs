use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use super::args::{
    CompareArgs, ConvergenceArgs, Format, OutputArgs, ProblemArgs, SolveArgs, SweepArgs,
};
use crate::error::{Error, Result};
use crate::exact::ProblemSpec;
use crate::stabilization::TauSpec;

/// Highest degree accepted on the command line; the Gauss rules stop at 64
/// points and equispaced Lagrange bases are useless well before that.
pub const MAX_DEGREE: usize = 32;

/// Log-spaced range of fixed tau values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRange {
    pub tau_min: f64,
    pub tau_max: f64,
    pub points: usize,
    pub log_spacing: bool,
}

impl SweepRange {
    pub fn values(&self) -> Vec<f64> {
        let n = self.points;
        if n == 1 {
            return vec![self.tau_min];
        }
        let (a, b) = (self.tau_min.ln(), self.tau_max.ln());
        (0..n)
            .map(|i| match i {
                0 => self.tau_min,
                _ if i == n - 1 => self.tau_max,
                _ => (a + (b - a) * i as f64 / (n - 1) as f64).exp(),
            })
            .collect()
    }
}

/// Fully resolved and validated run configuration, echoed into every output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub subcommand: String,
    pub problem: ProblemSpec,
    pub k: usize,
    pub cells: Vec<usize>,
    pub tau: TauSpec,
    pub sweep: Option<SweepRange>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub plot_script: Option<PathBuf>,
    pub jobs: Option<usize>,
    pub tolerance: Option<f64>,
    pub with_sg: bool,
}

impl RunConfig {
    fn base(name: &str, p: &ProblemArgs, o: &OutputArgs) -> Result<Self> {
        Ok(RunConfig {
            subcommand: name.to_string(),
            problem: ProblemSpec {
                alpha: p.alpha,
                beta: p.beta,
                f: p.f,
                u_left: p.bc.0,
                u_right: p.bc.1,
                domain: p.domain,
            },
            k: p.k,
            cells: p.cells.0.clone(),
            tau: p.tau.resolve(p.degenerate_fallback)?,
            sweep: None,
            out: o.out.clone(),
            format: o.format,
            plot_script: None,
            jobs: None,
            tolerance: None,
            with_sg: false,
        })
    }

    pub fn solve(a: &SolveArgs) -> Result<Self> {
        let mut c = Self::base("solve", &a.problem, &a.output)?;
        c.with_sg = a.with_sg;
        c.single_mesh()?;
        c.validate()?;
        Ok(c)
    }

    pub fn sweep(a: &SweepArgs) -> Result<Self> {
        let mut c = Self::base("sweep-tau", &a.problem, &a.output)?;
        c.sweep = Some(SweepRange {
            tau_min: a.tau_min,
            tau_max: a.tau_max,
            points: a.points,
            log_spacing: true,
        });
        c.plot_script = a.plot_script.clone();
        c.jobs = a.jobs;
        c.single_mesh()?;
        c.validate()?;
        Ok(c)
    }

    pub fn convergence(a: &ConvergenceArgs) -> Result<Self> {
        let mut c = Self::base("convergence", &a.problem, &a.output)?;
        c.plot_script = a.plot_script.clone();
        c.jobs = a.jobs;
        if c.cells.len() < 3 {
            return Err(Error::param("a convergence study needs at least 3 meshes"));
        }
        if c.cells.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::param("cell counts must be strictly increasing"));
        }
        c.validate()?;
        Ok(c)
    }

    pub fn compare(a: &CompareArgs) -> Result<Self> {
        let mut c = Self::base("compare-sg", &a.problem, &a.output)?;
        c.tolerance = Some(a.tolerance);
        c.with_sg = true;
        c.single_mesh()?;
        c.validate()?;
        Ok(c)
    }

    fn single_mesh(&self) -> Result<()> {
        if self.cells.len() != 1 {
            return Err(Error::param(format!(
                "{} takes a single cell count",
                self.subcommand
            )));
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.problem.validate()?;
        if self.k > MAX_DEGREE {
            return Err(Error::param(format!("k must be at most {MAX_DEGREE}")));
        }
        if let Some(&n) = self.cells.iter().find(|&&n| n < 2) {
            return Err(Error::param(format!("cells must be at least 2, got {n}")));
        }
        if let Some(s) = &self.sweep {
            if s.points == 0 {
                return Err(Error::param("points must be at least 1"));
            }
            if !(s.tau_min > 0.0) || !s.tau_max.is_finite() {
                return Err(Error::param("tau-min must be positive and tau-max finite"));
            }
            let ordered = if s.points == 1 {
                s.tau_min <= s.tau_max
            } else {
                s.tau_min < s.tau_max
            };
            if !ordered {
                return Err(Error::param("tau-min must be smaller than tau-max"));
            }
        }
        if self.jobs == Some(0) {
            return Err(Error::param("jobs must be at least 1"));
        }
        if let Some(t) = self.tolerance {
            if !(t > 0.0) || !t.is_finite() {
                return Err(Error::param("tolerance must be positive"));
            }
        }
        if self.plot_script.is_some() && self.out.is_none() {
            return Err(Error::param("--plot-script needs --out for the data file"));
        }
        if self.plot_script.is_some() && self.format == Some(Format::Json) {
            return Err(Error::param("--plot-script needs CSV output"));
        }
        Ok(())
    }
}
