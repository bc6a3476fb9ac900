use serde::{Deserialize, Serialize};

use super::condense::condense;
use crate::error::{Error, Result};
use crate::exact::ProblemSpec;
use crate::mesh::Mesh1D;
use crate::numerics::{tridiag_solve, LagrangeBasis};

/// Trace values at the primal nodes plus the per-cell Lagrange
/// coefficients of `u^h` and `J^h`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HdgSolution {
    pub trace: Vec<f64>,
    pub u_coeffs: Vec<Vec<f64>>,
    pub flux_coeffs: Vec<Vec<f64>>,
    pub degree: usize,
    pub tau: f64,
    pub mesh: Mesh1D,
    pub problem: ProblemSpec,
}

pub fn solve_hdg(p: &ProblemSpec, mesh: &Mesh1D, k: usize, tau: f64) -> Result<HdgSolution> {
    p.validate()?;
    let (a, b) = mesh.domain();
    let tol = 1e-12 * p.length().max(1.0);
    if (a - p.domain.0).abs() > tol || (b - p.domain.1).abs() > tol {
        return Err(Error::param(format!(
            "mesh covers [{a}, {b}] but the problem is posed on [{}, {}]",
            p.domain.0, p.domain.1
        )));
    }
    let system = condense(k, mesh, p.alpha, p.beta, tau, p.f, (p.u_left, p.u_right))?;
    let interior = tridiag_solve(&system.matrix, &system.rhs)?;

    let mut trace = Vec::with_capacity(mesh.cells() + 1);
    trace.push(p.u_left);
    trace.extend(interior);
    trace.push(p.u_right);

    let n = k + 1;
    let mut u_coeffs = Vec::with_capacity(mesh.cells());
    let mut flux_coeffs = Vec::with_capacity(mesh.cells());
    for (c, cell) in system.cells.iter().enumerate() {
        let x = cell.recover(trace[c], trace[c + 1], p.f)?;
        flux_coeffs.push(x[..n].to_vec());
        u_coeffs.push(x[n..].to_vec());
    }

    Ok(HdgSolution {
        trace,
        u_coeffs,
        flux_coeffs,
        degree: k,
        tau,
        mesh: mesh.clone(),
        problem: *p,
    })
}

impl HdgSolution {
    fn basis(&self) -> LagrangeBasis {
        LagrangeBasis::new(self.degree)
    }

    /// `u^h(x)`; at interior nodes the limit from the left cell.
    pub fn evaluate_uh(&self, x: f64) -> Result<f64> {
        let (cell, t) = self.mesh.locate(x)?;
        Ok(self.basis().combine(&self.u_coeffs[cell], t))
    }

    /// `J^h(x)`; at interior nodes the limit from the left cell.
    pub fn evaluate_jh(&self, x: f64) -> Result<f64> {
        let (cell, t) = self.mesh.locate(x)?;
        Ok(self.basis().combine(&self.flux_coeffs[cell], t))
    }

    /// `u^h` on `cell` at reference coordinate `t`.
    pub fn cell_uh(&self, cell: usize, t: f64) -> f64 {
        self.basis().combine(&self.u_coeffs[cell], t)
    }

    pub fn cell_jh(&self, cell: usize, t: f64) -> f64 {
        self.basis().combine(&self.flux_coeffs[cell], t)
    }

    /// Outward numerical fluxes `(left, right)` of a cell.
    pub fn numerical_fluxes(&self, cell: usize) -> (f64, f64) {
        let u = |t| self.cell_uh(cell, t);
        let j = |t| self.cell_jh(cell, t);
        let left = -j(0.0) + self.tau * (u(0.0) - self.trace[cell]);
        let right = j(1.0) + self.tau * (u(1.0) - self.trace[cell + 1]);
        (left, right)
    }

    /// Sum of the two outward numerical fluxes at every interior node;
    /// zero up to round-off for a converged solve.
    pub fn transmission_residuals(&self) -> Vec<f64> {
        (1..self.mesh.cells())
            .map(|node| self.numerical_fluxes(node - 1).1 + self.numerical_fluxes(node).0)
            .collect()
    }

    /// Cell conservation defect: net outward numerical flux minus the
    /// integral of the source.
    pub fn balance_residuals(&self) -> Vec<f64> {
        (0..self.mesh.cells())
            .map(|c| {
                let (l, r) = self.numerical_fluxes(c);
                let (xl, xr) = self.mesh.cell_bounds(c);
                l + r - self.problem.f * (xr - xl)
            })
            .collect()
    }
}
