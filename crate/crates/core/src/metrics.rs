//! Error functionals and observed convergence orders.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hdg::HdgSolution;
use crate::mesh::Mesh1D;
use crate::numerics::gauss_legendre;
use crate::sgfv::SgSolution;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    /// `max_i |u_hat_i - u(x_i)|`
    pub trace_linf: f64,
    /// `||u - u^h||_{L2}`, cell-wise Gauss quadrature
    pub u_l2: f64,
    /// `max_T |u(x_T) - u^h(x_T)|` at cell centres
    pub midpoint_linf: f64,
    pub flux_l2: Option<f64>,
}

/// Anything with values attached to the primal nodes.
pub trait NodalValues {
    fn nodes(&self) -> &[f64];
    fn nodal_values(&self) -> &[f64];
}

impl NodalValues for HdgSolution {
    fn nodes(&self) -> &[f64] {
        self.mesh.nodes()
    }
    fn nodal_values(&self) -> &[f64] {
        &self.trace
    }
}

impl NodalValues for SgSolution {
    fn nodes(&self) -> &[f64] {
        self.dual.centers()
    }
    fn nodal_values(&self) -> &[f64] {
        &self.values
    }
}

pub fn trace_error(sol: &impl NodalValues, oracle: impl Fn(f64) -> f64) -> f64 {
    sol.nodes()
        .iter()
        .zip(sol.nodal_values())
        .map(|(&x, &v)| (v - oracle(x)).abs())
        .fold(0.0, f64::max)
}

fn cellwise_l2(mesh: &Mesh1D, points: usize, error: impl Fn(usize, f64, f64) -> f64) -> f64 {
    let q = gauss_legendre(points.clamp(1, 64)).expect("clamped to a valid rule");
    let total: f64 = (0..mesh.cells())
        .map(|c| {
            let (xl, xr) = mesh.cell_bounds(c);
            let h = xr - xl;
            h * q.integrate(|t| {
                let e = error(c, t, xl + h * t);
                e * e
            })
        })
        .sum();
    total.sqrt()
}

/// L2 error of `u^h` with `k + 3` Gauss points per cell.
pub fn u_l2_error(sol: &HdgSolution, oracle: impl Fn(f64) -> f64) -> f64 {
    u_l2_error_with(sol, oracle, sol.degree + 3)
}

pub fn u_l2_error_with(sol: &HdgSolution, oracle: impl Fn(f64) -> f64, points: usize) -> f64 {
    cellwise_l2(&sol.mesh, points, |c, t, x| oracle(x) - sol.cell_uh(c, t))
}

pub fn flux_l2_error(sol: &HdgSolution, oracle: impl Fn(f64) -> f64) -> f64 {
    cellwise_l2(&sol.mesh, sol.degree + 3, |c, t, x| {
        oracle(x) - sol.cell_jh(c, t)
    })
}

pub fn midpoint_error(sol: &HdgSolution, oracle: impl Fn(f64) -> f64) -> f64 {
    (0..sol.mesh.cells())
        .map(|c| (oracle(sol.mesh.cell_center(c)) - sol.cell_uh(c, 0.5)).abs())
        .fold(0.0, f64::max)
}

pub fn error_report(
    sol: &HdgSolution,
    u: impl Fn(f64) -> f64,
    flux: Option<&dyn Fn(f64) -> f64>,
) -> ErrorReport {
    ErrorReport {
        trace_linf: trace_error(sol, &u),
        u_l2: u_l2_error(sol, &u),
        midpoint_linf: midpoint_error(sol, &u),
        flux_l2: flux.map(|j| flux_l2_error(sol, j)),
    }
}

/// Slopes `log(e_i / e_{i+1}) / log(h_i / h_{i+1})` of successive pairs;
/// `None` where an error is zero.
pub fn observed_order(errors: &[(f64, f64)]) -> Result<Vec<Option<f64>>> {
    if errors.len() < 2 {
        return Err(Error::param("observed order needs at least two meshes"));
    }
    if errors
        .windows(2)
        .any(|w| !(w[1].0 < w[0].0) || !(w[1].0 > 0.0))
    {
        return Err(Error::param(
            "mesh sizes must be positive and strictly decreasing",
        ));
    }
    Ok(errors
        .windows(2)
        .map(|w| {
            let ((h0, e0), (h1, e1)) = (w[0], w[1]);
            (e0 > 0.0 && e1 > 0.0 && e0.is_finite() && e1.is_finite())
                .then(|| (e0 / e1).ln() / (h0 / h1).ln())
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{exact_u, ProblemSpec};
    use crate::hdg::solve_hdg;
    use crate::mesh::uniform_mesh;

    #[test]
    fn orders_of_power_laws() {
        let quad: Vec<_> = [0.1, 0.05, 0.025]
            .iter()
            .map(|&h| (h, 3.0 * h * h))
            .collect();
        for s in observed_order(&quad).unwrap() {
            assert!((s.unwrap() - 2.0).abs() < 1e-12);
        }
        let lin: Vec<_> = [0.5, 0.2, 0.1].iter().map(|&h| (h, 7.0 * h)).collect();
        for s in observed_order(&lin).unwrap() {
            assert!((s.unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn order_edge_cases() {
        assert!(observed_order(&[(0.1, 1.0)]).is_err());
        assert!(observed_order(&[(0.1, 1.0), (0.2, 0.5)]).is_err());
        assert_eq!(
            observed_order(&[(0.1, 1.0), (0.05, 0.0)]).unwrap(),
            vec![None]
        );
    }

    #[test]
    fn constant_problem_has_no_error() {
        let p = ProblemSpec {
            u_left: 1.0,
            u_right: 1.0,
            ..ProblemSpec::drift_diffusion(1.0, 3.0)
        };
        let mesh = uniform_mesh((0.0, 1.0), 6).unwrap();
        let sol = solve_hdg(&p, &mesh, 2, 1.0).unwrap();
        let u = |x| exact_u(&p, x).unwrap();
        assert!(trace_error(&sol, u) < 1e-13);
        assert!(u_l2_error(&sol, u) < 1e-12);
        assert!(midpoint_error(&sol, u) < 1e-13);
    }

    #[test]
    fn linear_solution_is_represented_exactly() {
        let p = ProblemSpec::drift_diffusion(1.0, 0.0);
        let mesh = uniform_mesh((0.0, 1.0), 5).unwrap();
        for k in 1..=4 {
            let sol = solve_hdg(&p, &mesh, k, 2.0).unwrap();
            assert!(u_l2_error(&sol, |x| x) < 1e-12);
        }
    }

    #[test]
    fn shifting_both_sides_leaves_errors_unchanged() {
        let p = ProblemSpec::drift_diffusion(1.0, 5.0);
        let mesh = uniform_mesh((0.0, 1.0), 8).unwrap();
        let sol = solve_hdg(&p, &mesh, 1, 1.0).unwrap();
        let shifted_problem = ProblemSpec {
            u_left: p.u_left + 2.0,
            u_right: p.u_right + 2.0,
            ..p
        };
        // constants lie in the kernel, so the discrete solution shifts too
        let shifted = solve_hdg(&shifted_problem, &mesh, 1, 1.0).unwrap();
        let u = |x| exact_u(&p, x).unwrap();
        let us = |x| exact_u(&p, x).unwrap() + 2.0;
        assert!((trace_error(&sol, u) - trace_error(&shifted, us)).abs() < 1e-12);
        assert!((u_l2_error(&sol, u) - u_l2_error(&shifted, us)).abs() < 1e-12);
        assert!((midpoint_error(&sol, u) - midpoint_error(&shifted, us)).abs() < 1e-12);
    }

    #[test]
    fn quadrature_refinement_is_stable() {
        let p = ProblemSpec::drift_diffusion(1.0, 10.0);
        let mesh = uniform_mesh((0.0, 1.0), 8).unwrap();
        for k in 0..=3 {
            let sol = solve_hdg(&p, &mesh, k, 1.0).unwrap();
            let u = |x| exact_u(&p, x).unwrap();
            let base = u_l2_error(&sol, u);
            let fine = u_l2_error_with(&sol, u, 2 * (k + 3));
            assert!(
                ((base - fine) / fine).abs() < 1e-3,
                "k={k}: {base} vs {fine}"
            );
        }
    }
}
