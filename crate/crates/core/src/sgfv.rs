//! Scharfetter-Gummel finite volumes on the dual grid.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::ProblemSpec;
use crate::mesh::DualMesh;
use crate::numerics::{bernoulli, tridiag_solve, TridiagonalMatrix};

/// SG flux across a face from the cell holding `v1` to the one holding
/// `v2`, whose centres are `l` apart along `beta_dot_v`'s direction.
pub fn sg_face_flux(alpha: f64, beta_dot_v: f64, l: f64, v1: f64, v2: f64) -> Result<f64> {
    if !(alpha > 0.0) || !(l > 0.0) {
        return Err(Error::param("face flux needs alpha > 0 and l > 0"));
    }
    let x = beta_dot_v / alpha;
    Ok(alpha / l * (bernoulli(-x) * v1 - bernoulli(x) * v2))
}

/// Piecewise-constant values on the dual cells, indexed by their centres.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SgSolution {
    pub values: Vec<f64>,
    pub dual: DualMesh,
    pub problem: ProblemSpec,
}

impl SgSolution {
    /// Net outward SG flux minus the source integral on every interior
    /// dual cell.
    pub fn balance_residuals(&self) -> Vec<f64> {
        let p = &self.problem;
        let x = self.dual.centers();
        let v = &self.values;
        let flux = |i: usize| {
            let l = x[i + 1] - x[i];
            sg_face_flux(p.alpha, p.beta * l, l, v[i], v[i + 1]).unwrap_or(f64::NAN)
        };
        (1..v.len() - 1)
            .map(|i| flux(i) - flux(i - 1) - p.f * self.dual.width(i))
            .collect()
    }
}

/// Assembles and solves the SG system; boundary values are prescribed.
pub fn solve_sg(p: &ProblemSpec, dual: &DualMesh) -> Result<SgSolution> {
    p.validate()?;
    let x = dual.centers();
    let n = x.len() - 1;
    if n < 2 {
        return Err(Error::param("the dual grid needs at least 3 cells"));
    }
    // face i sits between centres i and i+1
    let faces: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let l = x[i + 1] - x[i];
            let s = p.beta * l / p.alpha;
            (p.alpha / l * bernoulli(-s), p.alpha / l * bernoulli(s))
        })
        .collect();

    let m = n - 1;
    let mut lower = Vec::with_capacity(m - 1);
    let mut diag = Vec::with_capacity(m);
    let mut upper = Vec::with_capacity(m - 1);
    let mut rhs = Vec::with_capacity(m);
    for i in 1..n {
        let (fwd_in, back_in) = faces[i - 1];
        let (fwd_out, back_out) = faces[i];
        let mut b = p.f * dual.width(i);
        if i == 1 {
            b += fwd_in * p.u_left;
        } else {
            lower.push(-fwd_in);
        }
        if i == n - 1 {
            b += back_out * p.u_right;
        } else {
            upper.push(-back_out);
        }
        diag.push(back_in + fwd_out);
        rhs.push(b);
    }
    let interior = tridiag_solve(&TridiagonalMatrix::new(lower, diag, upper)?, &rhs)?;

    let mut values = Vec::with_capacity(n + 1);
    values.push(p.u_left);
    values.extend(interior);
    values.push(p.u_right);
    Ok(SgSolution {
        values,
        dual: dual.clone(),
        problem: *p,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::exact_u;
    use crate::mesh::{build_dual, uniform_mesh};

    fn dual(n: usize) -> DualMesh {
        build_dual(&uniform_mesh((0.0, 1.0), n).unwrap())
    }

    #[test]
    fn constants_are_preserved() {
        let p = ProblemSpec {
            u_left: 1.0,
            u_right: 1.0,
            ..ProblemSpec::drift_diffusion(1.0, 7.0)
        };
        let s = solve_sg(&p, &dual(9)).unwrap();
        assert!(s.values.iter().all(|v| (v - 1.0).abs() < 1e-13));
    }

    #[test]
    fn nodally_exact_two_cells() {
        let p = ProblemSpec::drift_diffusion(1.0, 1.0);
        let s = solve_sg(&p, &dual(2)).unwrap();
        assert!((s.values[1] - 0.37754066879814546).abs() < 1e-15);
    }

    #[test]
    fn nodally_exact_four_cells() {
        let p = ProblemSpec::drift_diffusion(1.0, 4.0);
        let s = solve_sg(&p, &dual(4)).unwrap();
        for (i, v) in s.values.iter().enumerate() {
            let x = i as f64 / 4.0;
            let exact = ((4.0 * x).exp() - 1.0) / (4f64.exp() - 1.0);
            assert!((v - exact).abs() < 1e-12);
        }
    }

    #[test]
    fn nodally_exact_grid() {
        for &beta in &[-50.0, -3.0, 0.5, 10.0, 300.0] {
            for &n in &[2, 5, 16, 64] {
                for &f in &[0.0, 2.0] {
                    let p = ProblemSpec {
                        f,
                        ..ProblemSpec::drift_diffusion(1.0, beta)
                    };
                    let s = solve_sg(&p, &dual(n)).unwrap();
                    let scale = s.values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
                    for (x, v) in s.dual.centers().iter().zip(&s.values) {
                        let e = exact_u(&p, *x).unwrap();
                        assert!((v - e).abs() <= 1e-11 * scale, "beta={beta} n={n} f={f}");
                    }
                    for r in s.balance_residuals() {
                        assert!(r.abs() <= 1e-10 * scale.max(beta.abs()));
                    }
                }
            }
        }
    }

    #[test]
    fn face_flux_limits() {
        assert_eq!(sg_face_flux(2.0, 0.0, 0.5, 3.0, 1.0).unwrap(), 8.0);
        // constant state is advected
        let f = sg_face_flux(1.5, 4.0 * 0.2, 0.2, 2.0, 2.0).unwrap();
        assert!((f - 4.0 * 2.0).abs() < 1e-13);
        // full upwinding
        let beta = 1e4;
        let f = sg_face_flux(1.0, beta * 0.1, 0.1, 1.0, 0.0).unwrap();
        assert!((f / beta - 1.0).abs() < 1e-12);
        assert!(sg_face_flux(0.0, 1.0, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn m_matrix_and_upwind_limit() {
        for &s in &[-100.0, -1.0, 0.0, 1.0, 100.0] {
            let lower = -bernoulli(-s);
            let upper = -bernoulli(s);
            assert!(lower <= 0.0 && upper <= 0.0 && bernoulli(s) + bernoulli(-s) > 0.0);
        }
        // P = 100: row -> (-P, P, 0) in units of alpha/h
        let p = 100.0;
        assert!((bernoulli(-p) / p - 1.0).abs() < 1e-6);
        assert!(bernoulli(p) < 1e-6 * p);
    }
}
