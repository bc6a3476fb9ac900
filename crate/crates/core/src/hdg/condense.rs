use serde::{Deserialize, Serialize};

use super::local::{assemble_local, LocalCondensation};
use crate::error::{Error, Result};
use crate::mesh::Mesh1D;
use crate::numerics::TridiagonalMatrix;

/// Dimensionless coefficients of one condensed trace equation,
/// `(alpha/h) (c1 u_{i-1} + c2 u_i + c3 u_{i+1}) = h f r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CondensedCoefficients {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub r: f64,
}

/// Trace system over the interior nodes `u_1..u_{N-1}`, Dirichlet values
/// moved to the right-hand side.
#[derive(Debug, Clone)]
pub struct CondensedSystem {
    pub coefficients: CondensedCoefficients,
    pub matrix: TridiagonalMatrix,
    pub rhs: Vec<f64>,
    pub(crate) cells: Vec<LocalCondensation>,
}

impl CondensedSystem {
    pub fn cells(&self) -> &[LocalCondensation] {
        &self.cells
    }
}

fn cell_condensation(
    cell: usize,
    k: usize,
    h: f64,
    alpha: f64,
    beta: f64,
    tau: f64,
) -> Result<LocalCondensation> {
    let blocks = assemble_local(k, h, alpha, beta, tau, 0.0)?;
    LocalCondensation::new(blocks).map_err(|e| Error::Condensation {
        cell,
        source: Box::new(e),
    })
}

/// Couples the per-cell flux maps through the transmission condition
/// (sum of outward numerical fluxes at each interior node vanishes).
pub fn condense(
    k: usize,
    mesh: &Mesh1D,
    alpha: f64,
    beta: f64,
    tau: f64,
    f: f64,
    bc: (f64, f64),
) -> Result<CondensedSystem> {
    if !(alpha > 0.0) {
        return Err(Error::param("alpha must be positive"));
    }
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(Error::param("tau must be positive"));
    }
    let n = mesh.cells();
    let cells = (0..n)
        .map(|c| {
            let (xl, xr) = mesh.cell_bounds(c);
            cell_condensation(c, k, xr - xl, alpha, beta, tau)
        })
        .collect::<Result<Vec<_>>>()?;

    let m = n - 1;
    let mut lower = Vec::with_capacity(m.saturating_sub(1));
    let mut diag = Vec::with_capacity(m);
    let mut upper = Vec::with_capacity(m.saturating_sub(1));
    let mut rhs = Vec::with_capacity(m);
    for node in 1..n {
        let left_cell = &cells[node - 1];
        let right_cell = &cells[node];
        // left_cell sees this node as its right endpoint
        let [a1, a2l, fl] = left_cell.right_flux_map();
        let [a2r, a3, fr] = right_cell.left_flux_map();
        let mut b = -f * (fl + fr);
        if node == 1 {
            b -= a1 * bc.0;
        } else {
            lower.push(a1);
        }
        if node == n - 1 {
            b -= a3 * bc.1;
        } else {
            upper.push(a3);
        }
        diag.push(a2l + a2r);
        rhs.push(b);
    }

    let h = mesh.h();
    let coefficients = dimensionless(&cells[0], &cells[1], h, alpha);
    Ok(CondensedSystem {
        coefficients,
        matrix: TridiagonalMatrix::new(lower, diag, upper)?,
        rhs,
        cells,
    })
}

fn dimensionless(
    left_cell: &LocalCondensation,
    right_cell: &LocalCondensation,
    h: f64,
    alpha: f64,
) -> CondensedCoefficients {
    let [a1, a2l, fl] = left_cell.right_flux_map();
    let [a2r, a3, fr] = right_cell.left_flux_map();
    let scale = h / alpha;
    CondensedCoefficients {
        c1: a1 * scale,
        c2: (a2l + a2r) * scale,
        c3: a3 * scale,
        r: -(fl + fr) / h,
    }
}

/// Condensed coefficients as functions of `delta = tau h / alpha` and the
/// mesh Peclet number, evaluated on a unit reference cell.
pub fn extract_coeffs(k: usize, delta: f64, peclet: f64) -> Result<CondensedCoefficients> {
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::param("delta must be positive"));
    }
    if !peclet.is_finite() {
        return Err(Error::param("Peclet number must be finite"));
    }
    let cell = cell_condensation(0, k, 1.0, 1.0, peclet, delta)?;
    Ok(dimensionless(&cell, &cell, 1.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::uniform_mesh;
    use crate::numerics::{bernoulli, tridiag_solve};

    #[test]
    fn piecewise_constant_coefficients_in_closed_form() {
        // hand condensation of the k = 0 local system:
        // c1 = 1 + (P + delta)/2, c3 = 1 - (P - delta)/2, c2 = -(2 + delta)
        for &(delta, p) in &[(0.3, 0.2), (1.0, -4.0), (5.0, 10.0)] {
            let c = extract_coeffs(0, delta, p).unwrap();
            assert!((c.c1 - (1.0 + 0.5 * (p + delta))).abs() < 1e-13);
            assert!((c.c3 - (1.0 - 0.5 * (p - delta))).abs() < 1e-13);
            assert!((c.c2 + 2.0 + delta).abs() < 1e-13);
            assert!((c.r + 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn coefficient_identities() {
        for k in 0..=6 {
            for &delta in &[0.05, 0.3, 1.0, 5.0, 40.0] {
                for &p in &[-10.0, -1.0, 0.2, 1.0, 10.0] {
                    let c = extract_coeffs(k, delta, p).unwrap();
                    let scale = c.c1.abs().max(c.c3.abs()).max(1.0);
                    assert!(
                        (c.r + 1.0).abs() < 1e-11,
                        "k={k} d={delta} P={p}: r={}",
                        c.r
                    );
                    assert!((c.c1 + c.c2 + c.c3).abs() < 1e-11 * scale);
                    assert!((c.c3 - c.c1 + p).abs() < 1e-11 * scale);
                    let m = extract_coeffs(k, delta, -p).unwrap();
                    assert!((m.c1 - c.c3).abs() < 1e-11 * scale);
                }
            }
        }
    }

    #[test]
    fn rejects_nonpositive_delta() {
        assert!(extract_coeffs(1, 0.0, 1.0).is_err());
        assert!(extract_coeffs(1, -1.0, 1.0).is_err());
    }

    #[test]
    fn physical_rows_scale_to_reference_coefficients() {
        let (alpha, beta, tau) = (0.4, 6.0, 3.0);
        let mesh = uniform_mesh((-1.0, 2.0), 9).unwrap();
        let h = mesh.h();
        let sys = condense(2, &mesh, alpha, beta, tau, 1.0, (0.0, 0.0)).unwrap();
        let reference = extract_coeffs(2, tau * h / alpha, beta * h / alpha).unwrap();
        let got = sys.coefficients;
        for (a, b) in [
            (got.c1, reference.c1),
            (got.c2, reference.c2),
            (got.c3, reference.c3),
            (got.r, reference.r),
        ] {
            assert!((a - b).abs() < 1e-12 * b.abs().max(1.0), "{a} vs {b}");
        }
    }

    #[test]
    fn toeplitz_rows() {
        let mesh = uniform_mesh((0.0, 1.0), 12).unwrap();
        let sys = condense(3, &mesh, 1.0, 7.0, 2.0, 0.0, (0.0, 1.0)).unwrap();
        let t = &sys.matrix;
        let (l0, d0, u0) = t.row(1);
        for i in 2..t.dim() - 1 {
            let (l, d, u) = t.row(i);
            for (a, b) in [
                (l.unwrap(), l0.unwrap()),
                (d, d0),
                (u.unwrap(), u0.unwrap()),
            ] {
                assert!((a - b).abs() <= 1e-12 * b.abs());
            }
        }
    }

    #[test]
    fn constants_solve_condensed_system() {
        let mesh = uniform_mesh((0.0, 1.0), 6).unwrap();
        for k in 0..=4 {
            let sys = condense(k, &mesh, 1.0, 3.0, 1.5, 0.0, (1.0, 1.0)).unwrap();
            let u = tridiag_solve(&sys.matrix, &sys.rhs).unwrap();
            assert!(u.iter().all(|v| (v - 1.0).abs() < 1e-12));
        }
    }

    #[test]
    fn two_cell_linear_solution() {
        // on [-h, h] with f = beta/h and traces (-1, 1), u = x/h gives a zero middle trace
        for k in 1..=5 {
            let h = 0.5;
            let beta = 3.0;
            let mesh = uniform_mesh((-h, h), 2).unwrap();
            let sys = condense(k, &mesh, 1.0, beta, 2.0, beta / h, (-1.0, 1.0)).unwrap();
            let u = tridiag_solve(&sys.matrix, &sys.rhs).unwrap();
            assert!(u[0].abs() < 1e-12, "k={k}: {}", u[0]);
        }
    }

    #[test]
    fn sg_coefficient_at_linear_delta() {
        // delta_1 from the closed form reproduces c1 = B(-P)
        for &p in &[0.3f64, 1.0, 4.0] {
            let e = p.exp();
            let num = e * (p * p - 6.0 * p + 12.0) - (p * p + 6.0 * p + 12.0);
            let den = e * (2.0 - p) - (p + 2.0);
            let delta = -num / den;
            let c = extract_coeffs(1, delta, p).unwrap();
            assert!((c.c1 - bernoulli(-p)).abs() < 1e-10);
        }
    }
}
