use crate::error::{Error, Result};
use crate::numerics::{gauss_legendre, DenseMatrix, LagrangeBasis, LuFactors};

/// Blocks of the local HDG system on one cell.
///
/// Unknowns are ordered `(J_0..J_k, u_0..u_k)`. The first block row is the
/// flux equation tested with `phi_i`, the second the conservation equation
/// tested with `phi_i`. The trace values enter only through `b_l` and
/// `b_r` (coefficients of `u_hat` at the left and right endpoint).
#[derive(Debug, Clone, PartialEq)]
pub struct LocalBlocks {
    pub degree: usize,
    pub tau: f64,
    /// `(phi_j, phi_i)`
    pub a11: DenseMatrix,
    /// `-alpha (phi_j, phi_i') - beta (phi_j, phi_i)`
    pub a12: DenseMatrix,
    /// `-(phi_j, phi_i') + [phi_j phi_i nu]` over both endpoints
    pub a21: DenseMatrix,
    /// `tau <phi_j, phi_i>` over both endpoints
    pub a22: DenseMatrix,
    /// `(f, phi_i)` in the second block row
    pub b_f: Vec<f64>,
    pub b_l: Vec<f64>,
    pub b_r: Vec<f64>,
    unit_load: Vec<f64>,
    basis: LagrangeBasis,
}

pub fn assemble_local(
    k: usize,
    h: f64,
    alpha: f64,
    beta: f64,
    tau: f64,
    f: f64,
) -> Result<LocalBlocks> {
    if !(h > 0.0) {
        return Err(Error::param("cell width must be positive"));
    }
    if !(alpha > 0.0) {
        return Err(Error::param("alpha must be positive"));
    }
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(Error::param("tau must be positive"));
    }
    let basis = LagrangeBasis::new(k);
    let n = k + 1;
    let quad = gauss_legendre(k + 2)?;
    let samples: Vec<_> = quad
        .nodes
        .iter()
        .map(|&x| basis.eval_unchecked(x))
        .collect();

    // reference integrals: mass M_ij = int phi_i phi_j, and
    // D_ij = int phi_j phi_i' (derivative on the test function)
    let mut mass = DenseMatrix::zeros(n);
    let mut grad = DenseMatrix::zeros(n);
    let mut mean = vec![0.0; n];
    for ((v, d), &w) in samples.iter().zip(&quad.weights) {
        for i in 0..n {
            mean[i] += w * v[i];
            for j in 0..n {
                mass[(i, j)] += w * v[i] * v[j];
                grad[(i, j)] += w * v[j] * d[i];
            }
        }
    }
    let left = basis.left_trace();
    let right = basis.right_trace();

    let mut a11 = DenseMatrix::zeros(n);
    let mut a12 = DenseMatrix::zeros(n);
    let mut a21 = DenseMatrix::zeros(n);
    let mut a22 = DenseMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            a11[(i, j)] = h * mass[(i, j)];
            a12[(i, j)] = -alpha * grad[(i, j)] - beta * h * mass[(i, j)];
            a21[(i, j)] = -grad[(i, j)] + right[j] * right[i] - left[j] * left[i];
            a22[(i, j)] = tau * (right[j] * right[i] + left[j] * left[i]);
        }
    }

    let mut b_l = vec![0.0; 2 * n];
    let mut b_r = vec![0.0; 2 * n];
    let mut unit_load = vec![0.0; 2 * n];
    for i in 0..n {
        // first row: -<u_hat, alpha w nu>
        b_l[i] = alpha * left[i];
        b_r[i] = -alpha * right[i];
        // second row: <tau u_hat, v>
        b_l[n + i] = tau * left[i];
        b_r[n + i] = tau * right[i];
        unit_load[n + i] = h * mean[i];
    }
    let b_f = unit_load.iter().map(|v| f * v).collect();

    Ok(LocalBlocks {
        degree: k,
        tau,
        a11,
        a12,
        a21,
        a22,
        b_f,
        b_l,
        b_r,
        unit_load,
        basis,
    })
}

impl LocalBlocks {
    pub fn basis(&self) -> &LagrangeBasis {
        &self.basis
    }

    /// Full `2(k+1)` local matrix `[[A11, A12], [A21, A22]]`.
    pub fn system_matrix(&self) -> DenseMatrix {
        let n = self.degree + 1;
        let mut m = DenseMatrix::zeros(2 * n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = self.a11[(i, j)];
                m[(i, n + j)] = self.a12[(i, j)];
                m[(n + i, j)] = self.a21[(i, j)];
                m[(n + i, n + j)] = self.a22[(i, j)];
            }
        }
        m
    }

    /// Load vector for `f = 1`.
    pub fn unit_load(&self) -> &[f64] {
        &self.unit_load
    }

    /// Right-hand side for given trace values and source.
    pub fn rhs(&self, u_left: f64, u_right: f64, f: f64) -> Vec<f64> {
        (0..self.b_l.len())
            .map(|i| u_left * self.b_l[i] + u_right * self.b_r[i] + f * self.unit_load[i])
            .collect()
    }
}

/// A factored local system together with its responses to unit trace
/// values and unit source, reduced to the numerical-flux functionals at
/// the two cell endpoints.
///
/// The outward numerical flux at the right endpoint is
/// `right[0] u_hat_l + right[1] u_hat_r + right[2] f`, and likewise for the
/// left endpoint.
#[derive(Debug, Clone)]
pub struct LocalCondensation {
    blocks: LocalBlocks,
    lu: LuFactors,
    right: [f64; 3],
    left: [f64; 3],
}

impl LocalCondensation {
    pub fn new(blocks: LocalBlocks) -> Result<Self> {
        let lu = blocks.system_matrix().lu()?;
        let x_l = lu.solve(&blocks.b_l)?;
        let x_r = lu.solve(&blocks.b_r)?;
        let x_f = lu.solve(&blocks.unit_load)?;
        let tau = blocks.tau;
        let pr = |x: &[f64]| Self::right_functional(&blocks, x);
        let pl = |x: &[f64]| Self::left_functional(&blocks, x);
        let right = [pr(&x_l), pr(&x_r) - tau, pr(&x_f)];
        let left = [pl(&x_l) - tau, pl(&x_r), pl(&x_f)];
        Ok(LocalCondensation {
            blocks,
            lu,
            right,
            left,
        })
    }

    /// `J(1) + tau u(1)` for a local state vector.
    fn right_functional(blocks: &LocalBlocks, x: &[f64]) -> f64 {
        let n = blocks.degree + 1;
        let phi = blocks.basis.right_trace();
        (0..n)
            .map(|j| phi[j] * (x[j] + blocks.tau * x[n + j]))
            .sum()
    }

    /// `-J(0) + tau u(0)` for a local state vector.
    fn left_functional(blocks: &LocalBlocks, x: &[f64]) -> f64 {
        let n = blocks.degree + 1;
        let phi = blocks.basis.left_trace();
        (0..n)
            .map(|j| phi[j] * (-x[j] + blocks.tau * x[n + j]))
            .sum()
    }

    pub fn blocks(&self) -> &LocalBlocks {
        &self.blocks
    }

    /// Coefficients of the outward numerical flux at the right endpoint
    /// with respect to `(u_hat_l, u_hat_r, f)`.
    pub fn right_flux_map(&self) -> [f64; 3] {
        self.right
    }

    pub fn left_flux_map(&self) -> [f64; 3] {
        self.left
    }

    /// Local state `(J, u)` for known trace values and source.
    pub fn recover(&self, u_left: f64, u_right: f64, f: f64) -> Result<Vec<f64>> {
        self.lu.solve(&self.blocks.rhs(u_left, u_right, f))
    }
}
