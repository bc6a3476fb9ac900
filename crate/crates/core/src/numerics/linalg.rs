use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};

/// Small dense square matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        DenseMatrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::param("matrix rows must form a square array"));
        }
        Ok(DenseMatrix {
            n,
            data: rows.concat(),
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.n)
            .map(|i| self.row(i).iter().map(|a| a.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// LU factorization with partial pivoting.
    ///
    /// Fails with [`Error::Singular`] when a pivot falls below
    /// `1e-14 * ||A||_inf`.
    pub fn lu(&self) -> Result<LuFactors> {
        let n = self.n;
        let mut a = self.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let threshold = 1e-14 * self.norm_inf();
        for col in 0..n {
            let (p, pmax) = (col..n)
                .map(|r| (r, a[r * n + col].abs()))
                .fold((col, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if !(pmax > threshold) {
                return Err(Error::Singular {
                    pivot: col,
                    value: pmax,
                });
            }
            if p != col {
                for j in 0..n {
                    a.swap(p * n + j, col * n + j);
                }
                perm.swap(p, col);
            }
            let pivot = a[col * n + col];
            for r in col + 1..n {
                let factor = a[r * n + col] / pivot;
                a[r * n + col] = factor;
                if factor != 0.0 {
                    for j in col + 1..n {
                        a[r * n + j] -= factor * a[col * n + j];
                    }
                }
            }
        }
        Ok(LuFactors { n, lu: a, perm })
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

/// Packed `PA = LU` factors; reusable across right-hand sides.
#[derive(Debug, Clone)]
pub struct LuFactors {
    n: usize,
    lu: Vec<f64>,
    perm: Vec<usize>,
}

impl LuFactors {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        let n = self.n;
        if b.len() != n {
            return Err(Error::param(format!(
                "right-hand side has length {}, expected {n}",
                b.len()
            )));
        }
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let s: f64 = (0..i).map(|j| self.lu[i * n + j] * x[j]).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|j| self.lu[i * n + j] * x[j]).sum();
            x[i] = (x[i] - s) / self.lu[i * n + i];
        }
        Ok(x)
    }

    pub fn solve_many(&self, rhs: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
        rhs.iter().map(|b| self.solve(b)).collect()
    }
}

pub fn dense_solve(a: &DenseMatrix, b: &[f64]) -> Result<Vec<f64>> {
    if b.len() != a.dim() {
        return Err(Error::param(format!(
            "right-hand side has length {}, matrix is {}x{}",
            b.len(),
            a.dim(),
            a.dim()
        )));
    }
    a.lu()?.solve(b)
}

/// Tridiagonal matrix stored by diagonals: `lower[i]` sits at `(i+1, i)`,
/// `upper[i]` at `(i, i+1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalMatrix {
    lower: Vec<f64>,
    diag: Vec<f64>,
    upper: Vec<f64>,
}

impl TridiagonalMatrix {
    pub fn new(lower: Vec<f64>, diag: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        let n = diag.len();
        if n == 0 {
            return Err(Error::param("tridiagonal matrix must be non-empty"));
        }
        if lower.len() != n - 1 || upper.len() != n - 1 {
            return Err(Error::param(format!(
                "off-diagonals must have length {} (got {} and {})",
                n - 1,
                lower.len(),
                upper.len()
            )));
        }
        Ok(TridiagonalMatrix { lower, diag, upper })
    }

    /// Constant-diagonal matrix with rows `(sub, main, sup)`.
    pub fn toeplitz(n: usize, sub: f64, main: f64, sup: f64) -> Result<Self> {
        let m = n.saturating_sub(1);
        Self::new(vec![sub; m], vec![main; n], vec![sup; m])
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    /// Entries `(i, i-1)`, `(i, i)`, `(i, i+1)`, absent ones as `None`.
    pub fn row(&self, i: usize) -> (Option<f64>, f64, Option<f64>) {
        let sub = if i > 0 { Some(self.lower[i - 1]) } else { None };
        let sup = self.upper.get(i).copied();
        (sub, self.diag[i], sup)
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let (l, d, u) = self.row(i);
                let mut s = d * x[i];
                if let Some(l) = l {
                    s += l * x[i - 1];
                }
                if let Some(u) = u {
                    s += u * x[i + 1];
                }
                s
            })
            .collect()
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let n = self.dim();
        let mut m = DenseMatrix::zeros(n);
        for i in 0..n {
            let (l, d, u) = self.row(i);
            m[(i, i)] = d;
            if let Some(l) = l {
                m[(i, i - 1)] = l;
            }
            if let Some(u) = u {
                m[(i, i + 1)] = u;
            }
        }
        m
    }
}

/// Thomas algorithm. A pivot that is exactly zero (or non-finite) during
/// elimination yields [`Error::Singular`].
pub fn tridiag_solve(t: &TridiagonalMatrix, rhs: &[f64]) -> Result<Vec<f64>> {
    let n = t.dim();
    if rhs.len() != n {
        return Err(Error::param(format!(
            "right-hand side has length {}, system has dimension {n}",
            rhs.len()
        )));
    }
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut pivot = t.diag[0];
    if pivot == 0.0 || !pivot.is_finite() {
        return Err(Error::Singular {
            pivot: 0,
            value: pivot,
        });
    }
    if n > 1 {
        c[0] = t.upper[0] / pivot;
    }
    d[0] = rhs[0] / pivot;
    for i in 1..n {
        pivot = t.diag[i] - t.lower[i - 1] * c[i - 1];
        if pivot == 0.0 || !pivot.is_finite() {
            return Err(Error::Singular {
                pivot: i,
                value: pivot,
            });
        }
        if i < n - 1 {
            c[i] = t.upper[i] / pivot;
        }
        d[i] = (rhs[i] - t.lower[i - 1] * d[i - 1]) / pivot;
    }
    for i in (0..n - 1).rev() {
        d[i] -= c[i] * d[i + 1];
    }
    Ok(d)
}
