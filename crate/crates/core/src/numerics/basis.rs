use crate::error::{Error, Result};

/// Lagrange basis of degree `k` on the reference cell `[0, 1]`.
///
/// For `k >= 1` the nodes are equispaced and include both endpoints, so
/// `phi_0` is the only function that is nonzero at 0 and `phi_k` the only
/// one nonzero at 1. For `k = 0` the single node is 0.5 and the basis
/// function is the constant 1.
#[derive(Debug, Clone, PartialEq)]
pub struct LagrangeBasis {
    degree: usize,
    nodes: Vec<f64>,
}

impl LagrangeBasis {
    pub fn new(degree: usize) -> Self {
        let nodes = if degree == 0 {
            vec![0.5]
        } else {
            (0..=degree).map(|i| i as f64 / degree as f64).collect()
        };
        LagrangeBasis { degree, nodes }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.degree + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Values and reference derivatives of every basis function at `x`.
    pub fn eval(&self, x: f64) -> Result<(Vec<f64>, Vec<f64>)> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::param(format!(
                "basis evaluation point {x} is outside [0, 1]"
            )));
        }
        Ok(self.eval_unchecked(x))
    }

    pub(crate) fn eval_unchecked(&self, x: f64) -> (Vec<f64>, Vec<f64>) {
        let n = self.len();
        if self.degree == 0 {
            return (vec![1.0], vec![0.0]);
        }
        let xs = &self.nodes;
        let mut values = vec![0.0; n];
        let mut derivs = vec![0.0; n];
        for i in 0..n {
            let mut v = 1.0;
            for l in (0..n).filter(|&l| l != i) {
                v *= (x - xs[l]) / (xs[i] - xs[l]);
            }
            values[i] = v;
            let mut d = 0.0;
            for m in (0..n).filter(|&m| m != i) {
                let mut term = 1.0 / (xs[i] - xs[m]);
                for l in (0..n).filter(|&l| l != i && l != m) {
                    term *= (x - xs[l]) / (xs[i] - xs[l]);
                }
                d += term;
            }
            derivs[i] = d;
        }
        (values, derivs)
    }

    /// Basis values at the left endpoint of the cell.
    pub fn left_trace(&self) -> Vec<f64> {
        self.eval_unchecked(0.0).0
    }

    /// Basis values at the right endpoint of the cell.
    pub fn right_trace(&self) -> Vec<f64> {
        self.eval_unchecked(1.0).0
    }

    /// Evaluate `sum_i coeffs[i] phi_i(x)`.
    pub fn combine(&self, coeffs: &[f64], x: f64) -> f64 {
        let (values, _) = self.eval_unchecked(x);
        values.iter().zip(coeffs).map(|(v, c)| v * c).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_hats_at_zero() {
        let (v, d) = LagrangeBasis::new(1).eval(0.0).unwrap();
        assert_eq!(v, vec![1.0, 0.0]);
        assert_eq!(d, vec![-1.0, 1.0]);
    }

    #[test]
    fn constant_basis() {
        let b = LagrangeBasis::new(0);
        for &x in &[0.0, 0.3, 1.0] {
            let (v, d) = b.eval(x).unwrap();
            assert_eq!(v, vec![1.0]);
            assert_eq!(d, vec![0.0]);
        }
    }

    #[test]
    fn quadratic_midpoint_node() {
        let (v, _) = LagrangeBasis::new(2).eval(0.5).unwrap();
        assert_eq!(v, vec![0.0, 1.0, 0.0]);
    }

    #[test]
    fn cardinality_and_partition_of_unity() {
        for k in 0..=8 {
            let b = LagrangeBasis::new(k);
            if k >= 1 {
                for (j, &xj) in b.nodes().iter().enumerate() {
                    let (v, _) = b.eval(xj).unwrap();
                    for (i, &vi) in v.iter().enumerate() {
                        assert_eq!(vi, if i == j { 1.0 } else { 0.0 });
                    }
                }
                let l = b.left_trace();
                let r = b.right_trace();
                assert!(l[0] == 1.0 && l[1..].iter().all(|&v| v == 0.0));
                assert!(r[k] == 1.0 && r[..k].iter().all(|&v| v == 0.0));
            }
            for s in 0..=50 {
                let x = s as f64 / 50.0;
                let (v, d) = b.eval(x).unwrap();
                assert!((v.iter().sum::<f64>() - 1.0).abs() < 1e-12);
                assert!(d.iter().sum::<f64>().abs() < 1e-12);
            }
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let b = LagrangeBasis::new(4);
        let x = 0.37;
        let eps = 1e-6;
        let (_, d) = b.eval(x).unwrap();
        let (vp, _) = b.eval(x + eps).unwrap();
        let (vm, _) = b.eval(x - eps).unwrap();
        for i in 0..5 {
            let fd = (vp[i] - vm[i]) / (2.0 * eps);
            assert!((fd - d[i]).abs() < 1e-7);
        }
    }

    #[test]
    fn outside_reference_cell() {
        assert!(LagrangeBasis::new(2).eval(1.5).is_err());
        assert!(LagrangeBasis::new(2).eval(-0.1).is_err());
    }
}
