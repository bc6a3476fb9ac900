//! Exact evaluation of the condensed coefficients.
//!
//! For a given f64 Peclet number and delta the local HDG matrices on the
//! unit reference cell have rational entries (the Lagrange basis on
//! equispaced nodes integrates to rationals), so the coefficients can be
//! computed without round-off. This is what makes the inverse problem for
//! `delta_k` well posed in practice: for small `P` the coefficient `c1`
//! depends on `delta` only at order `P^2`, far below f64 resolution.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rational(x: f64) -> Rational {
    BigRational::from_float(x).expect("finite value")
}

fn int(i: i64) -> Rational {
    BigRational::from_integer(BigInt::from(i))
}

/// Monomial coefficients (ascending) of the equispaced Lagrange basis.
fn lagrange_monomials(k: usize) -> Vec<Vec<Rational>> {
    if k == 0 {
        return vec![vec![int(1)]];
    }
    (0..=k)
        .map(|i| {
            // prod_{l != i} (k x - l) / (i - l)
            let mut poly = vec![int(1)];
            for l in (0..=k).filter(|&l| l != i) {
                let denom = int(i as i64 - l as i64);
                let mut next = vec![int(0); poly.len() + 1];
                for (m, c) in poly.iter().enumerate() {
                    next[m + 1] += c * int(k as i64) / &denom;
                    next[m] -= c * int(l as i64) / &denom;
                }
                poly = next;
            }
            poly
        })
        .collect()
}

fn integrate_product(a: &[Rational], b: &[Rational]) -> Rational {
    let mut s = int(0);
    for (m, x) in a.iter().enumerate() {
        for (n, y) in b.iter().enumerate() {
            s += x * y / int((m + n + 1) as i64);
        }
    }
    s
}

fn derivative(a: &[Rational]) -> Vec<Rational> {
    a.iter()
        .enumerate()
        .skip(1)
        .map(|(m, c)| c * int(m as i64))
        .collect()
}

/// Exact reference-cell integrals: mass, `int phi_j phi_i'` and means.
pub(crate) struct ReferenceIntegrals {
    pub mass: Vec<Vec<Rational>>,
    pub grad: Vec<Vec<Rational>>,
    pub mean: Vec<Rational>,
    pub left: Vec<Rational>,
    pub right: Vec<Rational>,
}

pub(crate) fn reference_integrals(k: usize) -> ReferenceIntegrals {
    let phi = lagrange_monomials(k);
    let dphi: Vec<_> = phi.iter().map(|p| derivative(p)).collect();
    let n = k + 1;
    let eval = |p: &[Rational], x: &Rational| p.iter().rev().fold(int(0), |acc, c| acc * x + c);
    let one = int(1);
    let zero = int(0);
    ReferenceIntegrals {
        mass: (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| integrate_product(&phi[i], &phi[j]))
                    .collect()
            })
            .collect(),
        grad: (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| integrate_product(&phi[j], &dphi[i]))
                    .collect()
            })
            .collect(),
        mean: phi
            .iter()
            .map(|p| integrate_product(p, &[int(1)]))
            .collect(),
        left: phi.iter().map(|p| eval(p, &zero)).collect(),
        right: phi.iter().map(|p| eval(p, &one)).collect(),
    }
}

/// Gaussian elimination over the rationals, several right-hand sides.
fn solve_exact(
    mut a: Vec<Vec<Rational>>,
    mut rhs: Vec<Vec<Rational>>,
) -> Result<Vec<Vec<Rational>>> {
    let n = a.len();
    for col in 0..n {
        let p = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .ok_or(Error::Singular {
                pivot: col,
                value: 0.0,
            })?;
        a.swap(p, col);
        for b in rhs.iter_mut() {
            b.swap(p, col);
        }
        let pivot = a[col][col].clone();
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] / &pivot;
            let (top, bottom) = a.split_at_mut(r);
            for (x, y) in bottom[0][col..].iter_mut().zip(&top[col][col..]) {
                *x -= &factor * y;
            }
            for b in rhs.iter_mut() {
                let t = &factor * &b[col];
                b[r] -= t;
            }
        }
    }
    for b in rhs.iter_mut() {
        for i in (0..n).rev() {
            let mut s = b[i].clone();
            for j in i + 1..n {
                s -= &a[i][j] * &b[j];
            }
            b[i] = s / &a[i][i];
        }
    }
    Ok(rhs)
}

/// `(c1, c2, c3, r)` on the unit reference cell with `alpha = h = 1`,
/// `beta = P`, `tau = delta`, computed exactly.
pub fn exact_coefficients(k: usize, delta: &Rational, peclet: &Rational) -> Result<[Rational; 4]> {
    if !delta.is_positive() {
        return Err(Error::param("delta must be positive"));
    }
    let ri = reference_integrals(k);
    let n = k + 1;
    let mut a = vec![vec![int(0); 2 * n]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            a[i][j] = ri.mass[i][j].clone();
            a[i][n + j] = -&ri.grad[i][j] - peclet * &ri.mass[i][j];
            a[n + i][j] = -&ri.grad[i][j] + &ri.right[j] * &ri.right[i] - &ri.left[j] * &ri.left[i];
            a[n + i][n + j] = delta * (&ri.right[j] * &ri.right[i] + &ri.left[j] * &ri.left[i]);
        }
    }
    let mut b_l = vec![int(0); 2 * n];
    let mut b_r = vec![int(0); 2 * n];
    let mut b_f = vec![int(0); 2 * n];
    for i in 0..n {
        b_l[i] = ri.left[i].clone();
        b_r[i] = -&ri.right[i];
        b_l[n + i] = delta * &ri.left[i];
        b_r[n + i] = delta * &ri.right[i];
        b_f[n + i] = ri.mean[i].clone();
    }
    let x = solve_exact(a, vec![b_l, b_r, b_f])?;
    let right = |v: &[Rational]| -> Rational {
        (0..n).fold(int(0), |s, j| {
            s + &ri.right[j] * (&v[j] + delta * &v[n + j])
        })
    };
    let left = |v: &[Rational]| -> Rational {
        (0..n).fold(int(0), |s, j| {
            s + &ri.left[j] * (-&v[j] + delta * &v[n + j])
        })
    };
    let c1 = right(&x[0]);
    let c3 = left(&x[1]);
    let c2 = right(&x[1]) + left(&x[0]) - int(2) * delta;
    let r = -(right(&x[2]) + left(&x[2]));
    Ok([c1, c2, c3, r])
}

/// `B(x) = x / (e^x - 1)` to roughly 40 significant digits for `|x| <= 50`.
/// The exponential series is summed exactly with all terms positive.
pub fn bernoulli_rational(x: &Rational) -> Rational {
    if x.is_zero() {
        return int(1);
    }
    let ax = x.abs();
    let eps = BigRational::new(BigInt::one(), BigInt::from(10).pow(40));
    let mut term = int(1);
    let mut sum = int(1);
    let mut n = 0i64;
    loop {
        n += 1;
        term = term * &ax / int(n);
        sum += &term;
        if term < &sum * &eps && int(n) > ax {
            break;
        }
    }
    if x.is_positive() {
        ax / (sum - int(1))
    } else {
        // B(-a) = a e^a / (e^a - 1)
        &ax * &sum / (sum - int(1))
    }
}

pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}
