//! The Scharfetter-Gummel stabilization parameter.
//!
//! `delta_k(P)` is the dimensionless value of `tau h / alpha` for which the
//! condensed HDG(k) stencil coincides with the SG finite-volume stencil.
//! [`delta_numeric`] finds it for any degree from the condensed
//! coefficients; [`delta_closed_form`] evaluates the tabulated expressions
//! for `k <= 4` and serves as an independent cross-check.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hdg::extract_coeffs;
use crate::hdg::rational::{self, Rational};
use crate::numerics::{bernoulli, find_root};

/// Below this |P| the stabilization is undefined.
pub const DEGENERATE_PECLET: f64 = 1e-10;

/// Resolved values below this are reported as ill-conditioned.
pub const ILL_CONDITIONED_DELTA: f64 = 1e-6;

/// Mesh Peclet number `P = beta h / alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PecletNumber {
    pub value: f64,
    pub h: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl PecletNumber {
    pub fn new(h: f64, alpha: f64, beta: f64) -> Result<Self> {
        if !(h > 0.0) || !(alpha > 0.0) || !beta.is_finite() {
            return Err(Error::param(
                "Peclet number needs h > 0, alpha > 0 and a finite beta",
            ));
        }
        Ok(PecletNumber {
            value: beta * h / alpha,
            h,
            alpha,
            beta,
        })
    }
}

/// Rows of the delta table for `k = 0..=4`. Each row is
/// `-(e^P N_e(P) - N(P)) / (e^P D_e(P) - D(P))`; polynomials are stored
/// by ascending power as `(N_e, N, D_e, D)`.
type TableRow = ([f64; 6], [f64; 6], [f64; 6], [f64; 6]);

#[rustfmt::skip]
const DELTA_TABLE: [TableRow; 5] = [
    (
        [2.0, -1.0, 0.0, 0.0, 0.0, 0.0],
        [2.0, 1.0, 0.0, 0.0, 0.0, 0.0],
        [1.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [1.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    ),
    (
        [12.0, -6.0, 1.0, 0.0, 0.0, 0.0],
        [12.0, 6.0, 1.0, 0.0, 0.0, 0.0],
        [2.0, -1.0, 0.0, 0.0, 0.0, 0.0],
        [2.0, 1.0, 0.0, 0.0, 0.0, 0.0],
    ),
    (
        [120.0, -60.0, 12.0, -1.0, 0.0, 0.0],
        [120.0, 60.0, 12.0, 1.0, 0.0, 0.0],
        [12.0, -6.0, 1.0, 0.0, 0.0, 0.0],
        [12.0, 6.0, 1.0, 0.0, 0.0, 0.0],
    ),
    (
        [1680.0, -840.0, 180.0, -20.0, 1.0, 0.0],
        [1680.0, 840.0, 180.0, 20.0, 1.0, 0.0],
        [120.0, -60.0, 12.0, -1.0, 0.0, 0.0],
        [120.0, 60.0, 12.0, 1.0, 0.0, 0.0],
    ),
    (
        [30240.0, -15120.0, 3360.0, -420.0, 30.0, -1.0],
        [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0],
        [1680.0, -840.0, 180.0, -20.0, 1.0, 0.0],
        [1680.0, 840.0, 180.0, 20.0, 1.0, 0.0],
    ),
];

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// `e^{-P} (e^P q_e(P) - q(P))` for `P >= 0`, free of overflow.
fn scaled_expression(e_poly: &[f64], poly: &[f64], p: f64) -> f64 {
    horner(e_poly, p) - (-p).exp() * horner(poly, p)
}

/// Numerator and denominator of table row `k`, evaluated literally
/// (`e^P` unscaled). Only meaningful for moderate `|P|`.
pub fn delta_table_terms(k: usize, p: f64) -> Result<(f64, f64)> {
    let (ne, n, de, d) = DELTA_TABLE
        .get(k)
        .ok_or_else(|| Error::param(format!("tabulated delta only exists for k <= 4, got {k}")))?;
    let e = p.exp();
    Ok((
        e * horner(ne, p) - horner(n, p),
        e * horner(de, p) - horner(d, p),
    ))
}

/// `int_0^1 t^n (1-t)^n e^{Pt} dt` by its power series in `P` (all terms
/// positive for `P >= 0`).
fn beta_moment(n: usize, p: f64) -> f64 {
    // term_m = P^m/m! * (n+m)! n! / (2n+m+1)!
    let nf = n as f64;
    let mut term = (1..=n).fold(1.0 / (2.0 * nf + 1.0), |acc, j| {
        acc * j as f64 / (nf + j as f64)
    });
    let mut sum = term;
    for m in 0..2000 {
        let mf = m as f64;
        term *= p / (mf + 1.0) * (nf + mf + 1.0) / (2.0 * nf + mf + 2.0);
        sum += term;
        if term < 1e-18 * sum && mf > p {
            break;
        }
    }
    sum
}

/// Tabulated `delta_k(P)` for `k <= 4`.
///
/// Each table row satisfies `e^P q_e(P) - q(P) = (-1)^n P^{2n+1} I_n(P) / n!`
/// with `I_n(P) = int_0^1 t^n (1-t)^n e^{Pt} dt`, so for `|P| <= 20` the
/// ratio is evaluated as `P^2 I_{k+1} / ((k+1) I_k)`, which avoids the
/// cancellation of the literal form. Larger `|P|` use the literal rows
/// scaled by `e^{-|P|}`.
pub fn delta_closed_form(k: usize, p: f64) -> Result<f64> {
    if k > 4 {
        return Err(Error::param(format!(
            "tabulated delta only exists for k <= 4, got {k}"
        )));
    }
    if !p.is_finite() {
        return Err(Error::param("Peclet number must be finite"));
    }
    let a = p.abs();
    if a < DEGENERATE_PECLET {
        return Err(Error::DegeneratePeclet { peclet: p });
    }
    if a <= 20.0 {
        return Ok(a * a * beta_moment(k + 1, a) / ((k as f64 + 1.0) * beta_moment(k, a)));
    }
    let (ne, n, de, d) = &DELTA_TABLE[k];
    Ok(-scaled_expression(ne, n, a) / scaled_expression(de, d, a))
}

/// `delta_k(P)` for any degree: the positive root of
/// `c1(delta, P) = B(-P)`.
///
/// `c1` is a degree-(1,1) rational function of `delta`, so three samples
/// determine it and the root follows from a linear equation. The samples
/// and the target are evaluated in exact rational arithmetic: for small `P`
/// the dependence of `c1` on `delta` is far below f64 resolution. The
/// candidate is checked against the floating-point condensation; a bracketed
/// root search on `(1e-8, |P| + 10)` is the fallback.
pub fn delta_numeric(k: usize, p: f64) -> Result<f64> {
    if !p.is_finite() {
        return Err(Error::param("Peclet number must be finite"));
    }
    if p.abs() < DEGENERATE_PECLET {
        return Err(Error::DegeneratePeclet { peclet: p });
    }
    let target = bernoulli(-p);
    let tol = 1e-12 * target.max(1.0);
    let residual = |delta: f64| -> f64 {
        extract_coeffs(k, delta, p)
            .map(|c| c.c1 - target)
            .unwrap_or(f64::NAN)
    };

    if let Some(candidate) = mobius_candidate(k, p)? {
        if residual(candidate).abs() <= tol {
            return Ok(candidate);
        }
        if let Some(delta) = polish(&residual, candidate, tol) {
            return Ok(delta);
        }
    }
    log::debug!("delta fit failed for k = {k}, P = {p}; bracketing");
    find_root(residual, 1e-8, p.abs() + 10.0, tol).map_err(|e| {
        Error::NoConvergence(format!("k = {k}, P = {p}, target B(-P) = {target}: {e}"))
    })
}

/// Solve `c1 (c delta + 1) = a delta + b` from three exact samples, then
/// `(a delta + b) / (c delta + 1) = B(-P)` for delta.
fn mobius_candidate(k: usize, p: f64) -> Result<Option<f64>> {
    use num_traits::{Signed, Zero};
    let pr = rational::rational(p);
    let target = if p.abs() <= 50.0 {
        rational::bernoulli_rational(&(-pr.clone()))
    } else {
        rational::rational(bernoulli(-p))
    };
    let samples = [0.5, 1.0, 2.0].map(rational::rational);
    let mut c1 = Vec::with_capacity(3);
    for d in &samples {
        let [c, ..] = rational::exact_coefficients(k, d, &pr)?;
        c1.push(c);
    }
    // Cramer's rule on rows [d, 1, -c1 d] (a, b, c) = c1
    let row = |i: usize| {
        [
            samples[i].clone(),
            rational::rational(1.0),
            -(&c1[i] * &samples[i]),
        ]
    };
    let m = [row(0), row(1), row(2)];
    let det3 = |m: &[[Rational; 3]; 3]| {
        &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1])
            - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
            + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0])
    };
    let det = det3(&m);
    if det.is_zero() {
        return Ok(None);
    }
    let solve_col = |j: usize| {
        let mut mj = m.clone();
        for i in 0..3 {
            mj[i][j] = c1[i].clone();
        }
        det3(&mj) / &det
    };
    let (a, b, c) = (solve_col(0), solve_col(1), solve_col(2));
    let denom = a - &target * c;
    if denom.is_zero() {
        return Ok(None);
    }
    let delta = (target - b) / denom;
    if !delta.is_positive() {
        return Ok(None);
    }
    let delta = rational::to_f64(&delta);
    Ok((delta.is_finite() && delta > 0.0).then_some(delta))
}

/// Secant iteration run until the step stagnates at round-off level, so
/// that `delta` is as accurate as `c1` can be evaluated; returns the best
/// iterate if it meets `tol`.
fn polish(residual: &impl Fn(f64) -> f64, start: f64, tol: f64) -> Option<f64> {
    let mut x0 = start;
    let mut g0 = residual(x0);
    let mut x1 = start * (1.0 + 1e-6);
    let mut g1 = residual(x1);
    let mut best = if g1.abs() < g0.abs() {
        (x1, g1)
    } else {
        (x0, g0)
    };
    for _ in 0..40 {
        if best.1 == 0.0 || g1 == g0 || !g1.is_finite() {
            break;
        }
        let x2 = x1 - g1 * (x1 - x0) / (g1 - g0);
        if !(x2 > 0.0) || !x2.is_finite() {
            break;
        }
        let step = (x2 - x1).abs();
        x0 = x1;
        g0 = g1;
        x1 = x2;
        g1 = residual(x1);
        if g1.abs() < best.1.abs() {
            best = (x1, g1);
        }
        if step <= 4.0 * f64::EPSILON * x1 {
            break;
        }
    }
    (best.1.abs() <= tol).then_some(best.0)
}

/// How the stabilization parameter is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TauSpec {
    Fixed(f64),
    /// `tau = (alpha/h) delta_k(P)`. With `degenerate_fallback`, a
    /// vanishing Peclet number resolves to `tau = alpha/h` instead of an
    /// error.
    Sg {
        degenerate_fallback: bool,
    },
}

impl TauSpec {
    pub const SG: TauSpec = TauSpec::Sg {
        degenerate_fallback: false,
    };
}

impl fmt::Display for TauSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TauSpec::Fixed(t) => write!(f, "fixed:{t}"),
            TauSpec::Sg { .. } => write!(f, "sg"),
        }
    }
}

impl FromStr for TauSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("sg") {
            return Ok(TauSpec::SG);
        }
        let value = s
            .strip_prefix("fixed:")
            .ok_or_else(|| Error::param(format!("tau must be 'sg' or 'fixed:VALUE', got '{s}'")))?;
        let tau: f64 = value
            .parse()
            .map_err(|_| Error::param(format!("invalid tau value '{value}'")))?;
        if !(tau > 0.0) || !tau.is_finite() {
            return Err(Error::param("tau must be positive"));
        }
        Ok(TauSpec::Fixed(tau))
    }
}

/// A resolved stabilization parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TauChoice {
    pub spec: TauSpec,
    pub degree: usize,
    pub peclet: PecletNumber,
    pub delta: f64,
    pub tau: f64,
    /// `delta` is small enough that the condensed system is badly
    /// conditioned.
    pub ill_conditioned: bool,
}

pub fn resolve_tau(spec: TauSpec, k: usize, h: f64, alpha: f64, beta: f64) -> Result<TauChoice> {
    let peclet = PecletNumber::new(h, alpha, beta)?;
    let scale = alpha / h;
    let (delta, tau) = match spec {
        TauSpec::Fixed(tau) => {
            if !(tau > 0.0) || !tau.is_finite() {
                return Err(Error::param("tau must be positive"));
            }
            (tau / scale, tau)
        }
        TauSpec::Sg {
            degenerate_fallback,
        } => match delta_numeric(k, peclet.value) {
            Ok(delta) => (delta, scale * delta),
            Err(Error::DegeneratePeclet { .. }) if degenerate_fallback => {
                log::warn!(
                    "Peclet number {} is degenerate; using tau = alpha/h = {scale}",
                    peclet.value
                );
                (1.0, scale)
            }
            Err(e) => return Err(e),
        },
    };
    let ill_conditioned = delta < ILL_CONDITIONED_DELTA;
    if ill_conditioned {
        log::warn!("delta = {delta:e} is close to zero; the condensed system is badly conditioned");
    }
    Ok(TauChoice {
        spec,
        degree: k,
        peclet,
        delta,
        tau,
        ill_conditioned,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_values() {
        // rows 0 and 1 at P = 1, 50-digit evaluations
        let d0 = delta_closed_form(0, 1.0).unwrap();
        assert!((d0 - 0.16395341373865285).abs() < 1e-15);
        let d1 = delta_closed_form(1, 1.0).unwrap();
        assert!((d1 - 0.09929355660768976).abs() < 1e-15);
    }

    #[test]
    fn series_matches_literal_rows() {
        for k in 0..=4 {
            for &p in &[5.0, 10.0, 15.0, 19.9] {
                let (num, den) = delta_table_terms(k, p).unwrap();
                let literal = -num / den;
                let closed = delta_closed_form(k, p).unwrap();
                assert!(((closed - literal) / literal).abs() < 1e-11, "k={k} P={p}");
            }
        }
    }

    #[test]
    fn continuous_across_branch_switch() {
        for k in 0..=4 {
            let below = delta_closed_form(k, 20.0).unwrap();
            let above = delta_closed_form(k, 20.0 + 1e-12).unwrap();
            assert!(((below - above) / below).abs() < 1e-12);
        }
    }

    #[test]
    fn large_peclet_asymptote() {
        let d = delta_closed_form(0, 200.0).unwrap();
        assert!((d / 198.0 - 1.0).abs() < 1e-6);
    }

    #[test]
    fn small_peclet_scaling() {
        let p = 0.01;
        let d = delta_closed_form(0, p).unwrap();
        assert!((d / (p * p) - 1.0 / 6.0).abs() < 1e-3);
    }

    #[test]
    fn table_telescopes() {
        for j in 0..4 {
            for i in 0..10 {
                let p = 0.5 + 1.5 * i as f64;
                let (num, _) = delta_table_terms(j, p).unwrap();
                let (_, den) = delta_table_terms(j + 1, p).unwrap();
                assert!(((num - den) / den).abs() < 1e-11);
            }
        }
    }

    #[test]
    fn degenerate_and_out_of_range() {
        assert!(matches!(
            delta_closed_form(0, 0.0),
            Err(Error::DegeneratePeclet { .. })
        ));
        assert!(matches!(
            delta_numeric(2, 1e-11),
            Err(Error::DegeneratePeclet { .. })
        ));
        assert!(delta_closed_form(5, 1.0).is_err());
    }

    #[test]
    fn numeric_agrees_with_table() {
        for k in 0..=4 {
            for &p in &[0.1, 0.5, 1.0, 2.5, 10.0, 50.0] {
                let a = delta_numeric(k, p).unwrap();
                let b = delta_closed_form(k, p).unwrap();
                assert!(((a - b) / b).abs() < 1e-10, "k={k} P={p}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn numeric_general_degree() {
        let d = delta_numeric(5, 1.0).unwrap();
        let c = extract_coeffs(5, d, 1.0).unwrap();
        assert!((c.c1 - bernoulli(-1.0)).abs() <= 1e-12 * bernoulli(-1.0));
        let m = delta_numeric(5, -1.0).unwrap();
        assert!(((d - m) / d).abs() < 1e-11);
    }

    #[test]
    fn tau_resolution() {
        let fixed = resolve_tau(TauSpec::Fixed(3.0), 2, 0.1, 1.0, 50.0).unwrap();
        assert_eq!(fixed.tau, 3.0);
        let sg = resolve_tau(TauSpec::SG, 0, 0.25, 1.0, 4.0).unwrap();
        assert!((sg.peclet.value - 1.0).abs() < 1e-15);
        assert!((sg.tau - 0.6558136549546114).abs() < 1e-12);
        assert!((sg.tau - 4.0 * sg.delta).abs() <= 1e-14 * sg.tau);
        assert!(matches!(
            resolve_tau(TauSpec::SG, 0, 0.25, 1.0, 0.0),
            Err(Error::DegeneratePeclet { .. })
        ));
        let fallback = resolve_tau(
            TauSpec::Sg {
                degenerate_fallback: true,
            },
            0,
            0.25,
            1.0,
            0.0,
        )
        .unwrap();
        assert_eq!(fallback.tau, 4.0);
        assert!(resolve_tau(TauSpec::Fixed(-1.0), 0, 0.25, 1.0, 1.0).is_err());
    }

    #[test]
    fn tau_spec_parsing() {
        assert_eq!("sg".parse::<TauSpec>().unwrap(), TauSpec::SG);
        assert_eq!("fixed:2.5".parse::<TauSpec>().unwrap(), TauSpec::Fixed(2.5));
        let err = "fixed:-1".parse::<TauSpec>().unwrap_err();
        assert_eq!(err.to_string(), "tau must be positive");
        assert!("upwind".parse::<TauSpec>().is_err());
        assert_eq!(TauSpec::Fixed(2.5).to_string(), "fixed:2.5");
    }
}
