//! Closed-form solution of `(beta u - alpha u')' = f` with Dirichlet data,
//! for constant coefficients.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Constant-coefficient problem on an interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub alpha: f64,
    pub beta: f64,
    pub f: f64,
    pub u_left: f64,
    pub u_right: f64,
    pub domain: (f64, f64),
}

impl ProblemSpec {
    /// Unit interval with `f = 0` and boundary values `(0, 1)`.
    pub fn drift_diffusion(alpha: f64, beta: f64) -> Self {
        ProblemSpec {
            alpha,
            beta,
            f: 0.0,
            u_left: 0.0,
            u_right: 1.0,
            domain: (0.0, 1.0),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0) || !self.alpha.is_finite() {
            return Err(Error::param("alpha must be positive"));
        }
        let finite = [self.beta, self.f, self.u_left, self.u_right];
        if finite.iter().any(|v| !v.is_finite()) {
            return Err(Error::param("problem coefficients must be finite"));
        }
        let (a, b) = self.domain;
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(Error::param(format!("degenerate interval [{a}, {b}]")));
        }
        Ok(())
    }

    pub fn length(&self) -> f64 {
        self.domain.1 - self.domain.0
    }

    fn check_point(&self, x: f64) -> Result<()> {
        let (a, b) = self.domain;
        if !(a..=b).contains(&x) {
            return Err(Error::param(format!("point {x} is outside [{a}, {b}]")));
        }
        Ok(())
    }

    fn profile(&self) -> Profile {
        let l = self.length();
        if self.beta.abs() * l / self.alpha < 1e-12 {
            return Profile::Diffusive;
        }
        let lambda = self.beta / self.alpha;
        // exponentials written as exp(lambda (s - shift)) <= 1 on the domain
        let (shift, gap) = if lambda > 0.0 {
            (l, -(-lambda * l).exp_m1())
        } else {
            (0.0, (lambda * l).exp_m1())
        };
        let g0 = (-lambda * shift).exp();
        let c = (self.u_right - self.u_left - self.f * l / self.beta) / gap;
        Profile::Exponential {
            lambda,
            shift,
            c,
            a: self.u_left - c * g0,
        }
    }
}

enum Profile {
    Diffusive,
    /// `u = a + c exp(lambda (s - shift)) + (f / beta) s` with `s = x - x_left`.
    Exponential {
        lambda: f64,
        shift: f64,
        c: f64,
        a: f64,
    },
}

/// Exact solution value at `x`.
pub fn exact_u(p: &ProblemSpec, x: f64) -> Result<f64> {
    p.check_point(x)?;
    let s = x - p.domain.0;
    Ok(match p.profile() {
        Profile::Diffusive => {
            let l = p.length();
            p.u_left + (p.u_right - p.u_left) * s / l + p.f / (2.0 * p.alpha) * s * (l - s)
        }
        Profile::Exponential {
            lambda,
            shift,
            c,
            a,
        } => a + c * (lambda * (s - shift)).exp() + p.f / p.beta * s,
    })
}

/// Exact first and second derivatives at `x`.
pub fn exact_derivatives(p: &ProblemSpec, x: f64) -> Result<(f64, f64)> {
    p.check_point(x)?;
    let s = x - p.domain.0;
    Ok(match p.profile() {
        Profile::Diffusive => {
            let l = p.length();
            (
                (p.u_right - p.u_left) / l + p.f / (2.0 * p.alpha) * (l - 2.0 * s),
                -p.f / p.alpha,
            )
        }
        Profile::Exponential {
            lambda, shift, c, ..
        } => {
            let g = c * (lambda * (s - shift)).exp();
            (lambda * g + p.f / p.beta, lambda * lambda * g)
        }
    })
}

/// Exact flux `J = beta u - alpha u'` at `x`.
pub fn exact_flux(p: &ProblemSpec, x: f64) -> Result<f64> {
    let u = exact_u(p, x)?;
    let (du, _) = exact_derivatives(p, x)?;
    Ok(p.beta * u - p.alpha * du)
}
