use crate::error::{Error, Result};

/// Root of `g` on `[a, b]` by safeguarded secant steps.
///
/// With a sign change on the bracket, every iterate stays inside the
/// current bracket (bisection whenever the secant step would leave it or
/// stalls). Without a sign change, plain secant iteration is attempted from
/// the two endpoints and abandoned if it diverges.
pub fn find_root(g: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::param(format!("invalid bracket [{a}, {b}]")));
    }
    let (mut lo, mut hi) = (a, b);
    let (mut glo, mut ghi) = (g(lo), g(hi));
    if glo.abs() <= tol {
        return Ok(lo);
    }
    if ghi.abs() <= tol {
        return Ok(hi);
    }
    if glo.signum() == ghi.signum() || !glo.is_finite() || !ghi.is_finite() {
        return secant(&g, a, b, tol);
    }
    let mut bisect_next = false;
    for _ in 0..500 {
        let mut x = if bisect_next {
            0.5 * (lo + hi)
        } else {
            hi - ghi * (hi - lo) / (ghi - glo)
        };
        if !(x > lo && x < hi) {
            x = 0.5 * (lo + hi);
        }
        let gx = g(x);
        if gx.abs() <= tol {
            return Ok(x);
        }
        let width = hi - lo;
        if gx.signum() == glo.signum() {
            lo = x;
            glo = gx;
        } else {
            hi = x;
            ghi = gx;
        }
        // force a bisection if the bracket failed to halve
        bisect_next = hi - lo > 0.5 * width;
        if hi - lo <= f64::EPSILON * hi.abs().max(lo.abs()) {
            let best = if glo.abs() < ghi.abs() { lo } else { hi };
            return if g(best).abs() <= tol {
                Ok(best)
            } else {
                Err(Error::NoRoot(format!(
                    "bracket collapsed at {best} with residual {:e} above tolerance {tol:e}",
                    g(best)
                )))
            };
        }
    }
    Err(Error::NoRoot("iteration limit reached".into()))
}

fn secant(g: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    let (mut x0, mut x1) = (a, b);
    let (mut g0, mut g1) = (g(x0), g(x1));
    let scale = (b - a).abs().max(a.abs()).max(b.abs());
    for _ in 0..100 {
        if g1 == g0 || !g1.is_finite() {
            break;
        }
        let x2 = x1 - g1 * (x1 - x0) / (g1 - g0);
        if !x2.is_finite() || (x2 - a).abs() > 1e6 * scale {
            break;
        }
        x0 = x1;
        g0 = g1;
        x1 = x2;
        g1 = g(x1);
        if g1.abs() <= tol {
            return Ok(x1);
        }
    }
    Err(Error::NoRoot(format!(
        "no sign change on [{a}, {b}] and secant iteration diverged"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear() {
        let x = find_root(|x| x - 2.0, 0.0, 5.0, 1e-14).unwrap();
        assert!((x - 2.0).abs() < 1e-14);
    }

    #[test]
    fn sqrt_two() {
        let x = find_root(|x| x * x - 2.0, 0.0, 2.0, 1e-15).unwrap();
        assert!((x - std::f64::consts::SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn constant_has_no_root() {
        assert!(matches!(
            find_root(|_| 1.0, 0.0, 1.0, 1e-12),
            Err(Error::NoRoot(_))
        ));
    }

    #[test]
    fn root_outside_bracket_via_secant() {
        let x = find_root(|x| x - 3.0, 0.0, 1.0, 1e-12).unwrap();
        assert!((x - 3.0).abs() < 1e-12);
    }

    #[test]
    fn steep_function() {
        let x = find_root(|x| (x - 0.3).powi(3) * 1e6, 0.0, 1.0, 1e-12).unwrap();
        assert!((x - 0.3).abs() < 1e-5);
    }
}
