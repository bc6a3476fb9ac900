/// Bernoulli function `B(x) = x / (e^x - 1)`, with `B(0) = 1`.
///
/// Near zero the truncated series is used, positive arguments go through
/// `expm1`, and negative arguments use `B(x) = B(-x) - x` so nothing
/// overflows. For large positive `x` the result underflows gracefully
/// towards `x e^{-x}`.
pub fn bernoulli(x: f64) -> f64 {
    let ax = x.abs();
    if ax < 1e-5 {
        return 1.0 - 0.5 * x + x * x / 12.0;
    }
    let positive = if ax > 700.0 {
        // x/(e^x - 1) = x e^{-x} / (1 - e^{-x})
        let em = (-ax).exp();
        ax * em / (1.0 - em)
    } else {
        ax / ax.exp_m1()
    };
    if x > 0.0 {
        positive
    } else {
        positive + ax
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_values() {
        assert_eq!(bernoulli(0.0), 1.0);
        // 1/(e - 1) evaluated at 50 digits
        assert!((bernoulli(1.0) - 0.5819767068693265).abs() < 1e-16);
        assert!((bernoulli(-1.0) - 1.5819767068693265).abs() < 1e-15);
    }

    #[test]
    fn reflection_identity_on_log_grid() {
        let n = 200;
        for i in 0..=n {
            let x = 10f64.powf(-8.0 + (i as f64) * (50f64.log10() + 8.0) / n as f64);
            let lhs = bernoulli(-x) - bernoulli(x);
            assert!((lhs - x).abs() <= 1e-12 * x.max(1.0), "x = {x}: {lhs}");
        }
    }

    #[test]
    fn strictly_decreasing() {
        let mut prev = bernoulli(-50.0);
        for i in 1..=20_000 {
            let x = -50.0 + i as f64 * 100.0 / 20_000.0;
            let b = bernoulli(x);
            assert!(b < prev, "not decreasing at x = {x}");
            prev = b;
        }
    }

    #[test]
    fn continuous_across_series_switch() {
        for &x in &[1e-5, -1e-5] {
            let below = bernoulli(x * (1.0 - 1e-9));
            let above = bernoulli(x * (1.0 + 1e-9));
            assert!((below - above).abs() < 1e-13);
        }
    }

    #[test]
    fn extreme_arguments_are_finite() {
        for &x in &[700.0, 701.0, 750.0, 1e4, -700.0, -1e4, f64::MIN_POSITIVE] {
            let b = bernoulli(x);
            assert!(b.is_finite() && b >= 0.0, "B({x}) = {b}");
        }
        assert!(bernoulli(700.0) > 0.0);
        let x: f64 = 705.0;
        let asymptotic = x * (-x).exp();
        assert!((bernoulli(x) - asymptotic).abs() <= 1e-12 * asymptotic);
    }
}
