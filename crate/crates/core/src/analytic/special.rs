//! Exponential integral `E1(x) = ∫₁^∞ e^{−xt}/t dt` for positive real `x`.
//!
//! Power series on `(0, 1]`, continued fraction (modified Lentz) above. The
//! continued fraction yields `e^x·E1(x)` directly, which is what the rate
//! formulas consume and which stays finite for arguments far beyond the
//! underflow point of `E1` itself.

use crate::error::{invalid, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const MAX_ITERS: usize = 10_000;

/// `E1(x)` for `x > 0`.
pub fn exp_integral_e1(x: f64) -> Result<f64> {
    check_arg(x)?;
    Ok(if x <= 1.0 {
        e1_series(x)
    } else {
        (-x).exp() * scaled_e1_cf(x)
    })
}

/// `e^x·E1(x)` for `x > 0`, evaluated without forming `E1(x)` when it would
/// underflow.
pub fn scaled_e1(x: f64) -> Result<f64> {
    check_arg(x)?;
    Ok(if x <= 1.0 {
        x.exp() * e1_series(x)
    } else {
        scaled_e1_cf(x)
    })
}

fn check_arg(x: f64) -> Result<()> {
    if x.is_nan() || x <= 0.0 {
        return Err(invalid("x", format!("E1 requires x > 0, got {x}")));
    }
    Ok(())
}

// -γ - ln x - Σ_{k≥1} (-x)^k / (k·k!)
fn e1_series(x: f64) -> f64 {
    let mut sum = 0.0;
    let mut term = 1.0; // (-x)^k / k!
    for k in 1..MAX_ITERS {
        term *= -x / k as f64;
        let contrib = term / k as f64;
        sum += contrib;
        if contrib.abs() <= f64::EPSILON * 0.25 * sum.abs() {
            break;
        }
    }
    -EULER_GAMMA - x.ln() - sum
}

// e^x E1(x) = 1/(x+1- 1/(x+3- 4/(x+5- ...)))
fn scaled_e1_cf(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_ITERS {
        let an = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        let delta = c * d;
        h *= delta;
        if (delta - 1.0).abs() <= f64::EPSILON {
            break;
        }
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    // Values frozen from the adaptive-quadrature oracle in tests/common.
    #[test]
    fn reference_points() {
        assert_relative_eq!(
            exp_integral_e1(1.0).unwrap(),
            0.219_383_934_395_520_27,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            exp_integral_e1(0.1).unwrap(),
            1.822_923_958_419_390_7,
            max_relative = 1e-13
        );
        assert_relative_eq!(scaled_e1(1.0).unwrap(), 0.596_347_362_323_194_1, max_relative = 1e-13);
        assert_relative_eq!(scaled_e1(0.1).unwrap(), 2.014_642_544_708_452, max_relative = 1e-13);
    }

    #[test]
    fn branches_agree_at_the_switch() {
        let below = e1_series(1.0);
        let above = (-1.0f64).exp() * scaled_e1_cf(1.0);
        assert_relative_eq!(below, above, max_relative = 1e-13);
    }

    #[test]
    fn large_argument_is_bracketed() {
        let x = 1e5;
        let s = scaled_e1(x).unwrap();
        assert!(s > 1.0 / (x + 1.0) && s <= 1.0 / x);
        assert!(scaled_e1(1e6).unwrap().is_finite());
    }

    #[test]
    fn rejects_non_positive() {
        assert!(exp_integral_e1(0.0).is_err());
        assert!(exp_integral_e1(-1.0).is_err());
        assert!(scaled_e1(0.0).is_err());
        assert!(scaled_e1(f64::NAN).is_err());
    }

    #[test]
    fn scaled_is_strictly_decreasing() {
        let mut prev = f64::INFINITY;
        for i in 0..400 {
            let x = 10f64.powf(-6.0 + 12.0 * i as f64 / 399.0);
            let s = scaled_e1(x).unwrap();
            assert!(s < prev, "not decreasing at x = {x}");
            prev = s;
        }
    }
}
