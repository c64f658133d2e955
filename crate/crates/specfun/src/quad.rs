//! Exp-sinh (double exponential) quadrature on `[0, ∞)`.

use crate::{Result, SpecfunError};

/// `∫₀^∞ h(t) dt` for integrands with at most an integrable power singularity
/// at 0 and exponential decay at infinity.
pub fn exp_sinh<F: Fn(f64) -> f64>(h: F, rel_tol: f64) -> Result<f64> {
    let half_pi = std::f64::consts::FRAC_PI_2;
    let node = |u: f64| {
        let t = (half_pi * u.sinh()).exp();
        let w = half_pi * u.cosh() * t;
        if t.is_finite() && w.is_finite() {
            let v = h(t) * w;
            if v.is_finite() {
                v
            } else {
                0.0
            }
        } else {
            0.0
        }
    };
    let umax = 4.5;
    let mut step = 0.5;
    let mut sum = node(0.0);
    let mut u = step;
    while u <= umax {
        sum += node(u) + node(-u);
        u += step;
    }
    let mut estimate = sum * step;
    for _ in 0..12 {
        // Add midpoints of the current level.
        let mut extra = 0.0;
        let mut u = step * 0.5;
        while u <= umax {
            extra += node(u) + node(-u);
            u += step;
        }
        sum += extra;
        step *= 0.5;
        let next = sum * step;
        if (next - estimate).abs() <= rel_tol * next.abs() {
            return Ok(next);
        }
        estimate = next;
    }
    Err(SpecfunError::NonConvergence(format!(
        "exp-sinh quadrature stalled at {estimate}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_integrals() {
        let v = exp_sinh(|t| (-t).exp(), 1e-14).unwrap();
        assert!((v - 1.0).abs() < 1e-13);
        // ∫ t^{-1/2} e^{-t} = √π
        let v = exp_sinh(|t| t.powf(-0.5) * (-t).exp(), 1e-14).unwrap();
        assert!((v - std::f64::consts::PI.sqrt()).abs() < 1e-12);
    }
}
