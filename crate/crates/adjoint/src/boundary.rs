use std::f64::consts::{FRAC_PI_2, PI};

use crate::{AdjointError, Result};

/// Smooth switch: 1 on `(−π/2 + κ, 0]`, 0 on `[−π, −π/2 − κ)`, smoothstep
/// `3u² − 2u³` in between. Other angles are folded by `θ ↦ −|θ|`.
pub fn chi_kappa(theta: f64, kappa: f64) -> f64 {
    let th = -theta.abs();
    let u = (th + FRAC_PI_2 + kappa) / (2.0 * kappa);
    if u <= 0.0 {
        0.0
    } else if u >= 1.0 {
        1.0
    } else {
        u * u * (3.0 - 2.0 * u)
    }
}

pub(crate) fn check_kappa(kappa: f64) -> Result<()> {
    if !(kappa > 0.0 && kappa < PI / 4.0) {
        return Err(AdjointError::Parameter(format!("kappa must lie in (0, pi/4), got {kappa}")));
    }
    Ok(())
}

/// Wall value of the reduced adjoint for `θ ∈ [−π, 0]`; `g_wall` is `g(0, ·)`.
pub fn boundary_value_reduced(t: f64, theta: f64, kappa: f64, g_wall: impl Fn(f64) -> f64) -> f64 {
    let chi = chi_kappa(theta, kappa);
    let limit = chi * g_wall(0.0) + (1.0 - chi) * g_wall(-PI);
    limit + (-t / kappa).exp() * (g_wall(theta) - limit)
}

/// Data on `(x1, x2, θ)` for the full adjoint problem. `x1` derivatives
/// default to a five-point central difference.
pub trait AdjointData: Sync {
    fn value(&self, x1: f64, x2: f64, theta: f64) -> f64;

    fn d_x1(&self, x1: f64, x2: f64, theta: f64) -> f64 {
        let h = 1e-3;
        let f = |d: f64| self.value(x1 + d * h, x2, theta);
        (8.0 * (f(1.0) - f(-1.0)) - (f(2.0) - f(-2.0))) / (12.0 * h)
    }
}

impl<F: Fn(f64, f64, f64) -> f64 + Sync> AdjointData for F {
    fn value(&self, x1: f64, x2: f64, theta: f64) -> f64 {
        self(x1, x2, theta)
    }
}

fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let n = 2 * panels;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

/// Wall value of the full adjoint for `θ ∈ [−π, 0]`.
///
/// The defect `w = ψ − χ g(x1+t,0,0) − (1−χ) g(x1−t,0,−π)` obeys
/// `(∂t − cosθ ∂x1) w = −w/κ + S`, hence along `y = x1 + (t−s) cosθ`
/// `w(t) = e^{−t/κ} w(0, x1 + t cosθ) + ∫₀ᵗ e^{−(t−s)/κ} S(s, y) ds`.
/// The integral is taken in `u = t − s` on `[0, min(t, 40κ)]` (Simpson,
/// from 64 panels, doubled until two successive values agree).
pub fn boundary_value_full<G: AdjointData + ?Sized>(t: f64, x1: f64, theta: f64, kappa: f64, g: &G) -> Result<f64> {
    let chi = chi_kappa(theta, kappa);
    let c = theta.cos();
    let limit = chi * g.value(x1 + t, 0.0, 0.0) + (1.0 - chi) * g.value(x1 - t, 0.0, -PI);
    let y0 = x1 + t * c;
    let w0 = g.value(y0, 0.0, theta) - chi * g.value(y0, 0.0, 0.0) - (1.0 - chi) * g.value(y0, 0.0, -PI);
    let a_plus = -chi * (1.0 - c);
    let a_minus = (1.0 - chi) * (1.0 + c);
    if t <= 0.0 {
        return Ok(limit + w0);
    }
    let mut integral = 0.0;
    if a_plus != 0.0 || a_minus != 0.0 {
        let integrand = |u: f64| {
            let s = t - u;
            let y = x1 + u * c;
            let mut acc = 0.0;
            if a_plus != 0.0 {
                acc += a_plus * g.d_x1(y + s, 0.0, 0.0);
            }
            if a_minus != 0.0 {
                acc += a_minus * g.d_x1(y - s, 0.0, -PI);
            }
            (-u / kappa).exp() * acc
        };
        let (lo, hi) = (0.0, t.min(40.0 * kappa));
        let mut panels = 64;
        let mut prev = simpson(&integrand, lo, hi, panels);
        loop {
            panels *= 2;
            let cur = simpson(&integrand, lo, hi, panels);
            if (cur - prev).abs() <= 1e-10 * (1.0 + cur.abs()) {
                integral = cur + (cur - prev) / 15.0;
                break;
            }
            if panels >= 1 << 14 {
                return Err(AdjointError::Quadrature { t, x1, theta });
            }
            prev = cur;
        }
    }
    Ok(limit + (-t / kappa).exp() * w0 + integral)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chi_examples() {
        let k = 0.1;
        assert_eq!(chi_kappa(0.0, k), 1.0);
        assert_eq!(chi_kappa(-PI, k), 0.0);
        assert!((chi_kappa(-FRAC_PI_2, k) - 0.5).abs() < 1e-15);
        let mut prev = 0.0;
        for i in 0..=10_000 {
            let th = -PI + PI * i as f64 / 10_000.0;
            let v = chi_kappa(th, k);
            assert!(v >= prev && (0.0..=1.0).contains(&v));
            prev = v;
        }
    }

    #[test]
    fn reduced_boundary_examples() {
        let g = |th: f64| 1.0 + 0.5 * th.sin() + 0.2 * th;
        for t in [0.0, 0.3, 7.0] {
            assert!((boundary_value_reduced(t, 0.0, 0.1, g) - g(0.0)).abs() < 1e-15);
        }
        let th = -1.2;
        let chi = chi_kappa(th, 0.1);
        let limit = chi * g(0.0) + (1.0 - chi) * g(-PI);
        assert!((boundary_value_reduced(50.0, th, 0.1, g) - limit).abs() < 1e-15);
        let weight = (boundary_value_reduced(1.0, th, 0.1, g) - limit) / (g(th) - limit);
        assert!((weight - 4.539992976248485e-5).abs() < 1e-15);
    }

    #[test]
    fn full_boundary_collapses_without_x1() {
        let g3 = |_x1: f64, x2: f64, th: f64| (1.0 + x2) * (1.0 + 0.3 * th.cos()) + 0.2 * th;
        let g1 = |th: f64| g3(0.0, 0.0, th);
        for &(t, th) in &[(0.1, -0.3), (0.5, -2.0), (2.0, -1.5)] {
            let a = boundary_value_full(t, 0.4, th, 0.05, &g3).unwrap();
            let b = boundary_value_reduced(t, th, 0.05, g1);
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn full_boundary_transport_along_the_wall() {
        let g = |x1: f64, x2: f64, th: f64| (x1 + 0.3 * th).sin() + x2;
        for t in [0.2, 1.0] {
            let p = boundary_value_full(t, 0.3, 0.0, 0.05, &g).unwrap();
            assert!((p - g(0.3 + t, 0.0, 0.0)).abs() < 1e-12);
            let m = boundary_value_full(t, 0.3, -PI, 0.05, &g).unwrap();
            assert!((m - g(0.3 - t, 0.0, -PI)).abs() < 1e-12);
        }
    }
}
