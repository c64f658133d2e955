//! Independent reference implementations for the special-function checks.
//! These share no code with the solver library.

use std::f64::consts::PI;

/// `(a, b)` pairs and arguments of the 50-point `M` lattice.
pub(crate) const M_AB: [(f64, f64); 10] = [
    (-0.15, 2.0 / 3.0),
    (-0.05, 2.0 / 3.0),
    (0.05, 4.0 / 3.0),
    (0.35, 2.0 / 3.0),
    (1.2, 4.0 / 3.0),
    (0.18, 4.0 / 3.0),
    (-0.05, 5.0 / 3.0),
    (2.5, 0.5),
    (1.0, 1.0),
    (0.85, 11.0 / 3.0),
];
pub(crate) const M_Z: [f64; 5] = [-10.0, -3.0, -0.5, 0.7, 5.0];

pub(crate) const U_AB: [(f64, f64); 10] = [
    (-0.15, 2.0 / 3.0),
    (-0.05, 2.0 / 3.0),
    (0.2, 2.0 / 3.0),
    (0.85, 2.0 / 3.0),
    (1.85, 2.0 / 3.0),
    (0.2, 5.0 / 3.0),
    (1.0, 1.0),
    (1.85, 5.0 / 3.0),
    (2.85, 11.0 / 3.0),
    (0.5, 1.5),
];
pub(crate) const U_Z: [f64; 5] = [0.1, 0.5, 2.0, 8.0, 30.0];

/// Direct power series of `M(a, b, z)`.
pub(crate) fn series_m(a: f64, b: f64, z: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut n = 0.0;
    loop {
        term *= (a + n) / (b + n) * z / (n + 1.0);
        sum += term;
        n += 1.0;
        if (term.abs() < 1e-12 * sum.abs().max(1e-300) && n > 5.0) || n >= 10_000.0 {
            return sum;
        }
    }
}

fn ln_gamma_stirling(x: f64) -> f64 {
    let mut shift = 0.0;
    let mut y = x;
    while y < 30.0 {
        shift -= y.ln();
        y += 1.0;
    }
    let inv = 1.0 / y;
    let inv2 = inv * inv;
    let series = inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)));
    shift + (y - 0.5) * y.ln() - y + 0.5 * (2.0 * PI).ln() + series
}

#[allow(clippy::too_many_arguments)]
fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let flm = f(0.5 * (a + m));
    let frm = f(0.5 * (m + b));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let diff = left + right - whole;
    if depth == 0 || diff.abs() <= 15.0 * tol {
        return left + right + diff / 15.0;
    }
    simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}

fn adaptive(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    simpson(f, a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), tol, 22)
}

/// `U(a, b, z)` from its Laplace integral, with Kummer's transformation for `a ≤ 0`.
pub(crate) fn laplace_u(a: f64, b: f64, z: f64) -> f64 {
    if a <= 0.0 {
        return z.powf(1.0 - b) * laplace_u(a - b + 1.0, 2.0 - b, z);
    }
    let t_end = 80.0 / z;
    // t = s^{1/a} removes the endpoint singularity of t^{a−1} when a < 1
    let p = if a < 1.0 { 1.0 / a } else { 1.0 };
    let jac = if a < 1.0 { 1.0 / a } else { 1.0 };
    let g = move |s: f64| {
        if s <= 0.0 {
            return if a < 1.0 { jac } else if a == 1.0 { 1.0 } else { 0.0 };
        }
        let t = s.powf(p);
        let w = if a < 1.0 { jac } else { t.powf(a - 1.0) };
        (-z * t).exp() * (1.0 + t).powf(b - a - 1.0) * w
    };
    let s_end = t_end.powf(1.0 / p);
    let pieces = 64;
    let total: f64 = (0..pieces)
        .map(|i| {
            let lo = s_end * (i as f64 / pieces as f64).powi(2);
            let hi = s_end * ((i + 1) as f64 / pieces as f64).powi(2);
            adaptive(&g, lo, hi, 1e-13 / pieces as f64)
        })
        .sum();
    total / ln_gamma_stirling(a).exp()
}

pub(crate) fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}
