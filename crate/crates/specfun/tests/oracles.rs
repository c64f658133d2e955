//! Cross-checks of the special functions against independently coded oracles.

use std::f64::consts::PI;

use polykin_core::PhasePoint;
use polykin_specfun::*;

// ---- oracles ---------------------------------------------------------------

fn series_m(a: f64, b: f64, z: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut n = 0.0;
    loop {
        term *= (a + n) / (b + n) * z / (n + 1.0);
        sum += term;
        n += 1.0;
        if term.abs() < 1e-12 * sum.abs().max(1e-300) && n > 5.0 {
            return sum;
        }
        assert!(n < 10_000.0);
    }
}

fn ln_gamma_stirling(x: f64) -> f64 {
    assert!(x > 0.0);
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

fn gamma_oracle(x: f64) -> f64 {
    ln_gamma_stirling(x).exp()
}

fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let diff = left + right - whole;
    if depth == 0 || diff.abs() <= 15.0 * tol {
        return left + right + diff / 15.0;
    }
    simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}

fn adaptive(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson(f, a, b, fa, fm, fb, whole, tol, 22)
}

/// `U(a,b,z) = Γ(a)⁻¹ ∫₀^∞ e^{−zt} t^{a−1} (1+t)^{b−a−1} dt` for `a > 0`,
/// and `U(a,b,z) = z^{1−b} U(a−b+1, 2−b, z)` otherwise.
fn laplace_u(a: f64, b: f64, z: f64) -> f64 {
    if a <= 0.0 {
        let a2 = a - b + 1.0;
        assert!(a2 > 0.0, "oracle needs a - b + 1 > 0");
        return z.powf(1.0 - b) * laplace_u(a2, 2.0 - b, z);
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
    let mut total = 0.0;
    let pieces = 64;
    for i in 0..pieces {
        let lo = s_end * (i as f64 / pieces as f64).powi(2);
        let hi = s_end * ((i + 1) as f64 / pieces as f64).powi(2);
        total += adaptive(&g, lo, hi, 1e-13 / pieces as f64);
    }
    total / gamma_oracle(a)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

// ---- lattices ----------------------------------------------------------------

#[test]
fn kummer_m_matches_series_on_lattice() {
    let ab = [
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
    let zs = [-10.0, -3.0, -0.5, 0.7, 5.0];
    let mut n = 0;
    for &(a, b) in &ab {
        for &z in &zs {
            let got = kummer_m(a, b, z).unwrap();
            let want = series_m(a, b, z);
            assert!(rel(got, want) < 1e-8, "M({a},{b},{z}) = {got}, oracle {want}");
            n += 1;
        }
    }
    assert_eq!(n, 50);
}

#[test]
fn m_example_against_series() {
    let got = kummer_m(-0.05, 2.0 / 3.0, -1.0).unwrap();
    assert!(rel(got, series_m(-0.05, 2.0 / 3.0, -1.0)) < 1e-12);
}

#[test]
fn tricomi_u_matches_laplace_integral_on_lattice() {
    let ab = [
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
    let zs = [0.1, 0.5, 2.0, 8.0, 30.0];
    let mut n = 0;
    for &(a, b) in &ab {
        for &z in &zs {
            let got = tricomi_u(a, b, z).unwrap();
            let want = laplace_u(a, b, z);
            assert!(rel(got, want) < 1e-8, "U({a},{b},{z}) = {got}, oracle {want}");
            n += 1;
        }
    }
    assert_eq!(n, 50);
}

#[test]
fn u_one_one_one() {
    assert!(rel(tricomi_u(1.0, 1.0, 1.0).unwrap(), laplace_u(1.0, 1.0, 1.0)) < 1e-10);
}

// ---- profiles ----------------------------------------------------------------

#[test]
fn lambda_at_zero_against_independent_gamma() {
    for alpha in [0.05, 0.1, 0.15] {
        let p = HolderParams { alpha, alpha_sing: -0.05 };
        let want = gamma_oracle(1.0 / 3.0) / gamma_oracle(1.0 / 3.0 - alpha);
        let got = lambda_profile(0.0, &p).unwrap();
        assert!(rel(got, want) < 1e-10, "alpha={alpha}: {got} vs {want}");
    }
    let want = gamma_oracle(1.0 / 3.0) / gamma_oracle(1.0 / 3.0 - 0.15);
    assert!((want - 0.532246229283327).abs() < 1e-12);
}

#[test]
fn lambda_ode_residual_on_grid() {
    let p = HolderParams::default();
    for i in 0..=400 {
        let z = -10.0 + 20.0 * i as f64 / 400.0;
        let l = lambda_derivs(z, &p).unwrap();
        let r = l[2] + 3.0 * z * z * l[1] - 9.0 * p.alpha * z * l[0];
        let scale = 1.0 + l[0].abs() + l[1].abs() + l[2].abs();
        assert!(r.abs() <= 1e-6 * scale, "zeta={z}: residual {r}");
        assert!(l[0] > 0.0);
    }
}

#[test]
fn lambda_power_law_on_the_left() {
    let p = HolderParams::default();
    let r20 = lambda_profile(-20.0, &p).unwrap() / 20f64.powf(3.0 * p.alpha);
    let r40 = lambda_profile(-40.0, &p).unwrap() / 40f64.powf(3.0 * p.alpha);
    assert!((r20 - 1.0).abs() < 0.02 && (r40 - 1.0).abs() < 0.02);
    assert!((r20 - r40).abs() < 0.02);
}

fn fd_order(f: &dyn Fn(f64) -> f64, exact: f64, x: f64, h: f64) -> f64 {
    let e1 = ((f(x + h) - f(x - h)) / (2.0 * h) - exact).abs();
    let e2 = ((f(x + h / 2.0) - f(x - h / 2.0)) / h - exact).abs();
    (e1 / e2).log2()
}

#[test]
fn lambda_derivatives_have_second_order_fd_agreement() {
    let p = HolderParams::default();
    for z in [-2.5, -0.7, 0.4, 1.8] {
        let l = lambda_derivs(z, &p).unwrap();
        for n in 0..3 {
            let f = |x: f64| lambda_derivs(x, &p).unwrap()[n];
            let order = fd_order(&f, l[n + 1], z, 1e-2);
            assert!((order - 2.0).abs() < 0.3, "zeta={z}, n={n}: order {order}");
        }
    }
}

#[test]
fn f0_identities() {
    let p = HolderParams::default();
    for &y in &[1e-3, 0.05, 0.5, 2.0] {
        for &z in &[-1.5, -0.3, 0.0, 0.4, 1.2] {
            let d = f0_selfsim_partials(y, z, &p).unwrap();
            let heat = d.f_zz - z * d.f_y;
            let s1 = d.f_zz.abs() + (z * d.f_y).abs() + d.f.abs();
            assert!(heat.abs() <= 1e-8 * s1, "y={y}, z={z}: {heat}");
            let euler = 0.5 * z * d.f_z + 1.5 * y * d.f_y - 1.5 * p.alpha * d.f;
            let s2 = (z * d.f_z).abs() + (y * d.f_y).abs() + d.f.abs();
            assert!(euler.abs() <= 1e-8 * s2, "y={y}, z={z}: {euler}");
            assert!(d.f > 0.0);
        }
    }
}

#[test]
fn f0_partials_match_finite_differences() {
    let p = HolderParams::default();
    let (y, z) = (0.3, -0.4);
    let d = f0_selfsim_partials(y, z, &p).unwrap();
    let fy = |v: f64| f0_selfsim_partials(v, z, &p).unwrap().f;
    assert!((fd_order(&fy, d.f_y, y, 1e-2) - 2.0).abs() < 0.3);
    let fz = |v: f64| f0_selfsim_partials(y, v, &p).unwrap().f_zz;
    assert!((fd_order(&fz, d.f_zzz, z, 1e-2) - 2.0).abs() < 0.3);
    let fzy = |v: f64| f0_selfsim_partials(v, z, &p).unwrap().f_z;
    assert!((fd_order(&fzy, d.f_zy, y, 1e-2) - 2.0).abs() < 0.3);
}

#[test]
fn fstar0_is_steady() {
    let p = HolderParams::default();
    let (r, scale) = fstar0_residual(1e-3, 0.1, &p).unwrap();
    assert!(r.abs() <= 1e-8 * scale, "{r} vs {scale}");
    for &(x2, th) in &[(0.02, -0.3), (0.5, 0.7), (1e-4, 0.02)] {
        let (r, scale) = fstar0_residual(x2, th, &p).unwrap();
        assert!(r.abs() <= 1e-8 * scale);
    }
}

#[test]
fn fstar0_comparable_to_power_on_cusp() {
    let p = HolderParams::default();
    for th in [0.05f64, 0.1, 0.2, -0.05, -0.1, -0.2] {
        let x2: f64 = th.abs().powi(3);
        let ratio = fstar0(x2, th, &p).unwrap() / x2.powf(p.alpha_sing);
        assert!((0.5..2.0).contains(&ratio), "theta={th}: {ratio}");
    }
}

#[test]
fn hat_f0_is_a_supersolution_in_region() {
    let p = HolderParams::default();
    let mut checked = 0;
    for it in 0..=4 {
        let t = 1.0 + it as f64 / 4.0;
        let lim = DEFAULT_VALIDITY_BOUND * t.powf(1.5);
        for i in 1..=20 {
            let x2 = lim * i as f64 / 20.0;
            for j in -20..=20 {
                let th = (lim).cbrt() * j as f64 / 20.0;
                if th.abs().powi(3) + x2 > lim {
                    continue;
                }
                let (r, v) = hat_f0_residual(t, x2, th, &p, Some(1.0)).unwrap();
                assert!(r >= -1e-6 * v, "t={t}, x2={x2}, th={th}: {r}");
                checked += 1;
            }
        }
    }
    assert!(checked > 500);
}

#[test]
fn hat_f0_bare_profile_has_the_scaling_deficit() {
    // Without the correction the residual is −(3/2)α F₀ up to the sinθ − θ term.
    let p = HolderParams::default();
    let (r, v) = hat_f0_residual(1.0, 1e-4, 0.0, &p, None).unwrap();
    assert!((r + 1.5 * p.alpha * v).abs() < 1e-9 * v);
}

#[test]
fn hat_f0_correction_is_small_near_the_corner() {
    let p = HolderParams::default();
    for &y in &[1e-5, 1e-4, 1e-3] {
        for &z in &[-0.05, 0.0, 0.05] {
            let h = hat_f0(1.0, y, z, &p, Some(1.0)).unwrap();
            assert!(h.correction.abs() < 0.1 * h.f0, "y={y}, z={z}");
        }
    }
}

#[test]
fn supersolution_residual_nonpositive_for_admissible_lambda() {
    for l in [0.01, 0.05, 0.1, 0.2] {
        let s = SupersolutionParams::new(l, 0.05, 0.5, 0.2).unwrap();
        for i in 0..200 {
            let th = -PI + 2.0 * PI * i as f64 / 200.0;
            for x2 in [0.0, 1.0, 10.0] {
                let r = stationary_supersol_residual(x2, th, &s);
                let closed = (-l * x2).exp() * (-l * l / 2.0 - l.powi(3) / 8.0 * th.sin() * (2.0 * th).cos());
                assert_eq!(r, closed);
                assert!(r <= 0.0);
            }
        }
    }
}

/// `e^{σt}(∂t − sinθ∂x2 − ∂θ²)W` from central differences of the
/// transported shape, independent of the analytic residual.
fn subsol_bracket_fd(t: f64, x2: f64, th: f64, s: &SupersolutionParams, c: &PhasePoint) -> f64 {
    let v = |t: f64, x: f64, th: f64| subsol_shape(x + t * th.sin(), th, s, c);
    let h = 1e-5;
    let vt = (v(t + h, x2, th) - v(t - h, x2, th)) / (2.0 * h);
    let vx = (v(t, x2 + h, th) - v(t, x2 - h, th)) / (2.0 * h);
    let vtt = (v(t, x2, th + h) - 2.0 * v(t, x2, th) + v(t, x2, th - h)) / (h * h);
    -s.sigma() * v(t, x2, th) + vt - th.sin() * vx - vtt
}

#[test]
fn subsolution_holds_up_to_t_star() {
    let s = SupersolutionParams::default();
    let c = PhasePoint::new(0.0, 1.0, -0.5).unwrap();
    let t_star = find_t_star(&s, &c, 64, 200.0).unwrap();
    assert!(t_star > 0.0 && t_star < 200.0, "t* = {t_star}");
    let tol = 1e-5 * s.sigma();
    let mut worst_after = f64::NEG_INFINITY;
    for it in 0..=40 {
        let t = t_star * it as f64 / 40.0;
        for i in 0..41 {
            for j in 0..41 {
                let u = -1.0 + 2.0 * i as f64 / 40.0;
                let v = -1.0 + 2.0 * j as f64 / 40.0;
                if u * u + v * v > 1.0 {
                    continue;
                }
                let x2 = 1.0 + 0.4 * u;
                let th = -0.5 + 0.4 * v;
                assert!(subsol_bracket_fd(t, x2, th, &s, &c) <= tol, "t={t} ({x2},{th})");
                let w = parabolic_subsol_V(t, x2, th, &s, &c).unwrap();
                assert!((0.0..=1.0).contains(&w));
                assert!(subsol_residual(t, x2, th, &s, &c).unwrap() <= 0.0);
                if it == 40 {
                    worst_after = worst_after.max(subsol_bracket_fd(1.05 * t, x2, th, &s, &c));
                }
            }
        }
    }
    // t* is sharp: slightly later the sampled ball already has a violation.
    assert!(worst_after > 0.0);
}
