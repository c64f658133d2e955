//! Comparison profiles near the grazing point and in the far field.
//!
//! Notation: `y = x2 / t^{3/2}` and `ζ = θ / t^{1/2}` are the self-similar
//! variables; `w = ζ / (9y)^{1/3}` is the argument of `Λ`.

use std::f64::consts::PI;

use polykin_core::{wrap_angle, PhasePoint};
use serde::{Deserialize, Serialize};

use crate::gamma::{gamma, rgamma};
use crate::hyper::{kummer_m, kummer_m_deriv, tricomi_u_deriv};
use crate::{Result, SpecfunError};

/// Default validity region `|θ|³ + x2 ≤ 0.01·t^{3/2}` for `hat_f0`.
pub const DEFAULT_VALIDITY_BOUND: f64 = 0.01;

/// Default strength `k` of the `R₀` correction in `hat_f0`.
pub const DEFAULT_CORRECTION: f64 = 1.0;

const B: f64 = 2.0 / 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HolderParams {
    /// Hölder exponent, in `(0, 1/6)`.
    pub alpha: f64,
    /// Exponent of the singular steady profile, negative and small.
    pub alpha_sing: f64,
}

impl Default for HolderParams {
    fn default() -> Self {
        Self {
            alpha: 0.15,
            alpha_sing: -0.05,
        }
    }
}

impl HolderParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0 / 6.0) {
            return Err(SpecfunError::Parameter(format!(
                "alpha must lie in (0, 1/6), got {}",
                self.alpha
            )));
        }
        if !(self.alpha_sing < 0.0 && self.alpha_sing > -0.5) {
            return Err(SpecfunError::Parameter(format!(
                "alpha_sing must lie in (-1/2, 0), got {}",
                self.alpha_sing
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SupersolutionParams {
    pub lambda: f64,
    pub eta: f64,
    pub delta: f64,
    /// Subsolution ball radius `R`; the frequency is `σ = (2π/R)⁴`.
    pub r: f64,
}

impl Default for SupersolutionParams {
    fn default() -> Self {
        Self {
            lambda: 0.1,
            eta: 0.05,
            delta: 0.5,
            r: 0.2,
        }
    }
}

impl SupersolutionParams {
    pub const LAMBDA_MAX: f64 = 0.2;

    pub fn new(lambda: f64, eta: f64, delta: f64, r: f64) -> Result<Self> {
        let s = Self {
            lambda,
            eta,
            delta,
            r,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn sigma(&self) -> f64 {
        (2.0 * PI / self.r).powi(4)
    }

    /// Range checks plus a dense-θ check that the stationary residual of
    /// `F_λ` is nonpositive (it scales as `e^{−λx2}`, so θ alone decides).
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=Self::LAMBDA_MAX).contains(&self.lambda) {
            return Err(SpecfunError::Parameter(format!(
                "lambda must lie in [0, {}], got {}",
                Self::LAMBDA_MAX,
                self.lambda
            )));
        }
        if !(self.eta >= 0.0 && self.delta >= 0.0 && self.r > 0.0 && self.r.is_finite()) {
            return Err(SpecfunError::Parameter(format!(
                "need eta >= 0, delta >= 0, R > 0; got eta={}, delta={}, R={}",
                self.eta, self.delta, self.r
            )));
        }
        let n = 4096;
        for i in 0..n {
            let theta = -PI + 2.0 * PI * i as f64 / n as f64;
            let r = stationary_supersol_residual(0.0, theta, self);
            if r > 0.0 {
                return Err(SpecfunError::Parameter(format!(
                    "F_lambda residual {r} > 0 at theta = {theta}"
                )));
            }
        }
        Ok(())
    }
}

/// `Λ(ζ) = U(−α, 2/3, −ζ³)` with its first three derivatives.
///
/// For `ζ ≥ −1` the two-term connection form
/// `Λ = Γ(1/3)/Γ(1/3−α) M(−α; 2/3; −ζ³) − Γ(−1/3)/Γ(−α) ζ M(1/3−α; 4/3; −ζ³)`
/// is differentiated directly (it is smooth through `ζ = 0`). Below that the
/// `U` derivative relations are used, which avoid the cancellation between the
/// two exponentially large `M` terms.
pub fn lambda_derivs(zeta: f64, p: &HolderParams) -> Result<[f64; 4]> {
    p.validate()?;
    let a = -p.alpha;
    let z = -zeta.powi(3);
    let dz = [-3.0 * zeta * zeta, -6.0 * zeta, -6.0];
    let chain = |d: [f64; 4]| {
        [
            d[0],
            d[1] * dz[0],
            d[2] * dz[0] * dz[0] + d[1] * dz[1],
            d[3] * dz[0].powi(3) + 3.0 * d[2] * dz[0] * dz[1] + d[1] * dz[2],
        ]
    };
    if zeta >= -1.0 {
        let ma = chain([
            kummer_m(a, B, z)?,
            kummer_m_deriv(a, B, z, 1)?,
            kummer_m_deriv(a, B, z, 2)?,
            kummer_m_deriv(a, B, z, 3)?,
        ]);
        let a2 = a + 1.0 / 3.0;
        let c = chain([
            kummer_m(a2, 4.0 / 3.0, z)?,
            kummer_m_deriv(a2, 4.0 / 3.0, z, 1)?,
            kummer_m_deriv(a2, 4.0 / 3.0, z, 2)?,
            kummer_m_deriv(a2, 4.0 / 3.0, z, 3)?,
        ]);
        // (−ζ C)^{(n)} = −n C^{(n−1)} − ζ C^{(n)}
        let mb = [
            -zeta * c[0],
            -c[0] - zeta * c[1],
            -2.0 * c[1] - zeta * c[2],
            -3.0 * c[2] - zeta * c[3],
        ];
        let c1 = gamma(1.0 / 3.0) * rgamma(a + 1.0 / 3.0);
        let c2 = gamma(-1.0 / 3.0) * rgamma(a);
        let mut out = [0.0; 4];
        for i in 0..4 {
            out[i] = c1 * ma[i] + c2 * mb[i];
        }
        return Ok(out);
    }
    let u = [
        tricomi_u_deriv(a, B, z, 0)?,
        tricomi_u_deriv(a, B, z, 1)?,
        tricomi_u_deriv(a, B, z, 2)?,
        tricomi_u_deriv(a, B, z, 3)?,
    ];
    Ok(chain(u))
}

pub fn lambda_profile(zeta: f64, p: &HolderParams) -> Result<f64> {
    Ok(lambda_derivs(zeta, p)?[0])
}

/// Singular steady profile `f*₀ = x2^{α_s} M(−α_s; 2/3; −θ³/(9x2))`.
pub fn fstar0(x2: f64, theta: f64, p: &HolderParams) -> Result<f64> {
    p.validate()?;
    if !(x2 > 0.0) {
        return Err(SpecfunError::Domain(format!(
            "fstar0 blows up at x2 = 0 (got x2 = {x2})"
        )));
    }
    let z = -theta.powi(3) / (9.0 * x2);
    Ok(x2.powf(p.alpha_sing) * kummer_m(-p.alpha_sing, B, z)?)
}

/// Residual of `θ ∂x2 f − ∂θ² f` for `f = f*₀`, from analytic derivatives.
/// Returns `(residual, scale)` with `scale = |θ ∂x2 f| + |∂θ² f|`.
pub fn fstar0_residual(x2: f64, theta: f64, p: &HolderParams) -> Result<(f64, f64)> {
    p.validate()?;
    if !(x2 > 0.0) {
        return Err(SpecfunError::Domain(format!("x2 must be > 0, got {x2}")));
    }
    let a = -p.alpha_sing;
    let s = -theta.powi(3) / (9.0 * x2);
    let m0 = kummer_m(a, B, s)?;
    let m1 = kummer_m_deriv(a, B, s, 1)?;
    let m2 = kummer_m_deriv(a, B, s, 2)?;
    let pw = x2.powf(p.alpha_sing);
    let f_x = pw / x2 * (p.alpha_sing * m0 - s * m1);
    let f_tt = pw * (m2 * theta.powi(4) / (9.0 * x2 * x2) - m1 * 2.0 * theta / (3.0 * x2));
    let lhs = theta * f_x;
    Ok((lhs - f_tt, lhs.abs() + f_tt.abs()))
}

/// Partial derivatives of `F₀(y, ζ)`; subscripts name the variables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct F0Partials {
    pub f: f64,
    pub f_y: f64,
    pub f_z: f64,
    pub f_zz: f64,
    pub f_zzz: f64,
    pub f_zy: f64,
}

pub fn f0_selfsim_partials(y: f64, zeta: f64, p: &HolderParams) -> Result<F0Partials> {
    if !(y > 0.0) {
        return Err(SpecfunError::Domain(format!("F0 needs y > 0, got {y}")));
    }
    let s = (9.0 * y).cbrt();
    let w = zeta / s;
    let l = lambda_derivs(w, p)?;
    let ya = y.powf(p.alpha);
    let al = p.alpha;
    Ok(F0Partials {
        f: ya * l[0],
        f_y: ya / y * (al * l[0] - w * l[1] / 3.0),
        f_z: ya * l[1] / s,
        f_zz: ya * l[2] / (s * s),
        f_zzz: ya * l[3] / (s * s * s),
        f_zy: ya / (y * s) * ((al - 1.0 / 3.0) * l[1] - w * l[2] / 3.0),
    })
}

/// `F₀(y, ζ) = y^α Λ(ζ / (9y)^{1/3})`.
pub fn f0_selfsim(y: f64, zeta: f64, p: &HolderParams) -> Result<f64> {
    Ok(f0_selfsim_partials(y, zeta, p)?.f)
}

/// Value of the self-similar supersolution near the grazing point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HatF0 {
    pub value: f64,
    /// Uncorrected `F₀` part.
    pub f0: f64,
    /// Correction `R₀` (zero when disabled).
    pub correction: f64,
    /// False when `(x2, θ)` lies outside `|θ|³ + x2 ≤ bound·t^{3/2}`.
    pub in_region: bool,
}

struct ZParts {
    z: f64,
    z_y: f64,
    z_z: f64,
    z_zz: f64,
    f0: f64,
}

/// `Z = F₀ + R₀` with `R₀ = −k (ζ² F₀ + 3y ∂ζF₀)`.
///
/// `R = ζ²F₀ + 3y∂ζF₀` satisfies `(∂ζ² − ζ∂y) R = (2 + 3α) F₀` and the Euler
/// relation `(½ζ∂ζ + 3/2 y∂y) R = (1 + 3α/2) R`, so `R₀` turns the deficit
/// `3α/2 F₀` of the bare profile into a surplus once `k(2 + 3α) > 3α/2`,
/// while staying `O(y^{2/3} + ζ²)` relative to `F₀`.
fn z_parts(y: f64, zeta: f64, k: f64, p: &HolderParams) -> Result<ZParts> {
    let d = f0_selfsim_partials(y, zeta, p)?;
    let r = zeta * zeta * d.f + 3.0 * y * d.f_z;
    let r_z = 2.0 * zeta * d.f + zeta * zeta * d.f_z + 3.0 * y * d.f_zz;
    let r_zz = 2.0 * d.f + 4.0 * zeta * d.f_z + zeta * zeta * d.f_zz + 3.0 * y * d.f_zzz;
    let r_y = zeta * zeta * d.f_y + 3.0 * d.f_z + 3.0 * y * d.f_zy;
    Ok(ZParts {
        z: d.f - k * r,
        z_y: d.f_y - k * r_y,
        z_z: d.f_z - k * r_z,
        z_zz: d.f_zz - k * r_zz,
        f0: d.f,
    })
}

fn check_t(t: f64, x2: f64) -> Result<()> {
    if !(t > 0.0) || !(x2 > 0.0) {
        return Err(SpecfunError::Domain(format!(
            "hat_f0 needs t > 0 and x2 > 0, got t = {t}, x2 = {x2}"
        )));
    }
    Ok(())
}

/// `hat_f0(t, x2, θ) = Z(x2/t^{3/2}, θ/t^{1/2})`; `correction = None`
/// disables `R₀`, `Some(k)` sets its strength.
pub fn hat_f0(t: f64, x2: f64, theta: f64, p: &HolderParams, correction: Option<f64>) -> Result<HatF0> {
    check_t(t, x2)?;
    let theta = wrap_angle(theta).map_err(|e| SpecfunError::Domain(e.to_string()))?.value();
    let y = x2 / t.powf(1.5);
    let zeta = theta / t.sqrt();
    let k = correction.unwrap_or(0.0);
    let zp = z_parts(y, zeta, k, p)?;
    Ok(HatF0 {
        value: zp.z,
        f0: zp.f0,
        correction: zp.z - zp.f0,
        in_region: theta.abs().powi(3) + x2 <= DEFAULT_VALIDITY_BOUND * t.powf(1.5),
    })
}

/// `(∂t + sinθ ∂x2 − ∂θ²) hat_f0` from analytic derivatives; returns
/// `(residual, value)`.
pub fn hat_f0_residual(t: f64, x2: f64, theta: f64, p: &HolderParams, correction: Option<f64>) -> Result<(f64, f64)> {
    check_t(t, x2)?;
    let y = x2 / t.powf(1.5);
    let zeta = theta / t.sqrt();
    let k = correction.unwrap_or(0.0);
    let zp = z_parts(y, zeta, k, p)?;
    let res = -1.5 * y / t * zp.z_y - 0.5 * zeta / t * zp.z_z + theta.sin() * t.powf(-1.5) * zp.z_y
        - zp.z_zz / t;
    Ok((res, zp.z))
}

/// `F_λ = e^{−λx2} (1 − λ sinθ − λ²/8 cos 2θ)`.
#[allow(non_snake_case)]
pub fn stationary_supersol_F(x2: f64, theta: f64, s: &SupersolutionParams) -> Result<f64> {
    if !(0.0..=SupersolutionParams::LAMBDA_MAX).contains(&s.lambda) {
        return Err(SpecfunError::Parameter(format!(
            "lambda {} outside [0, {}]",
            s.lambda,
            SupersolutionParams::LAMBDA_MAX
        )));
    }
    let l = s.lambda;
    Ok((-l * x2).exp() * (1.0 - l * theta.sin() - l * l / 8.0 * (2.0 * theta).cos()))
}

/// Closed form of `(−sinθ ∂x2 − ∂θ²) F_λ`.
pub fn stationary_supersol_residual(x2: f64, theta: f64, s: &SupersolutionParams) -> f64 {
    let l = s.lambda;
    (-l * x2).exp() * (-l * l / 2.0 - l.powi(3) / 8.0 * theta.sin() * (2.0 * theta).cos())
}

fn angle_diff(a: f64, b: f64) -> f64 {
    let d = (a - b + PI).rem_euclid(2.0 * PI) - PI;
    if d >= PI {
        d - 2.0 * PI
    } else {
        d
    }
}

fn check_ball(x2: f64, theta: f64, s: &SupersolutionParams, c: &PhasePoint) -> Result<()> {
    let dx = x2 - c.x2;
    let dt = angle_diff(theta, c.theta.value());
    if (dx * dx + dt * dt).sqrt() > 2.0 * s.r * (1.0 + 1e-12) {
        return Err(SpecfunError::Domain(format!(
            "({x2}, {theta}) lies outside the ball of radius 2R = {} around the centre",
            2.0 * s.r
        )));
    }
    Ok(())
}

/// `V(x2, θ) = ½ cos(σ^{1/4}(θ−θ₀)) cos(σ^{1/4}(x2−x₂₀)) + ½`.
pub fn subsol_shape(x2: f64, theta: f64, s: &SupersolutionParams, c: &PhasePoint) -> f64 {
    let q = s.sigma().powf(0.25);
    0.5 * (q * angle_diff(theta, c.theta.value())).cos() * (q * (x2 - c.x2)).cos() + 0.5
}

/// Subsolution `W(t, x2, θ) = e^{−σt} V(x2 + t sinθ, θ)`.
#[allow(non_snake_case)]
pub fn parabolic_subsol_V(t: f64, x2: f64, theta: f64, s: &SupersolutionParams, c: &PhasePoint) -> Result<f64> {
    check_ball(x2, theta, s, c)?;
    Ok((-s.sigma() * t).exp() * subsol_shape(x2 + t * theta.sin(), theta, s, c))
}

/// `(∂t − sinθ ∂x2 − ∂θ²) W`. Along the transported argument `X = x2 + t sinθ`
/// the first-order terms cancel and
/// `∂θ²W = e^{−σt}(V_θθ + 2t cosθ V_Xθ + t² cos²θ V_XX − t sinθ V_X)`.
pub fn subsol_residual(t: f64, x2: f64, theta: f64, s: &SupersolutionParams, c: &PhasePoint) -> Result<f64> {
    Ok((-s.sigma() * t).exp() * subsol_bracket(t, x2, theta, s, c)?)
}

/// Residual with the positive factor `e^{−σt}` removed.
fn subsol_bracket(t: f64, x2: f64, theta: f64, s: &SupersolutionParams, c: &PhasePoint) -> Result<f64> {
    check_ball(x2, theta, s, c)?;
    let sigma = s.sigma();
    let q = sigma.powf(0.25);
    let xx = x2 + t * theta.sin();
    let (st, ct) = (q * angle_diff(theta, c.theta.value())).sin_cos();
    let (sx, cx) = (q * (xx - c.x2)).sin_cos();
    let v = 0.5 * ct * cx + 0.5;
    let v_x = -0.5 * q * ct * sx;
    let v_xx = -0.5 * q * q * ct * cx;
    let v_tt = -0.5 * q * q * ct * cx;
    let v_xt = 0.5 * q * q * st * sx;
    let (sn, cs) = theta.sin_cos();
    Ok(-sigma * v - v_tt - 2.0 * t * cs * v_xt - t * t * cs * cs * v_xx + t * sn * v_x)
}

/// Largest `t* ≤ t_max` such that the subsolution residual is `≤ 0` at every
/// sample of the ball `B_{2R}` for all times in `[0, t*]` (scan, then
/// bisection on the first failing interval).
pub fn find_t_star(s: &SupersolutionParams, c: &PhasePoint, n_samples: usize, t_max: f64) -> Result<f64> {
    let mut pts = Vec::new();
    let n = n_samples.max(8);
    for i in 0..n {
        for j in 0..n {
            let u = -1.0 + 2.0 * (i as f64 + 0.5) / n as f64;
            let v = -1.0 + 2.0 * (j as f64 + 0.5) / n as f64;
            if u * u + v * v <= 1.0 {
                let x2 = c.x2 + 2.0 * s.r * u;
                if x2 >= 0.0 {
                    pts.push((x2, c.theta.value() + 2.0 * s.r * v));
                }
            }
        }
    }
    let ok = |t: f64| -> Result<bool> {
        for &(x2, th) in &pts {
            if subsol_bracket(t, x2, th, s, c)? > 0.0 {
                return Ok(false);
            }
        }
        Ok(true)
    };
    if !ok(0.0)? {
        return Ok(0.0);
    }
    let steps = 400;
    let mut lo = 0.0;
    for i in 1..=steps {
        let t = t_max * i as f64 / steps as f64;
        if !ok(t)? {
            let mut hi = t;
            for _ in 0..50 {
                let mid = 0.5 * (lo + hi);
                if ok(mid)? {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return Ok(lo);
        }
        lo = t;
    }
    Ok(t_max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> HolderParams {
        HolderParams::default()
    }

    #[test]
    fn lambda_at_zero_is_gamma_ratio() {
        let v = lambda_profile(0.0, &p()).unwrap();
        let expect = gamma(1.0 / 3.0) / gamma(1.0 / 3.0 - 0.15);
        assert!((v - expect).abs() < 1e-13);
    }

    #[test]
    fn lambda_positive_at_samples() {
        for z in [-3.0, -1.0, 0.0, 1.0, 3.0] {
            assert!(lambda_profile(z, &p()).unwrap() > 0.0, "zeta={z}");
        }
    }

    #[test]
    fn lambda_branches_join_smoothly() {
        let below = lambda_derivs(-1.0 - 1e-10, &p()).unwrap();
        let at = lambda_derivs(-1.0, &p()).unwrap();
        for i in 0..4 {
            assert!((below[i] - at[i]).abs() < 1e-8 * (1.0 + at[i].abs()), "deriv {i}");
        }
    }

    #[test]
    fn f0_plug_in() {
        let v = f0_selfsim(1.0, 0.0, &p()).unwrap();
        assert!((v - lambda_profile(0.0, &p()).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn fstar0_examples() {
        assert!((fstar0(1.0, 0.0, &p()).unwrap() - 1.0).abs() < 1e-15);
        assert!(fstar0(0.0, 0.1, &p()).is_err());
    }

    #[test]
    fn hat_f0_uncorrected_scaling_identity() {
        for &(x2, th) in &[(1e-3, 0.05), (4e-3, -0.1), (1e-4, 0.0)] {
            let h = hat_f0(1.0, x2, th, &p(), None).unwrap();
            let f = f0_selfsim(x2, th, &p()).unwrap();
            assert!((h.value - f).abs() < 1e-14 * f.abs());
            assert!(h.in_region);
        }
        assert!(!hat_f0(1.0, 0.5, 0.0, &p(), None).unwrap().in_region);
    }

    #[test]
    fn supersol_examples() {
        let s = SupersolutionParams::new(0.1, 0.05, 0.5, 0.2).unwrap();
        let r = stationary_supersol_residual(0.0, -PI / 2.0, &s);
        assert!((r + 0.005125).abs() < 1e-15);
        assert!(stationary_supersol_F(200.0, 0.3, &s).unwrap() < 1e-8);
        let zero = SupersolutionParams::new(0.0, 0.05, 0.5, 0.2).unwrap();
        assert_eq!(stationary_supersol_F(3.0, 1.0, &zero).unwrap(), 1.0);
        assert_eq!(stationary_supersol_residual(3.0, 1.0, &zero), 0.0);
        assert!(SupersolutionParams::new(0.25, 0.05, 0.5, 0.2).is_err());
    }

    #[test]
    fn supersol_residual_matches_finite_differences() {
        let s = SupersolutionParams::new(0.15, 0.0, 0.0, 0.2).unwrap();
        let h = 1e-4;
        let f = |x: f64, t: f64| stationary_supersol_F(x, t, &s).unwrap();
        for &(x, t) in &[(0.3, -1.0), (2.0, 0.4), (0.0 + 1.0, 2.9)] {
            let fx = (f(x + h, t) - f(x - h, t)) / (2.0 * h);
            let ftt = (f(x, t + h) - 2.0 * f(x, t) + f(x, t - h)) / (h * h);
            let fd = -t.sin() * fx - ftt;
            assert!((fd - stationary_supersol_residual(x, t, &s)).abs() < 1e-7);
        }
    }

    #[test]
    fn subsolution_examples() {
        let s = SupersolutionParams::default();
        let c = PhasePoint::new(0.0, 1.0, 0.0).unwrap();
        for t in [0.0, 1e-4, 1e-3] {
            let w = parabolic_subsol_V(t, 1.0, 0.0, &s, &c).unwrap();
            assert!((w - (-s.sigma() * t).exp()).abs() < 1e-14);
        }
        for i in 0..50 {
            let x2 = 0.65 + 0.7 * i as f64 / 49.0;
            let v = subsol_shape(x2, 0.1 * i as f64, &s, &c);
            assert!((0.0..=1.0).contains(&v));
        }
        assert!(parabolic_subsol_V(0.0, 2.0, 0.0, &s, &c).is_err());
    }

    #[test]
    fn subsol_residual_matches_finite_differences() {
        // A large radius keeps σ moderate so that differences resolve.
        let s = SupersolutionParams::new(0.1, 0.0, 0.0, 2.0).unwrap();
        let c = PhasePoint::new(0.0, 3.0, 0.3).unwrap();
        let w = |t: f64, x: f64, th: f64| parabolic_subsol_V(t, x, th, &s, &c).unwrap();
        let h = 1e-4;
        for &(t, x, th) in &[(0.01, 3.2, 0.5), (0.05, 2.5, -0.4), (0.02, 3.0, 0.3)] {
            let wt = (w(t + h, x, th) - w(t - h, x, th)) / (2.0 * h);
            let wx = (w(t, x + h, th) - w(t, x - h, th)) / (2.0 * h);
            let wtt = (w(t, x, th + h) - 2.0 * w(t, x, th) + w(t, x, th - h)) / (h * h);
            let fd = wt - th.sin() * wx - wtt;
            let an = subsol_residual(t, x, th, &s, &c).unwrap();
            assert!((fd - an).abs() < 1e-4 * (1.0 + an.abs()), "{fd} vs {an}");
        }
    }
}
