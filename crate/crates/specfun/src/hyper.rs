//! Kummer's `M(a; b; z)` and Tricomi's `U(a, b, z)` for real arguments.
//!
//! `M` uses its power series for `|z| ≤ 40` (through Kummer's transformation
//! `M(a; b; z) = e^z M(b − a; b; −z)` when `z < 0`, so every term has one
//! sign) and the leading asymptotic series beyond.
//!
//! `U` on `z > 0` comes from the Laplace integral
//! `Γ(a) U = ∫₀^∞ e^{−zt} t^{a−1} (1 + t)^{b−a−1} dt` for `a ≥ 1`, the
//! contiguous relation in `a` below that, and the asymptotic series for large
//! `z`. On `z < 0` we use the connection formula
//!
//! `U = Γ(1−b)/Γ(a−b+1) M(a; b; z) + Γ(b−1)/Γ(a) z^{1−b} M(a−b+1; 2−b; z)`
//!
//! with the real branch `z^{1−b} = (∛z)^{3(1−b)}`, which requires `3b` to be
//! an integer (and `b` itself not). This is the branch that keeps
//! `ζ ↦ U(a, b, −ζ³)` real-analytic, which is what the profiles need.

use crate::gamma::{gamma, rgamma};
use crate::quad::exp_sinh;
use crate::{Result, SpecfunError};

const Z_ASYMPTOTIC: f64 = 40.0;
const MAX_TERMS: usize = 20_000;

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

fn is_integer(x: f64) -> bool {
    x == x.round()
}

/// Plain power series `Σ (a)_n z^n / ((b)_n n!)`.
fn m_series(a: f64, b: f64, z: f64) -> Result<f64> {
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        term *= (a + nf) * z / ((b + nf) * (nf + 1.0));
        sum += term;
        if term == 0.0 || (term.abs() <= 1e-17 * sum.abs() && nf > z.abs()) {
            return Ok(sum);
        }
    }
    Err(SpecfunError::NonConvergence(format!("M series at a={a}, b={b}, z={z}")))
}

/// Truncated asymptotic series `Σ (p)_n (q)_n / n! · x^n`, stopped at the
/// smallest term.
fn asymptotic_2f0(p: f64, q: f64, x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut prev = f64::INFINITY;
    for n in 0..200 {
        let nf = n as f64;
        let next = term * (p + nf) * (q + nf) * x / (nf + 1.0);
        if next.abs() >= prev || next == 0.0 {
            break;
        }
        prev = next.abs();
        term = next;
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// Kummer's confluent hypergeometric function `M(a; b; z) = ₁F₁(a; b; z)`.
pub fn kummer_m(a: f64, b: f64, z: f64) -> Result<f64> {
    if !(a.is_finite() && b.is_finite() && z.is_finite()) {
        return Err(SpecfunError::Domain(format!("non-finite input ({a}, {b}, {z})")));
    }
    if is_nonpositive_integer(b) {
        return Err(SpecfunError::Pole(b));
    }
    if a == 0.0 || z == 0.0 {
        return Ok(1.0);
    }
    if is_nonpositive_integer(a) {
        // Terminating series: a polynomial of degree −a.
        return m_series(a, b, z);
    }
    if z >= 0.0 {
        if z <= Z_ASYMPTOTIC {
            return m_series(a, b, z);
        }
        if z > 700.0 {
            return Err(SpecfunError::Overflow { what: "M", z });
        }
        let lead = gamma(b) * rgamma(a) * z.exp() * z.powf(a - b);
        return Ok(lead * asymptotic_2f0(b - a, 1.0 - a, 1.0 / z));
    }
    // z < 0
    let bma = b - a;
    if z >= -Z_ASYMPTOTIC || is_nonpositive_integer(bma) {
        return Ok(z.exp() * m_series(bma, b, -z)?);
    }
    let x = -z;
    Ok(gamma(b) * rgamma(bma) * x.powf(-a) * asymptotic_2f0(a, a - b + 1.0, 1.0 / x))
}

/// `dⁿ/dzⁿ M(a; b; z) = (a)_n/(b)_n · M(a+n; b+n; z)`.
pub fn kummer_m_deriv(a: f64, b: f64, z: f64, n: u32) -> Result<f64> {
    let mut coef = 1.0;
    for i in 0..n {
        coef *= (a + i as f64) / (b + i as f64);
    }
    if coef == 0.0 {
        return Ok(0.0);
    }
    Ok(coef * kummer_m(a + n as f64, b + n as f64, z)?)
}

/// Real branch of `z^p` for `z < 0` when `3p` is an integer.
fn real_power_negative(z: f64, p: f64) -> Result<f64> {
    let m = 3.0 * p;
    if (m - m.round()).abs() > 1e-12 {
        return Err(SpecfunError::Domain(format!(
            "real branch of z^{p} for z < 0 needs 3·(1 − b) integer"
        )));
    }
    Ok(z.cbrt().powi(m.round() as i32))
}

fn u_connection(a: f64, b: f64, z: f64) -> Result<f64> {
    if is_integer(b) {
        return Err(SpecfunError::Domain(format!(
            "connection formula for U degenerates at integer b = {b}"
        )));
    }
    let p = 1.0 - b;
    let zp = if z < 0.0 {
        real_power_negative(z, p)?
    } else {
        z.powf(p)
    };
    let first = gamma(1.0 - b) * rgamma(a - b + 1.0);
    let second = gamma(b - 1.0) * rgamma(a);
    let mut v = 0.0;
    if first != 0.0 {
        v += first * kummer_m(a, b, z)?;
    }
    if second != 0.0 {
        v += second * zp * kummer_m(a - b + 1.0, 2.0 - b, z)?;
    }
    Ok(v)
}

fn u_integral(a: f64, b: f64, z: f64) -> Result<f64> {
    debug_assert!(a >= 1.0 && z > 0.0);
    let h = |t: f64| (-z * t).exp() * t.powf(a - 1.0) * (1.0 + t).powf(b - a - 1.0);
    Ok(exp_sinh(h, 1e-14)? * rgamma(a))
}

fn u_positive(a: f64, b: f64, z: f64) -> Result<f64> {
    if z >= Z_ASYMPTOTIC {
        return Ok(z.powf(-a) * asymptotic_2f0(a, a - b + 1.0, -1.0 / z));
    }
    if z <= 1.0 && !is_integer(b) {
        return u_connection(a, b, z);
    }
    if a >= 1.0 {
        return u_integral(a, b, z);
    }
    // U(a−1) = (2a − b + z) U(a) − a(a − b + 1) U(a + 1); U decreases in a,
    // so running the relation downward is stable.
    let steps = (1.0 - a).ceil() as usize;
    let top = a + steps as f64;
    let mut u_hi = u_integral(top + 1.0, b, z)?;
    let mut u_mid = u_integral(top, b, z)?;
    let mut cur = top;
    for _ in 0..steps {
        let u_lo = (2.0 * cur - b + z) * u_mid - cur * (cur - b + 1.0) * u_hi;
        u_hi = u_mid;
        u_mid = u_lo;
        cur -= 1.0;
    }
    Ok(u_mid)
}

/// Tricomi's confluent hypergeometric function `U(a, b, z)`.
///
/// For `z < 0` this is the real branch described in the module docs.
pub fn tricomi_u(a: f64, b: f64, z: f64) -> Result<f64> {
    if !(a.is_finite() && b.is_finite() && z.is_finite()) {
        return Err(SpecfunError::Domain(format!("non-finite input ({a}, {b}, {z})")));
    }
    if a == 0.0 {
        return Ok(1.0);
    }
    if z == 0.0 {
        if b < 1.0 {
            return Ok(gamma(1.0 - b) * rgamma(a - b + 1.0));
        }
        return Err(SpecfunError::Domain(format!("U(a, b, 0) is singular for b = {b} >= 1")));
    }
    if z > 0.0 {
        return u_positive(a, b, z);
    }
    u_connection(a, b, z)
}

/// `dⁿ/dzⁿ U(a, b, z) = (−1)ⁿ (a)_n U(a+n, b+n, z)`.
pub fn tricomi_u_deriv(a: f64, b: f64, z: f64, n: u32) -> Result<f64> {
    let mut coef = 1.0;
    for i in 0..n {
        coef *= -(a + i as f64);
    }
    if coef == 0.0 {
        return Ok(0.0);
    }
    Ok(coef * tricomi_u(a + n as f64, b + n as f64, z)?)
}
