use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::{AdjointError, Result};

const HALF_WIDTH: f64 = 0.2;
const NODES_PER_BUMP: usize = 200;

/// Symmetric jump density `ζ(ν)` sampled as quadrature weights.
///
/// `weights[m]` already contains `ζ(ν_m)·dν`, so the discrete moments are
/// `Σ w = 1`, `Σ ν w = 0`, `Σ ν² w = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JumpKernel {
    pub nu: Vec<f64>,
    pub weights: Vec<f64>,
    /// Bump centres sit at `±centre`.
    pub centre: f64,
    raw_mass: f64,
}

fn bump(u: f64) -> f64 {
    if u.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - u * u)).exp()
    }
}

impl JumpKernel {
    pub fn moment(&self, p: i32) -> f64 {
        self.nu.iter().zip(&self.weights).map(|(n, w)| n.powi(p) * w).sum()
    }

    /// `ζ(ν)` as a density (zero off the support).
    pub fn density(&self, nu: f64) -> f64 {
        (bump((nu - self.centre) / HALF_WIDTH) + bump((nu + self.centre) / HALF_WIDTH)) / self.raw_mass
    }

    pub fn support_radius(&self) -> f64 {
        self.centre + HALF_WIDTH
    }
}

fn build(centre: f64) -> JumpKernel {
    // Interior nodes of one bump; the endpoints carry zero weight.
    let h = 2.0 * HALF_WIDTH / NODES_PER_BUMP as f64;
    let mut right = Vec::with_capacity(NODES_PER_BUMP - 1);
    for i in 1..NODES_PER_BUMP {
        let u = -1.0 + i as f64 * h / HALF_WIDTH;
        right.push((centre + HALF_WIDTH * u, bump(u) * h));
    }
    let mut nu = Vec::with_capacity(2 * right.len());
    let mut weights = Vec::with_capacity(2 * right.len());
    for &(n, w) in right.iter().rev() {
        nu.push(-n);
        weights.push(w);
    }
    for &(n, w) in &right {
        nu.push(n);
        weights.push(w);
    }
    let mass: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= mass);
    JumpKernel {
        nu,
        weights,
        centre,
        raw_mass: mass,
    }
}

/// Two smooth bumps at `±c` of half-width 0.2, with `c` tuned by bisection so
/// that the second moment is 1.
pub fn make_zeta() -> JumpKernel {
    let (mut lo, mut hi) = (0.5, 1.1);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if build(mid).moment(2) < 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let k = build(0.5 * (lo + hi));
    assert!((k.moment(2) - 1.0).abs() < 1e-12, "second moment tuning failed");
    k
}

/// Circulant stencil of `Q^ε` on a θ grid: `(Q u)_k = Σ_j c_j (u_{k+j} − u_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct JumpStencil {
    pub epsilon: f64,
    /// `(offset, coefficient)` with the `2/ε²` factor included; offset 0 omitted.
    pub taps: Vec<(isize, f64)>,
}

/// Cubic Lagrange weights for the point `base + f`, `f ∈ [0, 1)`, on nodes
/// `base − 1 .. base + 2`.
pub(crate) fn cubic_weights(f: f64) -> [f64; 4] {
    [
        -f * (f - 1.0) * (f - 2.0) / 6.0,
        (f + 1.0) * (f - 1.0) * (f - 2.0) / 2.0,
        -(f + 1.0) * f * (f - 2.0) / 2.0,
        (f + 1.0) * f * (f - 1.0) / 6.0,
    ]
}

impl JumpStencil {
    pub fn new(kernel: &JumpKernel, epsilon: f64, n_theta: usize) -> Result<Self> {
        if !(epsilon > 0.0) || epsilon * kernel.support_radius() >= PI {
            return Err(AdjointError::Parameter(format!("epsilon = {epsilon} out of range")));
        }
        let h = 2.0 * PI / n_theta as f64;
        let reach = (epsilon * kernel.support_radius() / h).ceil() as isize + 2;
        let mut dense = vec![0.0; (2 * reach + 1) as usize];
        for (nu, w) in kernel.nu.iter().zip(&kernel.weights) {
            let s = epsilon * nu / h;
            let base = s.floor();
            let cw = cubic_weights(s - base);
            for (m, c) in cw.iter().enumerate() {
                let off = base as isize - 1 + m as isize;
                dense[(off + reach) as usize] += w * c;
            }
        }
        let scale = 2.0 / (epsilon * epsilon);
        // Offsets wrap onto the periodic grid when the stencil is wider than it.
        let mut taps = Vec::new();
        for (i, c) in dense.iter().enumerate() {
            let off = i as isize - reach;
            if off != 0 && *c != 0.0 {
                taps.push((off, scale * c));
            }
        }
        Ok(Self { epsilon, taps })
    }

    /// Sum of the coefficients `2/ε²·Σ c_j` (the total jump rate seen by `u_k`).
    pub fn rate(&self) -> f64 {
        self.taps.iter().map(|t| t.1).sum()
    }

    /// Largest stable explicit step, `ε²/4`.
    pub fn max_dt(&self) -> f64 {
        0.25 * self.epsilon * self.epsilon
    }

    pub fn apply_column(&self, u: &[f64], out: &mut [f64]) {
        let n = u.len() as isize;
        for k in 0..u.len() {
            let uk = u[k];
            let mut acc = 0.0;
            for &(off, c) in &self.taps {
                let j = (k as isize + off).rem_euclid(n) as usize;
                acc += c * (u[j] - uk);
            }
            out[k] = acc;
        }
    }
}

/// `Q^ε[u](θ) = (2/ε²) ∫ (u(θ + εν) − u(θ)) ζ(ν) dν` for a continuous `u`.
pub fn apply_qeps_fn(u: impl Fn(f64) -> f64, theta: f64, epsilon: f64, kernel: &JumpKernel) -> f64 {
    let u0 = u(theta);
    let s: f64 = kernel
        .nu
        .iter()
        .zip(&kernel.weights)
        .map(|(nu, w)| w * (u(theta + epsilon * nu) - u0))
        .sum();
    2.0 * s / (epsilon * epsilon)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moments_and_symmetry() {
        let k = make_zeta();
        assert!((k.moment(0) - 1.0).abs() < 1e-12);
        assert!(k.moment(1).abs() < 1e-12);
        assert!((k.moment(2) - 1.0).abs() < 1e-12);
        let n = k.nu.len();
        for i in 0..n {
            assert_eq!(k.nu[i], -k.nu[n - 1 - i]);
            assert_eq!(k.weights[i], k.weights[n - 1 - i]);
        }
        assert!(k.nu.iter().all(|v| v.abs() <= 1.3));
        assert!(k.weights.iter().all(|w| *w >= 0.0));
    }

    #[test]
    fn cubic_weights_reproduce_cubics() {
        for f in [0.0, 0.25, 0.7] {
            let w = cubic_weights(f);
            for p in 0..4 {
                let v: f64 = (0..4).map(|m| w[m] * (m as f64 - 1.0).powi(p)).sum();
                assert!((v - f.powi(p)).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn stencil_kills_constants() {
        let k = make_zeta();
        let st = JumpStencil::new(&k, 0.05, 64).unwrap();
        let u = vec![3.0; 64];
        let mut out = vec![1.0; 64];
        st.apply_column(&u, &mut out);
        assert!(out.iter().all(|v| *v == 0.0));
    }
}
