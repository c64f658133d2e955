use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::{CoreError, Result};

fn default_diffusion() -> f64 {
    1.0
}

/// Tensor grid over `[x1_min, x1_max) × [0, x2_max] × [−π, π)`.
///
/// `x1` and `x2` are split into cells (values are cell averages); `θ` uses
/// the nodes `θ_k = −π + kΔθ`. The `x1` direction is periodic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub x1_min: f64,
    pub x1_max: f64,
    pub n_x1: usize,
    pub x2_max: f64,
    pub n_x2: usize,
    pub n_theta: usize,
    pub dt: f64,
    /// Angular diffusion coefficient.
    #[serde(default = "default_diffusion", alias = "D")]
    pub d: f64,
}

impl GridSpec {
    pub fn new(
        (x1_min, x1_max, n_x1): (f64, f64, usize),
        (x2_max, n_x2): (f64, usize),
        n_theta: usize,
        dt: f64,
    ) -> Result<Self> {
        let g = Self {
            x1_min,
            x1_max,
            n_x1,
            x2_max,
            n_x2,
            n_theta,
            dt,
            d: 1.0,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn with_diffusion(mut self, d: f64) -> Result<Self> {
        self.d = d;
        self.validate()?;
        Ok(self)
    }

    pub fn with_dt(mut self, dt: f64) -> Result<Self> {
        self.dt = dt;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(CoreError::InvalidGrid(msg));
        if self.n_x1 < 4 || self.n_x2 < 4 || self.n_theta < 4 {
            return bad(format!(
                "all counts must be >= 4 (n_x1={}, n_x2={}, n_theta={})",
                self.n_x1, self.n_x2, self.n_theta
            ));
        }
        if self.n_theta % 2 != 0 {
            return bad(format!("n_theta must be even, got {}", self.n_theta));
        }
        if !(self.x1_max > self.x1_min) || !self.x1_min.is_finite() || !self.x1_max.is_finite() {
            return bad(format!("x1 range [{}, {}) is empty", self.x1_min, self.x1_max));
        }
        if !(self.x2_max > 0.0) || !self.x2_max.is_finite() {
            return bad(format!("x2_max must be > 0, got {}", self.x2_max));
        }
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return bad(format!("dt must be > 0, got {}", self.dt));
        }
        if !(self.d >= 0.0) || !self.d.is_finite() {
            return bad(format!("diffusion coefficient must be >= 0, got {}", self.d));
        }
        Ok(())
    }

    pub fn dx1(&self) -> f64 {
        (self.x1_max - self.x1_min) / self.n_x1 as f64
    }

    pub fn dx2(&self) -> f64 {
        self.x2_max / self.n_x2 as f64
    }

    pub fn dtheta(&self) -> f64 {
        2.0 * PI / self.n_theta as f64
    }

    pub fn x1_len(&self) -> f64 {
        self.x1_max - self.x1_min
    }

    pub fn x1(&self, i: usize) -> f64 {
        self.x1_min + (i as f64 + 0.5) * self.dx1()
    }

    pub fn x2(&self, j: usize) -> f64 {
        (j as f64 + 0.5) * self.dx2()
    }

    pub fn theta(&self, k: usize) -> f64 {
        -PI + k as f64 * self.dtheta()
    }

    /// Index of the node `θ = 0`.
    pub fn k_zero(&self) -> usize {
        self.n_theta / 2
    }

    /// Index of the node `θ = −π/2`.
    pub fn k_down(&self) -> usize {
        self.n_theta / 4
    }

    /// Index of the θ node nearest to `theta` (periodic).
    pub fn nearest_theta(&self, theta: f64) -> usize {
        let w = crate::angle::wrap(theta);
        let k = ((w + PI) / self.dtheta()).round() as usize;
        k % self.n_theta
    }

    /// Index of the node `π − θ_k` (the reflection that swaps `0` and `−π`).
    pub fn reflect_theta(&self, k: usize) -> usize {
        (3 * self.n_theta / 2 - k) % self.n_theta
    }

    /// Measure of one `(x1, x2, θ)` cell.
    pub fn cell_volume(&self) -> f64 {
        self.dx1() * self.dx2() * self.dtheta()
    }

    /// Measure of one `(x2, θ)` cell of the reduced grid.
    pub fn reduced_cell_area(&self) -> f64 {
        self.dx2() * self.dtheta()
    }

    pub fn len_full(&self) -> usize {
        self.n_x1 * self.n_x2 * self.n_theta
    }

    pub fn len_reduced(&self) -> usize {
        self.n_x2 * self.n_theta
    }

    /// Flat index of `(i1, i2, k)`; θ is the fastest axis.
    #[inline]
    pub fn idx(&self, i1: usize, i2: usize, k: usize) -> usize {
        (i1 * self.n_x2 + i2) * self.n_theta + k
    }

    #[inline]
    pub fn ridx(&self, i2: usize, k: usize) -> usize {
        i2 * self.n_theta + k
    }

    /// Same grid with every count doubled and the time step halved.
    pub fn refined(&self) -> Self {
        Self {
            n_x1: 2 * self.n_x1,
            n_x2: 2 * self.n_x2,
            n_theta: 2 * self.n_theta,
            dt: 0.5 * self.dt,
            ..*self
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> GridSpec {
        GridSpec::new((-2.0, 2.0, 8), (4.0, 16), 16, 0.1).unwrap()
    }

    #[test]
    fn special_angles_are_nodes() {
        let g = grid();
        assert_eq!(g.theta(0), -PI);
        assert!((g.theta(g.k_down()) + PI / 2.0).abs() < 1e-15);
        assert!(g.theta(g.k_zero()).abs() < 1e-15);
    }

    #[test]
    fn reflection_swaps_zero_and_minus_pi() {
        let g = grid();
        assert_eq!(g.reflect_theta(g.k_zero()), 0);
        assert_eq!(g.reflect_theta(0), g.k_zero());
        assert_eq!(g.reflect_theta(g.k_down()), g.k_down());
        for k in 0..g.n_theta {
            let r = g.reflect_theta(k);
            assert_eq!(g.reflect_theta(r), k);
            let expect = crate::wrap_angle(PI - g.theta(k)).unwrap().value();
            assert!((g.theta(r) - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn nearest_theta_round_trip() {
        let g = grid();
        for k in 0..g.n_theta {
            assert_eq!(g.nearest_theta(g.theta(k)), k);
            assert_eq!(g.nearest_theta(g.theta(k) + 2.0 * PI), k);
        }
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(GridSpec::new((-1.0, 1.0, 8), (1.0, 8), 15, 0.1).is_err());
        assert!(GridSpec::new((-1.0, 1.0, 3), (1.0, 8), 16, 0.1).is_err());
        assert!(GridSpec::new((-1.0, 1.0, 8), (1.0, 8), 16, -0.1).is_err());
        assert!(GridSpec::new((-1.0, 1.0, 8), (0.0, 8), 16, 0.1).is_err());
        assert!(GridSpec::new((1.0, 1.0, 8), (1.0, 8), 16, 0.1).is_err());
    }

    #[test]
    fn refined_doubles_counts() {
        let r = grid().refined();
        assert_eq!((r.n_x1, r.n_x2, r.n_theta), (16, 32, 32));
        assert_eq!(r.dt, 0.05);
    }
}
