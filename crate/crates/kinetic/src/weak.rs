use std::f64::consts::PI;

use rayon::prelude::*;

use crate::{KineticError, KineticState, Result};

/// Test function for the weak formulation. Derivatives default to central
/// differences.
pub trait TestFunction: Sync {
    fn value(&self, t: f64, x1: f64, x2: f64, theta: f64) -> f64;

    fn d_t(&self, t: f64, x1: f64, x2: f64, theta: f64) -> f64 {
        let h = 1e-5;
        (self.value(t + h, x1, x2, theta) - self.value(t - h, x1, x2, theta)) / (2.0 * h)
    }

    fn d_x1(&self, t: f64, x1: f64, x2: f64, theta: f64) -> f64 {
        let h = 1e-5;
        (self.value(t, x1 + h, x2, theta) - self.value(t, x1 - h, x2, theta)) / (2.0 * h)
    }

    fn d_x2(&self, t: f64, x1: f64, x2: f64, theta: f64) -> f64 {
        let h = 1e-5;
        (self.value(t, x1, x2 + h, theta) - self.value(t, x1, x2 - h, theta)) / (2.0 * h)
    }

    fn d_theta2(&self, t: f64, x1: f64, x2: f64, theta: f64) -> f64 {
        let h = 1e-4;
        (self.value(t, x1, x2, theta + h) - 2.0 * self.value(t, x1, x2, theta)
            + self.value(t, x1, x2, theta - h))
            / (h * h)
    }
}

impl<F: Fn(f64, f64, f64, f64) -> f64 + Sync> TestFunction for F {
    fn value(&self, t: f64, x1: f64, x2: f64, theta: f64) -> f64 {
        self(t, x1, x2, theta)
    }
}

/// `∫ f φ` including the trapped parts on the wall.
fn pairing<P: TestFunction + ?Sized>(phi: &P, s: &KineticState) -> f64 {
    let g = s.grid();
    let t = s.time;
    let vol = g.cell_volume();
    let block = g.n_x2 * g.n_theta;
    let interior: f64 = s
        .f
        .values
        .par_chunks(block)
        .enumerate()
        .map(|(i1, vals)| {
            let x1 = g.x1(i1);
            let mut acc = 0.0;
            for j in 0..g.n_x2 {
                for k in 0..g.n_theta {
                    let v = vals[j * g.n_theta + k];
                    if v != 0.0 {
                        acc += v * phi.value(t, x1, g.x2(j), g.theta(k));
                    }
                }
            }
            acc
        })
        .sum();
    let (p, m) = (s.boundary.plus_on_grid(), s.boundary.minus_on_grid());
    let mut wall = 0.0;
    for i in 0..g.n_x1 {
        let x1 = g.x1(i);
        wall += p[i] * phi.value(t, x1, 0.0, 0.0) + m[i] * phi.value(t, x1, 0.0, -PI);
    }
    interior * vol + wall * g.dx1()
}

/// Integrand of the time integral on the left of the weak identity.
fn generator_pairing<P: TestFunction + ?Sized>(phi: &P, s: &KineticState) -> f64 {
    let g = s.grid();
    let t = s.time;
    let vol = g.cell_volume();
    let block = g.n_x2 * g.n_theta;
    let interior: f64 = s
        .f
        .values
        .par_chunks(block)
        .enumerate()
        .map(|(i1, vals)| {
            let x1 = g.x1(i1);
            let mut acc = 0.0;
            for j in 0..g.n_x2 {
                let x2 = g.x2(j);
                for k in 0..g.n_theta {
                    let v = vals[j * g.n_theta + k];
                    if v == 0.0 {
                        continue;
                    }
                    let th = g.theta(k);
                    let (sn, cs) = th.sin_cos();
                    let lphi = phi.d_t(t, x1, x2, th)
                        + cs * phi.d_x1(t, x1, x2, th)
                        + sn * phi.d_x2(t, x1, x2, th)
                        + g.d * phi.d_theta2(t, x1, x2, th);
                    acc += v * lphi;
                }
            }
            acc
        })
        .sum();
    let (p, m) = (s.boundary.plus_on_grid(), s.boundary.minus_on_grid());
    let mut wall = 0.0;
    for i in 0..g.n_x1 {
        let x1 = g.x1(i);
        if p[i] != 0.0 {
            wall += p[i] * (phi.d_t(t, x1, 0.0, 0.0) + phi.d_x1(t, x1, 0.0, 0.0));
        }
        if m[i] != 0.0 {
            wall += m[i] * (phi.d_t(t, x1, 0.0, -PI) - phi.d_x1(t, x1, 0.0, -PI));
        }
    }
    interior * vol + wall * g.dx1()
}

/// Streaming evaluation of the weak-form defect: feed every state of a
/// trajectory in time order, the time integral uses the trapezoid rule.
pub struct WeakResidual<'a, P: TestFunction + ?Sized> {
    phi: &'a P,
    initial_pairing: f64,
    last: (f64, f64),
    integral: f64,
    grid: polykin_core::GridSpec,
}

impl<'a, P: TestFunction + ?Sized> WeakResidual<'a, P> {
    pub fn new(phi: &'a P, initial: &KineticState) -> Self {
        Self {
            phi,
            initial_pairing: pairing(phi, initial),
            last: (initial.time, generator_pairing(phi, initial)),
            integral: 0.0,
            grid: initial.grid(),
        }
    }

    pub fn observe(&mut self, s: &KineticState) -> Result<()> {
        if s.grid() != self.grid {
            return Err(KineticError::GridMismatch("trajectory changes grid".into()));
        }
        let g = generator_pairing(self.phi, s);
        self.integral += 0.5 * (s.time - self.last.0) * (g + self.last.1);
        self.last = (s.time, g);
        Ok(())
    }

    /// `|LHS − (⟨f(T), φ(T)⟩ − ⟨f_in, φ(0)⟩)|` with `f(T)` the last observed state.
    pub fn defect(&self, last: &KineticState) -> f64 {
        (self.integral - (pairing(self.phi, last) - self.initial_pairing)).abs()
    }
}

pub fn weak_residual<P: TestFunction + ?Sized>(trajectory: &[KineticState], phi: &P) -> Result<f64> {
    let first = trajectory.first().ok_or(KineticError::EmptyTrajectory)?;
    let mut acc = WeakResidual::new(phi, first);
    for s in &trajectory[1..] {
        acc.observe(s)?;
    }
    Ok(acc.defect(trajectory.last().unwrap()))
}
