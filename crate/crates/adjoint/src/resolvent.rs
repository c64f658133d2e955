use polykin_core::GridSpec;

use crate::solver::{transport_reduced, AdjointField, AdjointParams, ReducedAdjoint};
use crate::{AdjointError, Result};

/// Laplace average `u = ∫ e^{−s} ψ(λs) ds` of a reduced adjoint trajectory.
#[derive(Debug, Clone)]
pub struct Resolvent {
    pub u: AdjointField,
    /// Wall values `u(0, θ_k)` for `θ_k ∈ [−π, 0]` (zero elsewhere).
    pub wall: Vec<f64>,
    /// `‖λ L_h u − (u − g)‖∞`.
    pub residual: f64,
    pub g_norm: f64,
    pub horizon: f64,
    pub lambda: f64,
}

pub const DEFAULT_TAIL_TOL: f64 = 1e-10;

/// Reduced resolvent. The time quadrature uses the weights `(1 − q) q^n`
/// with `q = λ/(λ + dt)`, the discrete Laplace transform of the stepper, so
/// constants are reproduced exactly and `u − g = λ L_h u` holds for the
/// one-step generator `L_h = (S_dt − I)/dt` up to quadrature roundoff and the
/// horizon tail.
pub fn resolvent(
    g: impl Fn(f64, f64) -> f64 + Copy,
    grid: GridSpec,
    params: &AdjointParams,
    lambda: f64,
    horizon: Option<f64>,
) -> Result<Resolvent> {
    if !(lambda > 0.0) {
        return Err(AdjointError::Parameter(format!("lambda must be > 0, got {lambda}")));
    }
    let mut solver = ReducedAdjoint::new(g, grid, *params)?;
    let dt = solver.dt;
    let q = lambda / (lambda + dt);
    let horizon = horizon.unwrap_or(dt * (DEFAULT_TAIL_TOL.ln() / q.ln()).ceil());
    let n = (horizon / dt).ceil() as usize;
    let tail = q.powi(n as i32);
    if tail > DEFAULT_TAIL_TOL {
        return Err(AdjointError::Horizon {
            horizon,
            tail,
            tol: DEFAULT_TAIL_TOL,
        });
    }
    let mut u = vec![0.0; solver.psi.len()];
    let mut w = 1.0 - q;
    for _ in 0..n {
        for (a, b) in u.iter_mut().zip(&solver.psi) {
            *a += w * b;
        }
        solver.step();
        w *= q;
    }
    // The tail mass `q^n` goes on the last state.
    for (a, b) in u.iter_mut().zip(&solver.psi) {
        *a += tail * b;
    }

    let nt = grid.n_theta;
    let wall_of = |tau: f64, k: usize| solver.wall.discrete_resolvent(q, dt, tau, k);
    let wall: Vec<f64> = (0..nt)
        .map(|k| if grid.theta(k) <= 0.0 { wall_of(0.0, k) } else { 0.0 })
        .collect();

    let mut su = u.clone();
    solver.angular.step(&mut su, nt, dt);
    let mut tu = vec![0.0; u.len()];
    transport_reduced(&grid, &su, &mut tu, dt, params.top, wall_of);
    let mut residual: f64 = 0.0;
    let mut g_norm: f64 = 0.0;
    for j in 0..grid.n_x2 {
        for k in 0..nt {
            let i = j * nt + k;
            let gv = g(grid.x2(j), grid.theta(k));
            let lu = (tu[i] - u[i]) / dt;
            residual = residual.max((lambda * lu - (u[i] - gv)).abs());
            g_norm = g_norm.max(gv.abs());
        }
    }
    for k in 0..nt {
        g_norm = g_norm.max(g(0.0, grid.theta(k)).abs());
    }

    let mut field = solver.field();
    field.values = u;
    field.time = 0.0;
    Ok(Resolvent {
        u: field,
        wall,
        residual,
        g_norm,
        horizon: n as f64 * dt,
        lambda,
    })
}
