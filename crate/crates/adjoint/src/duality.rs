use std::f64::consts::PI;

use polykin_kinetic::KineticState;
use rayon::prelude::*;

use crate::boundary::{boundary_value_full, AdjointData};
use crate::solver::{AdjointParams, FullAdjoint};
use crate::{AdjointError, Result};

#[derive(Debug, Clone)]
pub struct DualityReport {
    pub taus: Vec<f64>,
    /// `⟨ψ, f_τ⟩` from the forward run.
    pub forward: Vec<f64>,
    /// `⟨S(τ)ψ, f_in⟩` from the adjoint run.
    pub backward: Vec<f64>,
    pub defects: Vec<f64>,
    /// Normalisation `⟨|ψ|, f_in⟩`.
    pub scale: f64,
    pub max_defect: f64,
}

/// `⟨φ, f⟩`: interior cell sum plus the two trapped densities paired with
/// `φ(x1, 0, 0)` and `φ(x1, 0, −π)`.
pub fn pairing(
    state: &KineticState,
    interior: impl Fn(usize) -> f64 + Sync,
    wall_plus: impl Fn(usize) -> f64,
    wall_minus: impl Fn(usize) -> f64,
) -> f64 {
    let g = state.grid();
    let vol = g.cell_volume();
    let inner: f64 = state.f.values.par_iter().enumerate().map(|(i, f)| interior(i) * f).sum();
    let plus = state.boundary.plus_on_grid();
    let minus = state.boundary.minus_on_grid();
    let mut wall = 0.0;
    for i in 0..g.n_x1 {
        wall += (wall_plus(i) * plus[i] + wall_minus(i) * minus[i]) * g.dx1();
    }
    inner * vol + wall
}

/// Sample `ψ` on the cell centres of a full grid.
fn sample<G: AdjointData + ?Sized>(psi: &G, state: &KineticState) -> Vec<f64> {
    let g = state.grid();
    let mut out = vec![0.0; g.len_full()];
    out.par_chunks_mut(g.len_reduced()).enumerate().for_each(|(i1, block)| {
        for j in 0..g.n_x2 {
            for k in 0..g.n_theta {
                block[g.ridx(j, k)] = psi.value(g.x1(i1), g.x2(j), g.theta(k));
            }
        }
    });
    out
}

/// Duality defect between a forward kinetic trajectory and the adjoint
/// evolution of `psi`. `forward[0]` is the initial state; the pairing times
/// are the times of the remaining states.
///
/// The backward-in-time problem is the forward adjoint problem after
/// `t ↦ τ − t`, so one forward adjoint run serves all pairing times.
pub fn duality_check<G: AdjointData + ?Sized>(
    forward: &[KineticState],
    psi: &G,
    params: &AdjointParams,
) -> Result<DualityReport> {
    let f_in = forward.first().ok_or_else(|| AdjointError::Parameter("empty forward trajectory".into()))?;
    let grid = f_in.grid();
    for s in forward {
        if s.grid() != grid {
            return Err(AdjointError::GridMismatch(format!("state at t = {} is on a different grid", s.time)));
        }
    }
    let t0 = f_in.time;
    let sampled = sample(psi, f_in);
    let abs_vals: Vec<f64> = sampled.iter().map(|v| v.abs()).collect();
    let wall0 = |x1: f64, th: f64| psi.value(x1, 0.0, th);
    let scale = pairing(
        f_in,
        |i| abs_vals[i],
        |i| wall0(grid.x1(i), 0.0).abs(),
        |i| wall0(grid.x1(i), -PI).abs(),
    );
    if !(scale > 0.0) {
        return Err(AdjointError::Parameter("⟨|ψ|, f_in⟩ must be positive".into()));
    }

    let mut adj = FullAdjoint::new(psi, grid, *params)?;
    let mut report = DualityReport {
        taus: Vec::new(),
        forward: Vec::new(),
        backward: Vec::new(),
        defects: Vec::new(),
        scale,
        max_defect: 0.0,
    };
    for s in &forward[1..] {
        let tau = s.time - t0;
        let fw = pairing(s, |i| sampled[i], |i| wall0(grid.x1(i), 0.0), |i| wall0(grid.x1(i), -PI));
        adj.advance_to(tau)?;
        let kappa = params.kappa;
        let mut wp = Vec::with_capacity(grid.n_x1);
        let mut wm = Vec::with_capacity(grid.n_x1);
        for i in 0..grid.n_x1 {
            wp.push(boundary_value_full(adj.time, grid.x1(i), 0.0, kappa, psi)?);
            wm.push(boundary_value_full(adj.time, grid.x1(i), -PI, kappa, psi)?);
        }
        let bw = pairing(f_in, |i| adj.psi[i], |i| wp[i], |i| wm[i]);
        let d = (fw - bw).abs() / scale;
        report.taus.push(tau);
        report.forward.push(fw);
        report.backward.push(bw);
        report.defects.push(d);
        report.max_defect = report.max_defect.max(d);
    }
    Ok(report)
}
