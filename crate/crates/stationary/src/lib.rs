//! Steady states of `−sinθ ∂x2 ψ = ∂θ² ψ` on the half-line with the
//! trapping-arc wall data, computed by pseudo-time marching of the reduced
//! adjoint stepper, and the checks built on them.

use std::io::Write;

use polykin_adjoint::{chi_kappa, AdjointError, AdjointParams, AngularOp, ReducedAdjoint, TopBoundary};
use polykin_core::{GridSpec, ReducedField};
use polykin_specfun::{stationary_supersol_F, SpecfunError, SupersolutionParams};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum StationaryError {
    #[error(transparent)]
    Adjoint(#[from] AdjointError),
    #[error(transparent)]
    Specfun(#[from] SpecfunError),
    #[error("no steady state after {steps} steps (last change {last_change:.3e}, tol {tol:.1e})")]
    NotConverged { steps: usize, last_change: f64, tol: f64 },
    #[error("grid mismatch")]
    GridMismatch,
    #[error("invalid parameter: {0}")]
    Parameter(String),
}

pub type Result<T> = std::result::Result<T, StationaryError>;

pub const DEFAULT_TOL: f64 = 1e-7;

/// Wall data on the incoming arc `θ ∈ [−π, 0]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryKind {
    /// 1 on `(−π/2, 0]`, 0 on `[−π, −π/2)`.
    Plus,
    /// 1 on `[−π, −π/2)`, 0 on `(−π/2, 0]`.
    Minus,
    Zero,
    One,
}

impl BoundaryKind {
    /// Values `(b₊, b₋)` on the two halves of the arc.
    pub fn arc_values(self) -> (f64, f64) {
        match self {
            BoundaryKind::Plus => (1.0, 0.0),
            BoundaryKind::Minus => (0.0, 1.0),
            BoundaryKind::Zero => (0.0, 0.0),
            BoundaryKind::One => (1.0, 1.0),
        }
    }

    pub fn default_far_field(self) -> TopBoundary {
        TopBoundary::Dirichlet(match self {
            BoundaryKind::Plus | BoundaryKind::Minus => 0.5,
            BoundaryKind::Zero => 0.0,
            BoundaryKind::One => 1.0,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StationaryProblem {
    pub kind: BoundaryKind,
    /// `x2 ∈ [0, grid.x2_max]` and θ; the `x1` fields are ignored.
    pub grid: GridSpec,
    pub far_field: TopBoundary,
    /// Width of the smoothed switch at `θ = −π/2`.
    pub kappa: f64,
    /// Pseudo-time initial value.
    pub initial: f64,
    pub max_steps: usize,
}

impl StationaryProblem {
    pub fn new(kind: BoundaryKind, grid: GridSpec) -> Self {
        Self {
            kind,
            grid,
            far_field: kind.default_far_field(),
            kappa: 0.05,
            initial: 0.0,
            max_steps: 400_000,
        }
    }

    /// Smoothed wall value at `θ ∈ [−π, 0]`.
    pub fn wall(&self, theta: f64) -> f64 {
        let (bp, bm) = self.kind.arc_values();
        let c = chi_kappa(theta, self.kappa);
        c * bp + (1.0 - c) * bm
    }
}

#[derive(Debug, Clone)]
pub struct StationarySolution {
    pub field: ReducedField,
    pub steps: usize,
    pub pseudo_time: f64,
    /// `‖ψ_{n+1} − ψ_n‖∞` at the last step.
    pub last_change: f64,
    /// Geometric estimate of `sup_Δ ‖ψ(t+Δ) − ψ(t)‖∞`.
    pub tail: f64,
    /// `‖(S_dt ψ − ψ)/dt‖∞` of the returned field.
    pub residual: f64,
}

/// Rate estimate window (steps).
const WINDOW: usize = 20;

/// March until the remaining change, estimated from the observed geometric
/// contraction, is below `tol/2`, and the last step changed by at most `tol`.
pub fn solve_stationary(p: &StationaryProblem, tol: f64) -> Result<StationarySolution> {
    if !(tol > 0.0) {
        return Err(StationaryError::Parameter(format!("tol must be > 0, got {tol}")));
    }
    let params = AdjointParams {
        epsilon: 0.05,
        kappa: p.kappa,
        dt: Some(p.grid.dt),
        angular: AngularOp::Diffusion,
        top: p.far_field,
    };
    // Wall data equal to its own κ-limit, so the wall is time independent.
    let init = p.initial;
    let data = |x2: f64, th: f64| if x2 == 0.0 { wall_data(p, th) } else { init };
    let mut solver = ReducedAdjoint::new(data, p.grid, params)?;
    let mut history: Vec<f64> = Vec::with_capacity(WINDOW + 1);
    let mut prev = solver.psi.clone();
    let mut steps = 0;
    loop {
        solver.step();
        steps += 1;
        let change = solver.psi.iter().zip(&prev).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        prev.copy_from_slice(&solver.psi);
        if history.len() == WINDOW + 1 {
            history.remove(0);
        }
        history.push(change);
        let tail = tail_estimate(&history);
        if change <= tol && tail <= 0.5 * tol {
            let residual = change / solver.dt;
            return Ok(StationarySolution {
                field: ReducedField {
                    grid: p.grid,
                    values: solver.psi,
                    ..ReducedField::zeros(p.grid)
                },
                steps,
                pseudo_time: solver.time,
                last_change: change,
                tail,
                residual,
            });
        }
        if steps >= p.max_steps {
            return Err(StationaryError::NotConverged {
                steps,
                last_change: change,
                tol,
            });
        }
    }
}

fn wall_data(p: &StationaryProblem, theta: f64) -> f64 {
    if theta <= 0.0 {
        p.wall(theta)
    } else {
        // Not reached by any characteristic; keeps the data continuous at 0 and π.
        p.wall(-theta)
    }
}

/// `d ρ/(1 − ρ)` with `ρ` the mean contraction over the window; infinite
/// while the window is short or not contracting, zero at exact stagnation.
fn tail_estimate(h: &[f64]) -> f64 {
    let last = *h.last().unwrap();
    if last == 0.0 {
        return 0.0;
    }
    if h.len() <= WINDOW || h[0] == 0.0 {
        return f64::INFINITY;
    }
    let rho = (last / h[0]).powf(1.0 / WINDOW as f64);
    if rho >= 1.0 {
        // Roundoff floor: the change is no longer decreasing.
        return if last < 1e-13 { last } else { f64::INFINITY };
    }
    last * rho / (1.0 - rho)
}

/// `max |ψ(x2, θ) + ψ(x2, π − θ) − 1|`.
pub fn check_symmetry(psi: &ReducedField) -> f64 {
    let g = psi.grid;
    let mut m: f64 = 0.0;
    for j in 0..g.n_x2 {
        for k in 0..g.n_theta {
            let r = g.reflect_theta(k);
            m = m.max((psi.get(j, k) + psi.get(j, r) - 1.0).abs());
        }
    }
    m
}

/// `max_θ |ψ(L, θ) − 1/2|` on the last row.
pub fn farfield_limit(psi: &ReducedField) -> f64 {
    let g = psi.grid;
    (0..g.n_theta).fold(0.0, |m, k| m.max((psi.get(g.n_x2 - 1, k) - 0.5).abs()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DominationReport {
    /// Factor applied to ψ before the comparison.
    pub scale: f64,
    pub max_violation: f64,
    pub nodes_checked: usize,
}

/// Compare ψ with `1 + η − F_λ(x2 − δ, θ)` on `x2 ∈ [δ, L]`. With
/// `eps_b = Some(e)`, ψ is first scaled so that its sup on the first row at
/// or above `δ` is at most `e`.
pub fn supersolution_domination(
    psi: &ReducedField,
    s: &SupersolutionParams,
    eps_b: Option<f64>,
) -> Result<DominationReport> {
    let g = psi.grid;
    let j0 = (0..g.n_x2)
        .find(|&j| g.x2(j) >= s.delta)
        .ok_or_else(|| StationaryError::Parameter(format!("delta {} beyond the grid", s.delta)))?;
    let scale = match eps_b {
        None => 1.0,
        Some(e) => {
            let sup = (0..g.n_theta).fold(0.0f64, |m, k| m.max(psi.get(j0, k).abs()));
            if sup > e {
                e / sup
            } else {
                1.0
            }
        }
    };
    let mut worst: f64 = 0.0;
    let mut n = 0;
    for j in j0..g.n_x2 {
        for k in 0..g.n_theta {
            let th = g.theta(k);
            let bound = 1.0 + s.eta - stationary_supersol_F(g.x2(j) - s.delta, th, s)?;
            worst = worst.max(scale * psi.get(j, k) - bound);
            n += 1;
        }
    }
    Ok(DominationReport {
        scale,
        max_violation: worst.max(0.0),
        nodes_checked: n,
    })
}

/// `(⟨ψ₊, f⟩, ⟨ψ₋, f⟩)` for a reduced density `f` (mass `Σ f dx2 dθ`).
pub fn trapped_mass_prediction(f: &ReducedField, psi_plus: &ReducedField, psi_minus: &ReducedField) -> Result<(f64, f64)> {
    if f.grid != psi_plus.grid || f.grid != psi_minus.grid {
        return Err(StationaryError::GridMismatch);
    }
    let a = f.grid.reduced_cell_area();
    let pair = |psi: &ReducedField| f.values.iter().zip(&psi.values).map(|(x, y)| x * y).sum::<f64>() * a;
    Ok((pair(psi_plus), pair(psi_minus)))
}

/// CSV with columns `x2,theta,psi`.
pub fn write_csv<W: Write>(psi: &ReducedField, mut w: W) -> std::io::Result<()> {
    let g = psi.grid;
    writeln!(w, "x2,theta,psi")?;
    for j in 0..g.n_x2 {
        for k in 0..g.n_theta {
            writeln!(w, "{},{},{}", g.x2(j), g.theta(k), psi.get(j, k))?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tail_of_geometric_history() {
        let h: Vec<f64> = (0..=WINDOW).map(|i| 0.5f64.powi(i as i32)).collect();
        let last = h[WINDOW];
        assert!((tail_estimate(&h) - last).abs() < 1e-12 * last.max(1.0));
        assert_eq!(tail_estimate(&h[..5]), f64::INFINITY);
        let flat = vec![1e-3; WINDOW + 1];
        assert_eq!(tail_estimate(&flat), f64::INFINITY);
    }

    #[test]
    fn smoothed_wall_values() {
        let g = GridSpec::new((-1.0, 1.0, 4), (4.0, 16), 16, 0.125).unwrap();
        let p = StationaryProblem::new(BoundaryKind::Plus, g);
        assert!((p.wall(-0.1) - 1.0).abs() < 1e-12);
        assert!(p.wall(-3.0).abs() < 1e-12);
        assert!((p.wall(-std::f64::consts::FRAC_PI_2) - 0.5).abs() < 1e-12);
        let m = StationaryProblem::new(BoundaryKind::Minus, g);
        for th in [-3.0, -2.0, -1.6, -1.0, -0.2] {
            assert!((p.wall(th) + m.wall(th) - 1.0).abs() < 1e-12);
        }
    }
}
