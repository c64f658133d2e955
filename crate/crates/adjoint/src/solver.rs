use std::f64::consts::PI;

use polykin_core::{tridiag::CyclicDiffusion, GridSpec};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::boundary::{boundary_value_full, check_kappa, chi_kappa, AdjointData};
use crate::kernel::{make_zeta, JumpStencil};
use crate::{AdjointError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AngularOp {
    /// Explicit jump operator `Q^ε`.
    Jump,
    /// Implicit `∂θ²` (backward Euler, cyclic tridiagonal).
    Diffusion,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TopBoundary {
    /// Copy the last row (zero normal derivative).
    Neumann,
    Dirichlet(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdjointParams {
    pub epsilon: f64,
    pub kappa: f64,
    /// Time step; defaults to `ε²/8` for the jump operator and `grid.dt` otherwise.
    pub dt: Option<f64>,
    pub angular: AngularOp,
    pub top: TopBoundary,
}

impl Default for AdjointParams {
    fn default() -> Self {
        Self {
            epsilon: 0.05,
            kappa: 0.05,
            dt: None,
            angular: AngularOp::Jump,
            top: TopBoundary::Neumann,
        }
    }
}

/// Adjoint values on the reduced `(x2, θ)` or the full `(x1, x2, θ)` grid.
#[derive(Debug, Clone, PartialEq)]
pub struct AdjointField {
    pub grid: GridSpec,
    pub full: bool,
    pub values: Vec<f64>,
    pub epsilon_jump: f64,
    pub kappa: f64,
    pub time: f64,
}

impl AdjointField {
    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }
}

pub(crate) enum Angular {
    Jump(JumpStencil),
    Diffusion { op: CyclicDiffusion, dt: f64, d: f64, h: f64 },
}

impl Angular {
    pub(crate) fn new(params: &AdjointParams, grid: &GridSpec, dt: f64) -> Result<Self> {
        Ok(match params.angular {
            AngularOp::Jump => {
                let st = JumpStencil::new(&make_zeta(), params.epsilon, grid.n_theta)?;
                if dt > st.max_dt() * (1.0 + 1e-12) {
                    return Err(AdjointError::StepTooLarge { dt, bound: st.max_dt() });
                }
                Angular::Jump(st)
            }
            AngularOp::Diffusion => {
                let h = grid.dtheta();
                Angular::Diffusion {
                    op: CyclicDiffusion::new(grid.n_theta, grid.d * dt / (h * h)),
                    dt,
                    d: grid.d,
                    h,
                }
            }
        })
    }

    /// One angular substep on every θ-column of `values`.
    pub(crate) fn step(&self, values: &mut [f64], nt: usize, dt: f64) {
        match self {
            Angular::Jump(st) => values.par_chunks_mut(nt).for_each(|col| {
                let mut q = vec![0.0; nt];
                st.apply_column(col, &mut q);
                for (c, d) in col.iter_mut().zip(&q) {
                    *c += dt * d;
                }
            }),
            Angular::Diffusion { op, dt: built, d, h } => {
                let tmp;
                let op = if (dt - built).abs() <= 1e-14 * built {
                    op
                } else {
                    tmp = CyclicDiffusion::new(nt, d * dt / (h * h));
                    &tmp
                };
                values.par_chunks_mut(nt).for_each(|col| op.solve_in_place(col))
            }
        }
    }
}

pub(crate) fn resolve_dt(params: &AdjointParams, grid: &GridSpec) -> Result<f64> {
    check_kappa(params.kappa)?;
    let dt = match (params.dt, params.angular) {
        (Some(dt), _) => dt,
        (None, AngularOp::Jump) => params.epsilon * params.epsilon / 8.0,
        (None, AngularOp::Diffusion) => grid.dt,
    };
    if !(dt > 0.0) {
        return Err(AdjointError::Parameter(format!("dt must be > 0, got {dt}")));
    }
    Ok(dt)
}

/// Value at height `y ≥ x2(0)` from a column sampled at the cell centres.
#[inline]
pub(crate) fn interp_x2(grid: &GridSpec, y: f64, top: TopBoundary, row: impl Fn(usize) -> f64) -> f64 {
    let n = grid.n_x2;
    let h = grid.dx2();
    let last = grid.x2(n - 1);
    if y >= last {
        return match top {
            TopBoundary::Neumann => row(n - 1),
            TopBoundary::Dirichlet(v) => {
                if y >= grid.x2_max {
                    v
                } else {
                    let f = (y - last) / (grid.x2_max - last);
                    (1.0 - f) * row(n - 1) + f * v
                }
            }
        };
    }
    let p = (y - grid.x2(0)) / h;
    let j = (p.floor() as usize).min(n - 2);
    let f = p - j as f64;
    (1.0 - f) * row(j) + f * row(j + 1)
}

/// Reduced wall data `g(0, θ_k)` with the two limits.
pub(crate) struct ReducedWall {
    pub g: Vec<f64>,
    pub limit: Vec<f64>,
    pub kappa: f64,
}

impl ReducedWall {
    pub fn new(grid: &GridSpec, kappa: f64, g: impl Fn(f64, f64) -> f64) -> Self {
        let (g0, gpi) = (g(0.0, 0.0), g(0.0, -PI));
        let mut gw = Vec::with_capacity(grid.n_theta);
        let mut limit = Vec::with_capacity(grid.n_theta);
        for k in 0..grid.n_theta {
            let th = grid.theta(k);
            let chi = chi_kappa(th, kappa);
            gw.push(g(0.0, th));
            limit.push(chi * g0 + (1.0 - chi) * gpi);
        }
        Self { g: gw, limit, kappa }
    }

    #[inline]
    pub fn value(&self, t: f64, k: usize) -> f64 {
        self.limit[k] + (-t / self.kappa).exp() * (self.g[k] - self.limit[k])
    }

    /// `Σ (1 − q) qⁿ B(n dt + τ)`, the wall value seen by the discrete resolvent.
    pub fn discrete_resolvent(&self, q: f64, dt: f64, tau: f64, k: usize) -> f64 {
        let r = (-dt / self.kappa).exp();
        let w = (-tau / self.kappa).exp() * (1.0 - q) / (1.0 - q * r);
        self.limit[k] + w * (self.g[k] - self.limit[k])
    }
}

/// Semi-Lagrangian transport of one reduced field along `x2 + dt sinθ`;
/// `wall(τ, k)` supplies the wall value `τ` time units after the step start.
pub(crate) fn transport_reduced(
    grid: &GridSpec,
    src: &[f64],
    dst: &mut [f64],
    dt: f64,
    top: TopBoundary,
    wall: impl Fn(f64, usize) -> f64,
) {
    let nt = grid.n_theta;
    let x0 = grid.x2(0);
    for k in 0..nt {
        let s = grid.theta(k).sin();
        for j in 0..grid.n_x2 {
            let y = grid.x2(j) + dt * s;
            dst[j * nt + k] = if y < 0.0 {
                let tau = grid.x2(j) / (-s);
                wall(dt - tau, k)
            } else if y < x0 {
                let f = y / x0;
                (1.0 - f) * wall(0.0, k) + f * src[k]
            } else {
                interp_x2(grid, y, top, |r| src[r * nt + k])
            };
        }
    }
}

/// Time stepper for the reduced adjoint problem.
pub struct ReducedAdjoint {
    pub grid: GridSpec,
    pub params: AdjointParams,
    pub dt: f64,
    pub psi: Vec<f64>,
    pub time: f64,
    pub(crate) wall: ReducedWall,
    pub(crate) angular: Angular,
}

impl ReducedAdjoint {
    pub fn new(g: impl Fn(f64, f64) -> f64, grid: GridSpec, params: AdjointParams) -> Result<Self> {
        grid.validate()?;
        let dt = resolve_dt(&params, &grid)?;
        let angular = Angular::new(&params, &grid, dt)?;
        let mut psi = vec![0.0; grid.len_reduced()];
        for j in 0..grid.n_x2 {
            for k in 0..grid.n_theta {
                psi[grid.ridx(j, k)] = g(grid.x2(j), grid.theta(k));
            }
        }
        Ok(Self {
            grid,
            params,
            dt,
            psi,
            time: 0.0,
            wall: ReducedWall::new(&grid, params.kappa, g),
            angular,
        })
    }

    pub fn step(&mut self) {
        self.step_by(self.dt);
    }

    /// Advance to `t_target`, shortening the last step if needed.
    pub fn advance_to(&mut self, t_target: f64) {
        while self.time < t_target - 1e-12 {
            self.step_by(self.dt.min(t_target - self.time));
        }
    }

    pub fn step_by(&mut self, dt: f64) {
        let (g, t) = (self.grid, self.time);
        let mut star = self.psi.clone();
        self.angular.step(&mut star, g.n_theta, dt);
        let wall = &self.wall;
        transport_reduced(&g, &star, &mut self.psi, dt, self.params.top, |tau, k| wall.value(t + tau, k));
        self.time += dt;
    }

    /// Wall value at the current time for `θ_k ∈ [−π, 0]`.
    pub fn wall_value(&self, k: usize) -> f64 {
        self.wall.value(self.time, k)
    }

    pub fn field(&self) -> AdjointField {
        AdjointField {
            grid: self.grid,
            full: false,
            values: self.psi.clone(),
            epsilon_jump: self.params.epsilon,
            kappa: self.params.kappa,
            time: self.time,
        }
    }
}

/// Time stepper for the full adjoint problem.
pub struct FullAdjoint<'g, G: AdjointData + ?Sized> {
    pub grid: GridSpec,
    pub params: AdjointParams,
    pub dt: f64,
    pub psi: Vec<f64>,
    pub time: f64,
    g: &'g G,
    angular: Angular,
}

impl<'g, G: AdjointData + ?Sized> FullAdjoint<'g, G> {
    pub fn new(g: &'g G, grid: GridSpec, params: AdjointParams) -> Result<Self> {
        grid.validate()?;
        let dt = resolve_dt(&params, &grid)?;
        let angular = Angular::new(&params, &grid, dt)?;
        let mut psi = vec![0.0; grid.len_full()];
        psi.par_chunks_mut(grid.len_reduced()).enumerate().for_each(|(i1, block)| {
            for j in 0..grid.n_x2 {
                for k in 0..grid.n_theta {
                    block[grid.ridx(j, k)] = g.value(grid.x1(i1), grid.x2(j), grid.theta(k));
                }
            }
        });
        Ok(Self {
            grid,
            params,
            dt,
            psi,
            time: 0.0,
            g,
            angular,
        })
    }

    pub fn wall_value(&self, t: f64, x1: f64, theta: f64) -> Result<f64> {
        boundary_value_full(t, x1, theta, self.params.kappa, self.g)
    }

    pub fn step(&mut self) -> Result<()> {
        self.step_by(self.dt)
    }

    /// Advance to `t_target`, shortening the last step if needed.
    pub fn advance_to(&mut self, t_target: f64) -> Result<()> {
        while self.time < t_target - 1e-12 {
            self.step_by(self.dt.min(t_target - self.time))?;
        }
        Ok(())
    }

    pub fn step_by(&mut self, dt: f64) -> Result<()> {
        let (g, t) = (self.grid, self.time);
        let nt = g.n_theta;
        let mut star = self.psi.clone();
        self.angular.step(&mut star, nt, dt);
        let (n1, n2) = (g.n_x1, g.n_x2);
        let (h1, x0) = (g.dx1(), g.x2(0));
        let kappa = self.params.kappa;
        let top = self.params.top;
        let data = self.g;
        let star = &star;
        self.psi
            .par_chunks_mut(g.len_reduced())
            .enumerate()
            .try_for_each(|(i1, out)| -> Result<()> {
                for k in 0..nt {
                    let th = g.theta(k);
                    let (s, c) = th.sin_cos();
                    let xf = g.x1(i1) + dt * c;
                    let p = (xf - g.x1_min) / h1 - 0.5;
                    let i_lo = p.floor();
                    let fx = p - i_lo;
                    let ia = (i_lo as isize).rem_euclid(n1 as isize) as usize;
                    let ib = (ia + 1) % n1;
                    let at = |r: usize| (1.0 - fx) * star[g.idx(ia, r, k)] + fx * star[g.idx(ib, r, k)];
                    for j in 0..n2 {
                        let y = g.x2(j) + dt * s;
                        out[j * nt + k] = if y < 0.0 {
                            let tau = g.x2(j) / (-s);
                            boundary_value_full(t + dt - tau, g.x1(i1) + tau * c, th, kappa, data)?
                        } else if y < x0 {
                            let f = y / x0;
                            let w = boundary_value_full(t, xf, th, kappa, data)?;
                            (1.0 - f) * w + f * at(0)
                        } else {
                            interp_x2(&g, y, top, at)
                        };
                    }
                }
                Ok(())
            })?;
        self.time += dt;
        Ok(())
    }

    pub fn field(&self) -> AdjointField {
        AdjointField {
            grid: self.grid,
            full: true,
            values: self.psi.clone(),
            epsilon_jump: self.params.epsilon,
            kappa: self.params.kappa,
            time: self.time,
        }
    }
}

/// Outcome of a time-dependent adjoint run.
#[derive(Debug, Clone)]
pub struct AdjointRun {
    /// Fields at the requested save times (nearest step at or after each).
    pub snapshots: Vec<AdjointField>,
    pub last: AdjointField,
    /// `max_t ‖ψ(t)‖∞`.
    pub sup_norm: f64,
    /// Time and flat index where the supremum was reached.
    pub sup_at: (f64, usize),
}

fn track(sup: &mut (f64, f64, usize), t: f64, v: &[f64]) {
    for (i, x) in v.iter().enumerate() {
        if x.abs() > sup.0 {
            *sup = (x.abs(), t, i);
        }
    }
}

fn steps_for(t_end: f64, dt: f64) -> (usize, f64) {
    let n = (t_end / dt - 1e-9).ceil().max(0.0) as usize;
    if n == 0 {
        (0, dt)
    } else {
        (n, t_end / n as f64)
    }
}

pub fn solve_adjoint_reduced(
    g: impl Fn(f64, f64) -> f64,
    grid: GridSpec,
    params: &AdjointParams,
    t_end: f64,
    save_at: &[f64],
) -> Result<AdjointRun> {
    let mut solver = ReducedAdjoint::new(g, grid, *params)?;
    let (n, dt) = steps_for(t_end, solver.dt);
    solver.dt = dt;
    let mut sup = (0.0, 0.0, 0);
    track(&mut sup, 0.0, &solver.psi);
    let mut snaps = Vec::new();
    let mut pending: Vec<f64> = save_at.to_vec();
    pending.sort_by(f64::total_cmp);
    let mut next = 0;
    while next < pending.len() && pending[next] <= 0.0 {
        snaps.push(solver.field());
        next += 1;
    }
    for _ in 0..n {
        solver.step();
        track(&mut sup, solver.time, &solver.psi);
        while next < pending.len() && pending[next] <= solver.time + 1e-12 {
            snaps.push(solver.field());
            next += 1;
        }
    }
    Ok(AdjointRun {
        snapshots: snaps,
        last: solver.field(),
        sup_norm: sup.0,
        sup_at: (sup.1, sup.2),
    })
}

pub fn solve_adjoint_full<G: AdjointData + ?Sized>(
    g: &G,
    grid: GridSpec,
    params: &AdjointParams,
    t_end: f64,
    save_at: &[f64],
) -> Result<AdjointRun> {
    let mut solver = FullAdjoint::new(g, grid, *params)?;
    let (n, dt) = steps_for(t_end, solver.dt);
    solver.dt = dt;
    let mut sup = (0.0, 0.0, 0);
    track(&mut sup, 0.0, &solver.psi);
    let mut snaps = Vec::new();
    let mut pending: Vec<f64> = save_at.to_vec();
    pending.sort_by(f64::total_cmp);
    let mut next = 0;
    while next < pending.len() && pending[next] <= 0.0 {
        snaps.push(solver.field());
        next += 1;
    }
    for _ in 0..n {
        solver.step()?;
        track(&mut sup, solver.time, &solver.psi);
        while next < pending.len() && pending[next] <= solver.time + 1e-12 {
            snaps.push(solver.field());
            next += 1;
        }
    }
    Ok(AdjointRun {
        snapshots: snaps,
        last: solver.field(),
        sup_norm: sup.0,
        sup_at: (sup.1, sup.2),
    })
}
