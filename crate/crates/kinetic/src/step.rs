use polykin_core::{make_ledger, tridiag::CyclicDiffusion, BoundaryDensityPair, GridSpec, MassLedger, PhaseField};
use rayon::prelude::*;

use crate::{KineticError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct KineticState {
    pub f: PhaseField,
    pub boundary: BoundaryDensityPair,
    pub time: f64,
    pub ledger: MassLedger,
}

impl KineticState {
    pub fn new(f: PhaseField, boundary: BoundaryDensityPair, time: f64) -> Result<Self> {
        let ledger = make_ledger(&f, &boundary, 0.0)?;
        Ok(Self {
            f,
            boundary,
            time,
            ledger,
        })
    }

    pub fn zeros(grid: GridSpec) -> Self {
        Self {
            f: PhaseField::zeros(grid),
            boundary: BoundaryDensityPair::zeros(grid),
            time: 0.0,
            ledger: MassLedger::default(),
        }
    }

    pub fn grid(&self) -> GridSpec {
        self.f.grid
    }
}

/// Mass leaving the interior during one transport substep.
#[derive(Debug, Clone, PartialEq)]
pub struct Outflow {
    /// Mass through `x2 = 0`, indexed `i1 · n_theta + k` by the `x1` cell
    /// where it lands.
    pub bottom: Vec<f64>,
    /// Mass through `x2 = x2_max`.
    pub top: f64,
}

impl Outflow {
    pub fn total(&self) -> f64 {
        self.bottom.iter().sum::<f64>() + self.top
    }
}

pub(crate) fn check_cfl(g: &GridSpec, dt: f64) -> Result<()> {
    let bound = g.dx1().min(g.dx2());
    if !(dt > 0.0) || dt > bound * (1.0 + 1e-12) {
        return Err(KineticError::Cfl { dt, bound });
    }
    Ok(())
}

/// Fractional shift in cells and the index step towards the source cell.
#[inline]
pub(crate) fn shift(v: f64, h: f64) -> (f64, isize) {
    let c = v / h;
    (c.abs().min(1.0), if c >= 0.0 { 1 } else { -1 })
}

/// Remap rows `0..n_x2` of one θ-line: `dst[j]` gathers from `src[j]` and
/// `src[j − dir]`. Returns (bottom, top) outflow as fractions of `src`.
#[inline]
pub(crate) fn x2_weights(j: usize, n: usize, fy: f64, dir: isize) -> [(Option<usize>, f64); 2] {
    let other = j as isize - dir;
    let src = if (0..n as isize).contains(&other) {
        Some(other as usize)
    } else {
        None
    };
    [(Some(j), 1.0 - fy), (src, fy)]
}

/// Shift every cell by `dt(cosθ, sinθ)` and collect what leaves through
/// `x2 = 0` and `x2 = x2_max`.
pub fn transport_substep(f: &PhaseField, dt: f64) -> Result<(PhaseField, Outflow)> {
    let g = f.grid;
    check_cfl(&g, dt)?;
    let (n1, n2, nt) = (g.n_x1, g.n_x2, g.n_theta);
    let block = n2 * nt;
    let sx: Vec<(f64, isize)> = (0..nt).map(|k| shift(dt * g.theta(k).cos(), g.dx1())).collect();
    let sy: Vec<(f64, isize)> = (0..nt).map(|k| shift(dt * g.theta(k).sin(), g.dx2())).collect();
    let src = &f.values;

    let mut out = vec![0.0; g.len_full()];
    out.par_chunks_mut(block).enumerate().for_each(|(i1, dst)| {
        for k in 0..nt {
            let (fx, dx) = sx[k];
            let (fy, dy) = sy[k];
            let i_other = (i1 as isize - dx).rem_euclid(n1 as isize) as usize;
            for j in 0..n2 {
                let mut acc = 0.0;
                for (row, wy) in x2_weights(j, n2, fy, dy) {
                    if let Some(r) = row {
                        if wy > 0.0 {
                            let a = src[g.idx(i1, r, k)];
                            let b = src[g.idx(i_other, r, k)];
                            acc += wy * ((1.0 - fx) * a + fx * b);
                        }
                    }
                }
                dst[j * nt + k] = acc;
            }
        }
    });

    let vol = g.cell_volume();
    let mut bottom = vec![0.0; n1 * nt];
    let mut top = 0.0;
    for k in 0..nt {
        let (fx, dx) = sx[k];
        let (fy, dy) = sy[k];
        if fy == 0.0 {
            continue;
        }
        for i1 in 0..n1 {
            if dy < 0 {
                let m = src[g.idx(i1, 0, k)] * vol * fy;
                let i_dst = (i1 as isize + dx).rem_euclid(n1 as isize) as usize;
                bottom[i1 * nt + k] += (1.0 - fx) * m;
                bottom[i_dst * nt + k] += fx * m;
            } else {
                top += src[g.idx(i1, n2 - 1, k)] * vol * fy;
            }
        }
    }
    Ok((PhaseField { grid: g, values: out }, Outflow { bottom, top }))
}

/// Which trapped density a downward node feeds: `(plus share, minus share)`.
pub(crate) fn split(theta: f64) -> (f64, f64) {
    use std::f64::consts::FRAC_PI_2;
    let d = theta + FRAC_PI_2;
    if d.abs() < 1e-12 {
        (0.5, 0.5)
    } else if d > 0.0 {
        (1.0, 0.0)
    } else {
        (0.0, 1.0)
    }
}

/// Hand the bottom outflow to ρ+ (`θ ∈ (−π/2, 0)`) or ρ− (`θ ∈ (−π, −π/2)`).
pub fn absorb_boundary(outflow: &Outflow, boundary: &mut BoundaryDensityPair) {
    let g = boundary.grid;
    let nt = g.n_theta;
    for i1 in 0..g.n_x1 {
        let (mut plus, mut minus) = (0.0, 0.0);
        for k in 0..nt {
            let m = outflow.bottom[i1 * nt + k];
            if m != 0.0 {
                let (p, q) = split(g.theta(k));
                plus += p * m;
                minus += q * m;
            }
        }
        if plus != 0.0 {
            boundary.deposit_plus(i1, plus);
        }
        if minus != 0.0 {
            boundary.deposit_minus(i1, minus);
        }
    }
}

/// One backward-Euler step of `∂t u = D ∂θ² u` on every θ-column.
pub fn theta_diffusion_substep(f: &mut PhaseField, dt: f64, d: f64) {
    let g = f.grid;
    let r = d * dt / (g.dtheta() * g.dtheta());
    if r == 0.0 {
        return;
    }
    let solver = CyclicDiffusion::new(g.n_theta, r);
    f.values
        .par_chunks_mut(g.n_theta)
        .for_each(|col| solver.solve_in_place(col));
}

pub fn transport_rho_pm(boundary: &mut BoundaryDensityPair, dt: f64) {
    boundary.translate(dt);
}

/// One full step; the ledger carries the cumulative escape through the top.
pub fn advance(state: &KineticState, dt: f64) -> Result<KineticState> {
    let g = state.grid();
    let (mut f, outflow) = transport_substep(&state.f, dt)?;
    let mut boundary = state.boundary.clone();
    absorb_boundary(&outflow, &mut boundary);
    theta_diffusion_substep(&mut f, dt, g.d);
    transport_rho_pm(&mut boundary, dt);
    let ledger = make_ledger(&f, &boundary, state.ledger.escaped_top + outflow.top)?;
    Ok(KineticState {
        f,
        boundary,
        time: state.time + dt,
        ledger,
    })
}
