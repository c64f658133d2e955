use std::f64::consts::PI;

use polykin_core::{BoundaryDensityPair, GridSpec, PhaseField, ReducedField};
use serde::{Deserialize, Serialize};

use crate::step::ChainState;
use crate::{ChainError, Result};

/// Thresholds deciding when a chain counts as trapped.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrapBands {
    pub x2: f64,
    pub theta: f64,
}

impl TrapBands {
    /// `2√ε` in height and `2ε^{1/4}` in angle.
    pub fn for_epsilon(epsilon: f64) -> Self {
        Self {
            x2: 2.0 * epsilon.sqrt(),
            theta: 2.0 * epsilon.powf(0.25),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinClass {
    Plus(usize),
    Minus(usize),
    /// Flat `(i1, i2, k)` index.
    Interior(usize),
    /// Above `x2_max`.
    Escaped,
}

fn wrap_x1(grid: &GridSpec, x1: f64) -> usize {
    let p = ((x1 - grid.x1_min) / grid.dx1()).floor() as i64;
    p.rem_euclid(grid.n_x1 as i64) as usize
}

pub fn classify(c: &ChainState, grid: &GridSpec, bands: &TrapBands) -> BinClass {
    let i1 = wrap_x1(grid, c.x1);
    if c.x2 < bands.x2 {
        if c.theta.abs() < bands.theta {
            return BinClass::Plus(i1);
        }
        if PI - c.theta.abs() < bands.theta {
            return BinClass::Minus(i1);
        }
    }
    if c.x2 >= grid.x2_max {
        return BinClass::Escaped;
    }
    let j = ((c.x2 / grid.dx2()) as usize).min(grid.n_x2 - 1);
    let k = grid.nearest_theta(c.theta);
    BinClass::Interior(grid.idx(i1, j, k))
}

#[derive(Debug, Clone)]
pub struct EmpiricalFields {
    pub f: PhaseField,
    pub boundary: BoundaryDensityPair,
    pub escaped: f64,
    pub counts: BinCounts,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BinCounts {
    pub interior: usize,
    pub plus: usize,
    pub minus: usize,
    pub escaped: usize,
}

impl BinCounts {
    pub fn total(&self) -> usize {
        self.interior + self.plus + self.minus + self.escaped
    }
}

/// Histogram of the chain ends with unit total mass.
pub fn empirical_fields(chains: &[ChainState], grid: GridSpec, bands: TrapBands) -> Result<EmpiricalFields> {
    if chains.is_empty() {
        return Err(ChainError::EmptyEnsemble);
    }
    if !(bands.x2 > 0.0 && bands.theta > 0.0) {
        return Err(ChainError::Parameter(format!("trap bands must be > 0, got {bands:?}")));
    }
    let w = 1.0 / chains.len() as f64;
    let mut f = PhaseField::zeros(grid);
    let mut b = BoundaryDensityPair::zeros(grid);
    let mut counts = BinCounts::default();
    let vol = grid.cell_volume();
    for c in chains {
        match classify(c, &grid, &bands) {
            BinClass::Plus(i) => {
                b.deposit_plus(i, w);
                counts.plus += 1;
            }
            BinClass::Minus(i) => {
                b.deposit_minus(i, w);
                counts.minus += 1;
            }
            BinClass::Interior(i) => {
                f.values[i] += w / vol;
                counts.interior += 1;
            }
            BinClass::Escaped => counts.escaped += 1,
        }
    }
    Ok(EmpiricalFields {
        f,
        boundary: b,
        escaped: counts.escaped as f64 * w,
        counts,
    })
}

/// `x1`-integrated histogram: the reduced density and the trapped masses.
#[derive(Debug, Clone)]
pub struct EmpiricalReduced {
    pub rho1: ReducedField,
    pub trapped_plus: f64,
    pub trapped_minus: f64,
    pub escaped: f64,
    pub counts: BinCounts,
}

pub fn empirical_reduced(chains: &[ChainState], grid: GridSpec, bands: TrapBands) -> Result<EmpiricalReduced> {
    let e = empirical_fields(chains, grid, bands)?;
    Ok(EmpiricalReduced {
        rho1: e.f.marginal_x1(),
        trapped_plus: e.boundary.mass_plus(),
        trapped_minus: e.boundary.mass_minus(),
        escaped: e.escaped,
        counts: e.counts,
    })
}
