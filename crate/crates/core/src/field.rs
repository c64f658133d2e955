use crate::{CoreError, GridSpec, Result};

/// Quadrature of a field with the midpoint/cell-sum rule.
pub trait Integrate {
    fn integrate(&self) -> f64;
}

fn check_values(values: &[f64], expected: usize) -> Result<()> {
    if values.len() != expected {
        return Err(CoreError::DimensionMismatch {
            expected,
            got: values.len(),
        });
    }
    if let Some((index, &value)) = values
        .iter()
        .enumerate()
        .find(|(_, v)| !(**v >= 0.0) || !v.is_finite())
    {
        return Err(CoreError::NegativeValue { index, value });
    }
    Ok(())
}

/// Cell-averaged interior density `f_r(x1, x2, θ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseField {
    pub grid: GridSpec,
    pub values: Vec<f64>,
}

impl PhaseField {
    pub fn zeros(grid: GridSpec) -> Self {
        Self {
            grid,
            values: vec![0.0; grid.len_full()],
        }
    }

    pub fn from_values(grid: GridSpec, values: Vec<f64>) -> Result<Self> {
        check_values(&values, grid.len_full())?;
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: GridSpec, f: impl Fn(f64, f64, f64) -> f64) -> Self {
        let mut values = Vec::with_capacity(grid.len_full());
        for i1 in 0..grid.n_x1 {
            for i2 in 0..grid.n_x2 {
                for k in 0..grid.n_theta {
                    values.push(f(grid.x1(i1), grid.x2(i2), grid.theta(k)));
                }
            }
        }
        Self { grid, values }
    }

    #[inline]
    pub fn get(&self, i1: usize, i2: usize, k: usize) -> f64 {
        self.values[self.grid.idx(i1, i2, k)]
    }

    #[inline]
    pub fn set(&mut self, i1: usize, i2: usize, k: usize, v: f64) {
        let i = self.grid.idx(i1, i2, k);
        self.values[i] = v;
    }

    /// `ρ1(x2, θ) = ∫ f_r dx1`.
    pub fn marginal_x1(&self) -> ReducedField {
        let g = self.grid;
        let mut out = ReducedField::zeros(g);
        let dx1 = g.dx1();
        for i1 in 0..g.n_x1 {
            let block = &self.values[g.idx(i1, 0, 0)..g.idx(i1, 0, 0) + g.len_reduced()];
            for (o, v) in out.values.iter_mut().zip(block) {
                *o += v * dx1;
            }
        }
        out
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().cloned().fold(0.0, f64::max)
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().cloned().fold(f64::INFINITY, f64::min)
    }
}

impl Integrate for PhaseField {
    fn integrate(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.cell_volume()
    }
}

/// Density `ρ1(x2, θ)` of the reduced system (the `x1` marginal).
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedField {
    pub grid: GridSpec,
    pub values: Vec<f64>,
}

impl ReducedField {
    pub fn zeros(grid: GridSpec) -> Self {
        Self {
            grid,
            values: vec![0.0; grid.len_reduced()],
        }
    }

    pub fn from_values(grid: GridSpec, values: Vec<f64>) -> Result<Self> {
        check_values(&values, grid.len_reduced())?;
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: GridSpec, f: impl Fn(f64, f64) -> f64) -> Self {
        let mut values = Vec::with_capacity(grid.len_reduced());
        for i2 in 0..grid.n_x2 {
            for k in 0..grid.n_theta {
                values.push(f(grid.x2(i2), grid.theta(k)));
            }
        }
        Self { grid, values }
    }

    #[inline]
    pub fn get(&self, i2: usize, k: usize) -> f64 {
        self.values[self.grid.ridx(i2, k)]
    }

    #[inline]
    pub fn set(&mut self, i2: usize, k: usize, v: f64) {
        let i = self.grid.ridx(i2, k);
        self.values[i] = v;
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    /// `Σ |a − b|` times the cell area.
    pub fn l1_distance(&self, other: &Self) -> Result<f64> {
        if self.grid != other.grid {
            return Err(CoreError::GridMismatch);
        }
        let s: f64 = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .sum();
        Ok(s * self.grid.reduced_cell_area())
    }
}

impl Integrate for ReducedField {
    fn integrate(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.reduced_cell_area()
    }
}

/// Trapped line densities `ρ+(x1)` (moving right) and `ρ−(x1)` (moving left).
///
/// Each density is stored on a copy of the `x1` grid displaced by a sub-cell
/// offset, so that translation at unit speed is an exact index shift and
/// never smears the profile. [`plus_on_grid`](Self::plus_on_grid) and
/// [`minus_on_grid`](Self::minus_on_grid) interpolate back to cell centres.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryDensityPair {
    pub grid: GridSpec,
    rho_plus: Vec<f64>,
    rho_minus: Vec<f64>,
    /// Stored sample `i` of ρ+ sits at `x1(i) + offset_plus·Δx1`, offset in `[0, 1)`.
    offset_plus: f64,
    offset_minus: f64,
}

impl BoundaryDensityPair {
    pub fn zeros(grid: GridSpec) -> Self {
        Self {
            grid,
            rho_plus: vec![0.0; grid.n_x1],
            rho_minus: vec![0.0; grid.n_x1],
            offset_plus: 0.0,
            offset_minus: 0.0,
        }
    }

    /// Grid-aligned densities.
    pub fn from_values(grid: GridSpec, rho_plus: Vec<f64>, rho_minus: Vec<f64>) -> Result<Self> {
        check_values(&rho_plus, grid.n_x1)?;
        check_values(&rho_minus, grid.n_x1)?;
        Ok(Self {
            grid,
            rho_plus,
            rho_minus,
            offset_plus: 0.0,
            offset_minus: 0.0,
        })
    }

    pub fn mass_plus(&self) -> f64 {
        self.rho_plus.iter().sum::<f64>() * self.grid.dx1()
    }

    pub fn mass_minus(&self) -> f64 {
        self.rho_minus.iter().sum::<f64>() * self.grid.dx1()
    }

    pub fn plus_on_grid(&self) -> Vec<f64> {
        resample(&self.rho_plus, self.offset_plus)
    }

    pub fn minus_on_grid(&self) -> Vec<f64> {
        resample(&self.rho_minus, self.offset_minus)
    }

    /// Add `mass` arriving at the centre of `x1` cell `i` to ρ+.
    pub fn deposit_plus(&mut self, i: usize, mass: f64) {
        deposit(&mut self.rho_plus, self.offset_plus, i, mass / self.grid.dx1());
    }

    pub fn deposit_minus(&mut self, i: usize, mass: f64) {
        deposit(&mut self.rho_minus, self.offset_minus, i, mass / self.grid.dx1());
    }

    /// Translate ρ+ by `+dist` and ρ− by `−dist` (periodic in `x1`).
    pub fn translate(&mut self, dist: f64) {
        let cells = dist / self.grid.dx1();
        self.offset_plus += cells;
        let whole = self.offset_plus.floor();
        self.offset_plus -= whole;
        rotate(&mut self.rho_plus, whole as i64);

        self.offset_minus -= cells;
        let whole = self.offset_minus.floor();
        self.offset_minus -= whole;
        rotate(&mut self.rho_minus, whole as i64);
    }

    pub fn min_value(&self) -> f64 {
        self.rho_plus
            .iter()
            .chain(&self.rho_minus)
            .cloned()
            .fold(f64::INFINITY, f64::min)
    }
}

/// Stored sample `j` sits at `x(j) + s·Δ`; cell centre `x(i)` lies between
/// stored `i − 1` (weight `s`) and stored `i` (weight `1 − s`).
fn resample(stored: &[f64], s: f64) -> Vec<f64> {
    let n = stored.len();
    (0..n)
        .map(|i| s * stored[(i + n - 1) % n] + (1.0 - s) * stored[i])
        .collect()
}

fn deposit(stored: &mut [f64], s: f64, i: usize, density: f64) {
    let n = stored.len();
    stored[(i + n - 1) % n] += s * density;
    stored[i] += (1.0 - s) * density;
}

fn rotate(v: &mut [f64], by: i64) {
    let n = v.len() as i64;
    let r = by.rem_euclid(n) as usize;
    v.rotate_right(r);
}
