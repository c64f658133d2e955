use std::f64::consts::PI;

use polykin_core::{BoundaryDensityPair, GridSpec, Integrate, PhaseField};
use serde::{Deserialize, Serialize};

use crate::{KineticError, KineticState, Result};

fn default_width() -> f64 {
    1.0
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InitShape {
    /// Point mass smoothed by a Gaussian `width` cells wide in each direction.
    PointMass {
        x1: f64,
        x2: f64,
        theta: f64,
        #[serde(default = "default_width")]
        width: f64,
    },
    Gaussian {
        x1: f64,
        x2: f64,
        theta: f64,
        sigma_x1: f64,
        sigma_x2: f64,
        sigma_theta: f64,
    },
    /// Cell values in the grid's flat layout.
    Table { values: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InitSpec {
    #[serde(flatten)]
    pub shape: InitShape,
    /// Scale to unit total mass.
    #[serde(default = "default_true")]
    pub normalize: bool,
}

impl From<InitShape> for InitSpec {
    fn from(shape: InitShape) -> Self {
        Self {
            shape,
            normalize: true,
        }
    }
}

fn periodic_gap(a: f64, b: f64, period: f64) -> f64 {
    let d = (a - b).rem_euclid(period);
    d.min(period - d)
}

fn gaussian(g: GridSpec, c: (f64, f64, f64), s: (f64, f64, f64)) -> Result<PhaseField> {
    if !(s.0 > 0.0 && s.1 > 0.0 && s.2 > 0.0) {
        return Err(KineticError::Initial(format!("widths must be > 0, got {s:?}")));
    }
    let len = g.x1_len();
    Ok(PhaseField::from_fn(g, |x1, x2, th| {
        let d1 = periodic_gap(x1, c.0, len) / s.0;
        let d2 = (x2 - c.1) / s.1;
        let d3 = periodic_gap(th, c.2, 2.0 * PI) / s.2;
        (-0.5 * (d1 * d1 + d2 * d2 + d3 * d3)).exp()
    }))
}

pub fn init_state(spec: &InitSpec, grid: GridSpec) -> Result<KineticState> {
    grid.validate()?;
    let mut boundary = BoundaryDensityPair::zeros(grid);
    let mut f = match &spec.shape {
        InitShape::PointMass { x1, x2, theta, width } => {
            if *x2 < 0.0 {
                return Err(KineticError::Initial(format!("x2 = {x2} < 0")));
            }
            if *x2 == 0.0 {
                let th = polykin_core::wrap_angle(*theta)?.value();
                let i1 = (((x1 - grid.x1_min) / grid.dx1()).floor() as isize)
                    .rem_euclid(grid.n_x1 as isize) as usize;
                if th == 0.0 {
                    boundary.deposit_plus(i1, 1.0);
                } else if th == -PI {
                    boundary.deposit_minus(i1, 1.0);
                } else {
                    return Err(KineticError::Initial(format!(
                        "a point mass on the wall must point along 0 or -pi, got theta = {th}"
                    )));
                }
                PhaseField::zeros(grid)
            } else {
                let w = *width;
                gaussian(grid, (*x1, *x2, *theta), (w * grid.dx1(), w * grid.dx2(), w * grid.dtheta()))?
            }
        }
        InitShape::Gaussian {
            x1,
            x2,
            theta,
            sigma_x1,
            sigma_x2,
            sigma_theta,
        } => gaussian(grid, (*x1, *x2, *theta), (*sigma_x1, *sigma_x2, *sigma_theta))?,
        InitShape::Table { values } => PhaseField::from_values(grid, values.clone())?,
    };
    if spec.normalize {
        let m = f.integrate() + boundary.mass_plus() + boundary.mass_minus();
        if !(m > 0.0) {
            return Err(KineticError::Initial("initial mass is zero".into()));
        }
        let inv = 1.0 / m;
        f.values.iter_mut().for_each(|v| *v *= inv);
        if boundary.mass_plus() + boundary.mass_minus() > 0.0 {
            let mut b = BoundaryDensityPair::zeros(grid);
            let (p, q) = (boundary.plus_on_grid(), boundary.minus_on_grid());
            for i in 0..grid.n_x1 {
                b.deposit_plus(i, p[i] * inv * grid.dx1());
                b.deposit_minus(i, q[i] * inv * grid.dx1());
            }
            boundary = b;
        }
    }
    KineticState::new(f, boundary, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> GridSpec {
        GridSpec::new((-2.0, 2.0, 16), (2.0, 16), 16, 0.05).unwrap()
    }

    #[test]
    fn point_mass_has_unit_mass() {
        for c in [(0.0, 0.5, 0.3), (1.9, 0.1, -3.0), (-2.0, 1.7, 1.0)] {
            let spec = InitSpec::from(InitShape::PointMass { x1: c.0, x2: c.1, theta: c.2, width: 1.0 });
            let s = init_state(&spec, grid()).unwrap();
            assert!((s.ledger.total - 1.0).abs() < 1e-12);
            assert!(s.f.min_value() >= 0.0);
        }
    }

    #[test]
    fn negative_table_rejected() {
        let g = grid();
        let mut v = vec![1.0; g.len_full()];
        v[7] = -1e-3;
        let spec = InitSpec::from(InitShape::Table { values: v });
        assert!(init_state(&spec, g).is_err());
    }

    #[test]
    fn wall_start_goes_straight_to_the_trapped_densities() {
        let g = grid();
        let spec = InitSpec::from(InitShape::PointMass { x1: 0.0, x2: 0.0, theta: 0.0, width: 1.0 });
        let s = init_state(&spec, g).unwrap();
        assert_eq!(s.ledger.interior, 0.0);
        assert!((s.ledger.trapped_plus - 1.0).abs() < 1e-12);
        let spec = InitSpec::from(InitShape::PointMass { x1: 0.0, x2: 0.0, theta: -PI, width: 1.0 });
        assert!((init_state(&spec, g).unwrap().ledger.trapped_minus - 1.0).abs() < 1e-12);
        let spec = InitSpec::from(InitShape::PointMass { x1: 0.0, x2: 0.0, theta: 0.4, width: 1.0 });
        assert!(init_state(&spec, g).is_err());
    }
}
