use polykin_core::{tridiag::CyclicDiffusion, Integrate, ReducedField};

use crate::step::{check_cfl, shift, split, x2_weights};
use crate::{KineticState, Result};

/// `x1`-integrated state: `ρ1(x2, θ)` and the trapped masses as scalars.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedState {
    pub rho1: ReducedField,
    pub trapped_plus: f64,
    pub trapped_minus: f64,
    pub escaped_top: f64,
    pub time: f64,
}

impl ReducedState {
    pub fn new(rho1: ReducedField) -> Self {
        Self {
            rho1,
            trapped_plus: 0.0,
            trapped_minus: 0.0,
            escaped_top: 0.0,
            time: 0.0,
        }
    }

    pub fn from_full(s: &KineticState) -> Self {
        Self {
            rho1: s.f.marginal_x1(),
            trapped_plus: s.ledger.trapped_plus,
            trapped_minus: s.ledger.trapped_minus,
            escaped_top: s.ledger.escaped_top,
            time: s.time,
        }
    }

    pub fn interior(&self) -> f64 {
        self.rho1.integrate()
    }

    pub fn total(&self) -> f64 {
        self.interior() + self.trapped_plus + self.trapped_minus + self.escaped_top
    }
}

pub fn advance_reduced(state: &ReducedState, dt: f64) -> Result<ReducedState> {
    let g = state.rho1.grid;
    check_cfl(&g, dt)?;
    let (n2, nt) = (g.n_x2, g.n_theta);
    let src = &state.rho1.values;
    let mut out = vec![0.0; g.len_reduced()];
    let area = g.reduced_cell_area();
    let (mut plus, mut minus, mut top) = (0.0, 0.0, 0.0);
    for k in 0..nt {
        let (fy, dy) = shift(dt * g.theta(k).sin(), g.dx2());
        for j in 0..n2 {
            let mut acc = 0.0;
            for (row, wy) in x2_weights(j, n2, fy, dy) {
                if let Some(r) = row {
                    if wy > 0.0 {
                        acc += wy * src[g.ridx(r, k)];
                    }
                }
            }
            out[g.ridx(j, k)] = acc;
        }
        if fy > 0.0 {
            if dy < 0 {
                let m = src[g.ridx(0, k)] * area * fy;
                let (p, q) = split(g.theta(k));
                plus += p * m;
                minus += q * m;
            } else {
                top += src[g.ridx(n2 - 1, k)] * area * fy;
            }
        }
    }
    let r = g.d * dt / (g.dtheta() * g.dtheta());
    if r > 0.0 {
        let solver = CyclicDiffusion::new(nt, r);
        out.chunks_mut(nt).for_each(|col| solver.solve_in_place(col));
    }
    Ok(ReducedState {
        rho1: ReducedField { grid: g, values: out },
        trapped_plus: state.trapped_plus + plus,
        trapped_minus: state.trapped_minus + minus,
        escaped_top: state.escaped_top + top,
        time: state.time + dt,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use polykin_core::GridSpec;

    #[test]
    fn zero_fixed_and_mass_conserved() {
        let g = GridSpec::new((-1.0, 1.0, 4), (2.0, 32), 32, 0.05).unwrap();
        let z = ReducedState::new(ReducedField::zeros(g));
        assert_eq!(advance_reduced(&z, 0.05).unwrap().total(), 0.0);

        let mut s = ReducedState::new(ReducedField::from_fn(g, |x2, th| {
            (-(x2 - 0.4).powi(2) * 10.0).exp() * (1.0 + 0.5 * th.cos())
        }));
        let m0 = s.total();
        let mut interior = s.interior();
        for _ in 0..200 {
            s = advance_reduced(&s, 0.05).unwrap();
            assert!((s.total() - m0).abs() < 1e-12);
            assert!(s.interior() <= interior + 1e-13);
            interior = s.interior();
            assert!(s.rho1.min_value() >= 0.0);
        }
        assert!(s.trapped_plus > 0.0 && s.trapped_minus > 0.0);
    }
}
