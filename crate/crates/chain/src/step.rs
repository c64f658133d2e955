use std::f64::consts::{FRAC_PI_2, PI};

use polykin_core::{wrap_angle, PhasePoint};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::gibbs::GibbsTable;
use crate::{ChainError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrapSide {
    /// Clamped onto `θ = −arcsin(x2/ε)`, heading towards `+x1`.
    Plus,
    /// Clamped onto `θ = −π + arcsin(x2/ε)`, heading towards `−x1`.
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainParams {
    pub epsilon: f64,
    pub n_steps: usize,
    pub x0: PhasePoint,
    pub seed: u64,
}

impl ChainParams {
    /// `n_steps = round(length/ε)`.
    pub fn for_length(epsilon: f64, length: f64, x0: PhasePoint, seed: u64) -> Result<Self> {
        let p = Self {
            epsilon,
            n_steps: (length / epsilon).round() as usize,
            x0,
            seed,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon <= 0.1) {
            return Err(ChainError::Parameter(format!("epsilon must be in (0, 0.1], got {}", self.epsilon)));
        }
        Ok(())
    }

    pub fn length(&self) -> f64 {
        self.n_steps as f64 * self.epsilon
    }
}

/// Position, orientation and the side of the most recent wall clamp.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainState {
    pub x1: f64,
    pub x2: f64,
    pub theta: f64,
    pub trapped: Option<TrapSide>,
}

impl ChainState {
    pub fn new(p: PhasePoint) -> Self {
        Self {
            x1: p.x1,
            x2: p.x2,
            theta: p.theta.value(),
            trapped: None,
        }
    }
}

/// Closest admissible direction to `theta` (in the sense of `cos` of the
/// turning angle) for a monomer at height `x2`; `None` when `theta` itself
/// keeps the next monomer in `x2 ≥ 0`.
pub fn boundary_rule(x2: f64, theta: f64, epsilon: f64) -> Option<(f64, TrapSide)> {
    if x2 + epsilon * theta.sin() >= 0.0 {
        return None;
    }
    let a = (x2 / epsilon).min(1.0).asin();
    if theta >= -FRAC_PI_2 {
        Some((-a, TrapSide::Plus))
    } else {
        Some((-PI + a, TrapSide::Minus))
    }
}

/// Step with a given increment `dtheta`.
pub fn chain_step_with(state: &ChainState, epsilon: f64, dtheta: f64) -> ChainState {
    let proposal = wrap_angle(state.theta + dtheta).map(f64::from).unwrap_or(state.theta);
    let (theta, trapped) = match boundary_rule(state.x2, proposal, epsilon) {
        None => (proposal, state.trapped),
        Some((t, side)) => (t, Some(side)),
    };
    let (s, c) = theta.sin_cos();
    let x2 = (state.x2 + epsilon * s).max(0.0);
    debug_assert!(x2 >= 0.0);
    ChainState {
        x1: state.x1 + epsilon * c,
        x2,
        theta,
        trapped,
    }
}

pub fn chain_step<R: Rng + ?Sized>(state: &ChainState, table: &GibbsTable, rng: &mut R) -> ChainState {
    chain_step_with(state, table.epsilon, table.sample(rng))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_step_moves_exactly_epsilon() {
        let s = ChainState::new(PhasePoint::new(0.3, 10.0, 0.4).unwrap());
        let n = chain_step_with(&s, 0.01, 0.05);
        assert!((n.theta - 0.45).abs() < 1e-15);
        let d = ((n.x1 - s.x1).powi(2) + (n.x2 - s.x2).powi(2)).sqrt();
        assert!((d - 0.01).abs() < 1e-15);
        assert_eq!(n.trapped, None);
    }

    #[test]
    fn clamp_examples() {
        assert_eq!(boundary_rule(0.0, -FRAC_PI_2 - 0.1, 0.01), Some((-PI, TrapSide::Minus)));
        assert_eq!(boundary_rule(0.0, -0.3, 0.01), Some((-0.0, TrapSide::Plus)));
        assert_eq!(boundary_rule(0.02, -0.3, 0.01), None);
        let (t, _) = boundary_rule(0.005, -1.0, 0.01).unwrap();
        assert!((0.005 + 0.01 * t.sin()).abs() < 1e-15);
    }

    #[test]
    fn clamped_step_lands_on_the_wall() {
        let s = ChainState::new(PhasePoint::new(0.0, 0.004, -1.2).unwrap());
        let n = chain_step_with(&s, 0.01, 0.0);
        assert_eq!(n.x2, 0.0);
        assert_eq!(n.trapped, Some(TrapSide::Plus));
    }
}
