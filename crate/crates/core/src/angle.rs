use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::{CoreError, Result};

/// Orientation in the half-open interval `[−π, π)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct Angle(f64);

impl Angle {
    pub fn value(self) -> f64 {
        self.0
    }

    pub fn cos(self) -> f64 {
        self.0.cos()
    }

    pub fn sin(self) -> f64 {
        self.0.sin()
    }
}

impl From<Angle> for f64 {
    fn from(a: Angle) -> f64 {
        a.0
    }
}

/// Reduce `theta` modulo 2π into `[−π, π)`.
pub fn wrap_angle(theta: f64) -> Result<Angle> {
    if !theta.is_finite() {
        return Err(CoreError::NonFiniteAngle(theta));
    }
    Ok(Angle(wrap(theta)))
}

/// Unchecked variant for hot loops; callers guarantee finiteness.
#[inline]
pub(crate) fn wrap(theta: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let mut w = (theta + PI).rem_euclid(two_pi) - PI;
    // rem_euclid can round up to exactly 2π for tiny negative inputs.
    if w >= PI {
        w -= two_pi;
    }
    if w < -PI {
        w = -PI;
    }
    w
}

/// A point of the phase space `ℝ × [0, ∞) × S¹`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub x1: f64,
    pub x2: f64,
    pub theta: Angle,
}

impl PhasePoint {
    pub fn new(x1: f64, x2: f64, theta: f64) -> Result<Self> {
        if !(x2 >= 0.0) || !x1.is_finite() || !x2.is_finite() {
            return Err(CoreError::InvalidGrid(format!(
                "phase point needs finite x1 and x2 >= 0, got ({x1}, {x2})"
            )));
        }
        Ok(Self {
            x1,
            x2,
            theta: wrap_angle(theta)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn wrap_examples() {
        assert_eq!(wrap_angle(0.0).unwrap().value(), 0.0);
        assert!((wrap_angle(2.0 * PI + 0.5).unwrap().value() - 0.5).abs() < 1e-15);
        assert_eq!(wrap_angle(PI).unwrap().value(), -PI);
        assert_eq!(wrap_angle(-PI).unwrap().value(), -PI);
    }

    #[test]
    fn wrap_rejects_non_finite() {
        assert!(wrap_angle(f64::NAN).is_err());
        assert!(wrap_angle(f64::INFINITY).is_err());
    }

    #[test]
    fn phase_point_rejects_negative_height() {
        assert!(PhasePoint::new(0.0, -1e-9, 0.0).is_err());
        assert!(PhasePoint::new(0.0, 0.0, 0.0).is_ok());
    }

    proptest! {
        #[test]
        fn wrap_in_range(theta in -1e4f64..1e4) {
            let w = wrap_angle(theta).unwrap().value();
            prop_assert!((-PI..PI).contains(&w));
        }

        #[test]
        fn wrap_periodic(theta in -100.0f64..100.0) {
            let a = wrap_angle(theta).unwrap().value();
            let b = wrap_angle(theta + 2.0 * PI).unwrap().value();
            let d = (a - b).abs();
            prop_assert!(d < 1e-12 || (2.0 * PI - d) < 1e-12);
        }

        #[test]
        fn wrap_idempotent(theta in -100.0f64..100.0) {
            let a = wrap_angle(theta).unwrap().value();
            prop_assert_eq!(wrap_angle(a).unwrap().value(), a);
        }

        #[test]
        fn wrap_congruent(theta in -100.0f64..100.0) {
            let a = wrap_angle(theta).unwrap().value();
            let k = ((theta - a) / (2.0 * PI)).round();
            prop_assert!((theta - a - 2.0 * PI * k).abs() < 1e-11);
        }
    }
}
