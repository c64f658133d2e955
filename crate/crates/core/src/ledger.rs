use serde::{Deserialize, Serialize};

use crate::{BoundaryDensityPair, CoreError, Integrate, PhaseField, Result};

/// Mass audit: interior, trapped on either side, and escaped past `x2_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
pub struct MassLedger {
    pub interior: f64,
    pub trapped_plus: f64,
    pub trapped_minus: f64,
    pub escaped_top: f64,
    pub total: f64,
}

impl MassLedger {
    pub fn from_parts(interior: f64, trapped_plus: f64, trapped_minus: f64, escaped_top: f64) -> Self {
        Self {
            interior,
            trapped_plus,
            trapped_minus,
            escaped_top,
            total: interior + trapped_plus + trapped_minus + escaped_top,
        }
    }

    pub fn trapped(&self) -> f64 {
        self.trapped_plus + self.trapped_minus
    }
}

pub fn make_ledger(f: &PhaseField, b: &BoundaryDensityPair, escaped: f64) -> Result<MassLedger> {
    if f.grid != b.grid {
        return Err(CoreError::GridMismatch);
    }
    if !(escaped >= 0.0) {
        return Err(CoreError::NegativeEscape(escaped));
    }
    Ok(MassLedger::from_parts(
        f.integrate(),
        b.mass_plus(),
        b.mass_minus(),
        escaped,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::GridSpec;

    #[test]
    fn ledger_examples() {
        let g = GridSpec::new((0.0, 1.0, 4), (1.0, 4), 4, 0.1).unwrap();
        let zero = make_ledger(&PhaseField::zeros(g), &BoundaryDensityPair::zeros(g), 0.0).unwrap();
        assert_eq!(zero.total, 0.0);

        // One interior cell carrying 0.7, and line masses 0.2 and 0.1.
        let mut f = PhaseField::zeros(g);
        f.set(1, 1, 1, 0.7 / g.cell_volume());
        let mut b = BoundaryDensityPair::zeros(g);
        b.deposit_plus(0, 0.2);
        b.deposit_minus(3, 0.1);
        let l = make_ledger(&f, &b, 0.0).unwrap();
        assert!((l.total - 1.0).abs() < 1e-15);
        assert_eq!(l.total, l.interior + l.trapped_plus + l.trapped_minus + l.escaped_top);
    }

    #[test]
    fn negative_escape_rejected() {
        let g = GridSpec::new((0.0, 1.0, 4), (1.0, 4), 4, 0.1).unwrap();
        assert!(make_ledger(&PhaseField::zeros(g), &BoundaryDensityPair::zeros(g), -1.0).is_err());
    }
}
