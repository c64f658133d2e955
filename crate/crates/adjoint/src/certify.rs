use std::io::Write;

use serde::{Deserialize, Serialize};

/// One certification line: a named bound and whether the measurement met it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub bound: String,
    pub measured: f64,
    pub bound_value: f64,
    pub pass: bool,
}

impl Certificate {
    /// `measured ≤ bound_value`.
    pub fn upper(bound: impl Into<String>, measured: f64, bound_value: f64) -> Self {
        Self {
            bound: bound.into(),
            measured,
            bound_value,
            pass: measured <= bound_value,
        }
    }

    /// `measured ≥ bound_value`.
    pub fn lower(bound: impl Into<String>, measured: f64, bound_value: f64) -> Self {
        Self {
            bound: bound.into(),
            measured,
            bound_value,
            pass: measured >= bound_value,
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("certificate serializes")
    }
}

pub fn write_json_lines<W: Write>(mut w: W, certs: &[Certificate]) -> std::io::Result<()> {
    for c in certs {
        writeln!(w, "{}", c.to_json_line())?;
    }
    Ok(())
}
