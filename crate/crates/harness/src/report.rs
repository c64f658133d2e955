use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::RunConfig;
use crate::{HarnessError, Result};

/// Where a threshold comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Label {
    /// Fixed by pilot or refinement runs and frozen as a regression value.
    #[serde(rename = "DERIVED")]
    Derived,
    /// Stated by the analysis being reproduced.
    #[serde(rename = "PAPER")]
    Paper,
    /// Holds by construction.
    #[serde(rename = "TRIVIAL")]
    Trivial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    AtMost,
    AtLeast,
    Below,
    Above,
}

impl Relation {
    pub fn holds(self, value: f64, threshold: f64) -> bool {
        match self {
            Relation::AtMost => value <= threshold,
            Relation::AtLeast => value >= threshold,
            Relation::Below => value < threshold,
            Relation::Above => value > threshold,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::AtMost => "<=",
            Relation::AtLeast => ">=",
            Relation::Below => "<",
            Relation::Above => ">",
        }
    }
}

/// One thresholded measurement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// Acceptance criterion this check belongs to, if any.
    pub criterion: Option<u8>,
    pub value: f64,
    pub relation: Relation,
    pub threshold: f64,
    pub label: Label,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    pub fn new(name: &str, criterion: Option<u8>, value: f64, relation: Relation, threshold: f64, label: Label) -> Self {
        Self {
            name: name.into(),
            criterion,
            value,
            relation,
            threshold,
            label,
            // NaN fails every relation.
            pass: relation.holds(value, threshold),
            note: None,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn line(&self) -> String {
        format!(
            "{} {} = {:.6e} {} {:.6e} [{}]",
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.value,
            self.relation.symbol(),
            self.threshold,
            match self.label {
                Label::Derived => "DERIVED",
                Label::Paper => "PAPER",
                Label::Trivial => "TRIVIAL",
            }
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub seed: u64,
    /// SHA-256 of the canonical JSON of `config`.
    pub input_hash: String,
    pub config: RunConfig,
    pub checks: Vec<Check>,
    /// Unthresholded diagnostics.
    pub metrics: BTreeMap<String, f64>,
    pub artifacts: Vec<PathBuf>,
    pub pass: bool,
    pub elapsed_seconds: f64,
}

impl ExperimentReport {
    pub fn new(config: &RunConfig) -> Self {
        Self {
            experiment: config.experiment.name.name().into(),
            seed: config.experiment.seed,
            input_hash: input_hash(config),
            config: config.clone(),
            checks: Vec::new(),
            metrics: BTreeMap::new(),
            artifacts: Vec::new(),
            pass: true,
            elapsed_seconds: 0.0,
        }
    }

    pub fn check(&mut self, c: Check) {
        self.pass &= c.pass;
        self.checks.push(c);
    }

    pub fn metric(&mut self, name: &str, value: f64) {
        self.metrics.insert(name.into(), value);
    }

    pub fn checks_for(&self, criterion: u8) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(move |c| c.criterion == Some(criterion))
    }

    pub fn summary(&self) -> String {
        let mut s = format!(
            "{}: {} ({} checks, {:.1} s, inputs {})\n",
            self.experiment,
            if self.pass { "PASS" } else { "FAIL" },
            self.checks.len(),
            self.elapsed_seconds,
            &self.input_hash[..12]
        );
        for c in &self.checks {
            s.push_str("  ");
            s.push_str(&c.line());
            s.push('\n');
        }
        s
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self).map_err(|e| HarnessError::Io(e.to_string()))?;
        fs::write(path, text).map_err(|e| io_err(path, e))
    }
}

pub fn input_hash(config: &RunConfig) -> String {
    let bytes = serde_json::to_vec(config).expect("config serializes");
    Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
}

pub(crate) fn io_err(path: &Path, e: std::io::Error) -> HarnessError {
    HarnessError::Io(format!("{}: {e}", path.display()))
}

/// CSV writer over a header and rows of numbers.
pub fn write_csv(path: &Path, header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> Result<()> {
    let file = fs::File::create(path).map_err(|e| io_err(path, e))?;
    let mut w = std::io::BufWriter::new(file);
    let io = |e| io_err(path, e);
    writeln!(w, "{}", header.join(",")).map_err(io)?;
    for r in rows {
        let line: Vec<String> = r.iter().map(|v| format!("{v}")).collect();
        writeln!(w, "{}", line.join(",")).map_err(io)?;
    }
    w.flush().map_err(io)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Experiment;

    #[test]
    fn relations_and_nan() {
        assert!(Relation::AtMost.holds(1.0, 1.0));
        assert!(!Relation::Below.holds(1.0, 1.0));
        assert!(!Relation::AtMost.holds(f64::NAN, 1.0));
        assert!(!Relation::AtLeast.holds(f64::NAN, 1.0));
    }

    #[test]
    fn report_tracks_failures_and_hash() {
        let c = RunConfig::reference(Experiment::MassBalance);
        let mut r = ExperimentReport::new(&c);
        assert_eq!(r.input_hash.len(), 64);
        assert_eq!(r.input_hash, input_hash(&c));
        let mut other = c.clone();
        other.experiment.seed += 1;
        assert_ne!(input_hash(&other), r.input_hash);
        r.check(Check::new("a", Some(1), 0.5, Relation::AtMost, 1.0, Label::Paper));
        assert!(r.pass);
        r.check(Check::new("b", None, 2.0, Relation::AtMost, 1.0, Label::Derived));
        assert!(!r.pass);
        assert_eq!(r.checks_for(1).count(), 1);
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"DERIVED\"") && json.contains("\"PAPER\""));
        let back: ExperimentReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
    }
}
