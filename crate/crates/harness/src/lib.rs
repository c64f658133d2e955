//! Experiment runner for the polykin solvers: configuration, the
//! acceptance experiments, and JSON/CSV reporting. The `polykin` binary is a
//! thin shell over [`run`].

pub mod config;
pub mod experiments;
mod oracles;
pub mod report;

use std::path::PathBuf;
use std::time::Instant;

use thiserror::Error;

pub use config::{
    AdjointSection, ChainSection, Experiment, ExperimentSection, FieldError, ProfilesSection, RunConfig,
};
pub use report::{input_hash, Check, ExperimentReport, Label, Relation};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid configuration:\n{}", .0.iter().map(|e| format!("  {e}")).collect::<Vec<_>>().join("\n"))]
    Invalid(Vec<FieldError>),
    #[error("cannot parse configuration: {0}")]
    Parse(String),
    #[error("unknown experiment {0:?}")]
    UnknownExperiment(String),
    #[error("i/o: {0}")]
    Io(String),
    #[error("{context}: {message}")]
    Runtime { context: String, message: String },
}

impl HarnessError {
    /// Process exit status for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Invalid(_) | HarnessError::Parse(_) | HarnessError::UnknownExperiment(_) => 2,
            HarnessError::Io(_) | HarnessError::Runtime { .. } => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;

/// Attach context to an error from a solver crate.
pub(crate) trait Context<T> {
    fn context(self, what: &str) -> Result<T>;
}

impl<T, E: std::fmt::Display> Context<T> for std::result::Result<T, E> {
    fn context(self, what: &str) -> Result<T> {
        self.map_err(|e| HarnessError::Runtime {
            context: what.into(),
            message: e.to_string(),
        })
    }
}

/// Output directory of one experiment: `POLYKIN_OUT` (if set) or the
/// configured directory, then the experiment name.
pub fn output_dir(config: &RunConfig) -> PathBuf {
    let root = std::env::var_os("POLYKIN_OUT")
        .map(PathBuf::from)
        .unwrap_or_else(|| config.experiment.output_dir.clone());
    root.join(config.experiment.name.name())
}

/// Validate, run the named experiment, and write `report.json` plus its CSV
/// artifacts.
pub fn run(config: &RunConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let dir = output_dir(config);
    std::fs::create_dir_all(&dir).map_err(|e| report::io_err(&dir, e))?;
    let start = Instant::now();
    let mut rep = experiments::execute(config, &dir)?;
    rep.elapsed_seconds = start.elapsed().as_secs_f64();
    let path = dir.join("report.json");
    rep.artifacts.push(path.clone());
    rep.write_json(&path)?;
    Ok(rep)
}
