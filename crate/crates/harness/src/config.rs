use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use polykin_core::GridSpec;
use polykin_kinetic::{InitShape, InitSpec};
use polykin_specfun::{HolderParams, SupersolutionParams};
use serde::{Deserialize, Serialize};

use crate::HarnessError;

/// Grid limits for desk-scale runs.
pub const MAX_N_X1: usize = 128;
pub const MAX_N_X2: usize = 128;
pub const MAX_N_THETA: usize = 128;
pub const MAX_CHAINS: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    MassBalance,
    McVsPde,
    Duality,
    LongChain,
    StationarySuite,
    HolderSuite,
    AdjointCertificates,
    SpecfunSuite,
}

impl Experiment {
    pub const ALL: [Experiment; 8] = [
        Experiment::MassBalance,
        Experiment::McVsPde,
        Experiment::Duality,
        Experiment::LongChain,
        Experiment::StationarySuite,
        Experiment::HolderSuite,
        Experiment::AdjointCertificates,
        Experiment::SpecfunSuite,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::MassBalance => "mass_balance",
            Experiment::McVsPde => "mc_vs_pde",
            Experiment::Duality => "duality",
            Experiment::LongChain => "long_chain",
            Experiment::StationarySuite => "stationary_suite",
            Experiment::HolderSuite => "holder_suite",
            Experiment::AdjointCertificates => "adjoint_certificates",
            Experiment::SpecfunSuite => "specfun_suite",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Experiment::MassBalance => "mass ledger drift of the kinetic solver",
            Experiment::McVsPde => "chain Monte Carlo against the reduced PDE, and the wall-deviation sweep",
            Experiment::Duality => "forward/adjoint pairing defect and its refinement ratio",
            Experiment::LongChain => "interior-mass decay and translation of the trapped density",
            Experiment::StationarySuite => "steady adjoint states: bounds, symmetry, far field, uniqueness",
            Experiment::HolderSuite => "comparison with the self-similar barrier and local exponents",
            Experiment::AdjointCertificates => "maximum-principle bounds of the adjoint solvers on random data",
            Experiment::SpecfunSuite => "special functions and profile residuals against oracles",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| HarnessError::UnknownExperiment(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSection {
    pub name: Experiment,
    pub output_dir: PathBuf,
    pub seed: u64,
    /// Final time of the kinetic or adjoint run.
    pub horizon: f64,
    /// Lag `t₂ − t₁` of the ρ+ translation test.
    pub translation_lag: f64,
    pub initial: InitSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainSection {
    pub epsilon: f64,
    pub n_chains: usize,
    /// Coarser `(ε, chains)` levels for the convergence trend, coarsest first.
    pub trend: Vec<(f64, usize)>,
    /// Block size `(rows, θ nodes)` of the comparison bins.
    pub block: (usize, usize),
    pub diffusion_samples: usize,
    pub deviation_epsilons: Vec<f64>,
    pub deviation_chains: usize,
    pub deviation_window: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdjointSection {
    /// Jump width of `Q^ε`.
    pub epsilon: f64,
    pub kappa: f64,
    /// Resolvent parameter.
    pub lambda: f64,
    /// κ used on the refined grid of the duality study.
    pub refined_kappa: f64,
    pub n_samples: usize,
    /// Time span of the full (x1-dependent) certificate runs; the reduced
    /// runs use the experiment horizon.
    pub full_horizon: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfilesSection {
    pub holder: HolderParams,
    pub supersolution: SupersolutionParams,
    /// Weight of the singular profile in the comparison barrier.
    pub epsilon_c: f64,
    /// `x2` window of the exponent fit along `θ = 0`.
    pub fit_x2_max: f64,
    /// `|θ|` window of the exponent fit on the first row.
    pub fit_theta: (f64, f64),
    pub stationary_tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub experiment: ExperimentSection,
    pub grid: GridSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chain: Option<ChainSection>,
    pub adjoint: AdjointSection,
    pub profiles: ProfilesSection,
}

/// One rejected field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldError {
    pub field: String,
    pub message: String,
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

fn kinetic_grid() -> GridSpec {
    GridSpec::new((-4.0, 4.0, 64), (8.0, 64), 64, 0.125).expect("reference grid")
}

impl RunConfig {
    /// Reference setup of each experiment; a config file overrides any part of it.
    pub fn reference(e: Experiment) -> Self {
        let point: InitSpec = InitShape::PointMass {
            x1: 0.0,
            x2: 1.0,
            theta: 0.0,
            width: 2.0,
        }
        .into();
        let mut c = RunConfig {
            experiment: ExperimentSection {
                name: e,
                output_dir: PathBuf::from("polykin-out"),
                seed: 20_240_601,
                horizon: 10.0,
                translation_lag: 5.0,
                initial: point,
            },
            grid: kinetic_grid(),
            chain: None,
            adjoint: AdjointSection {
                epsilon: 0.05,
                kappa: 0.1,
                lambda: 0.5,
                refined_kappa: 0.05,
                n_samples: 20,
                full_horizon: 0.25,
            },
            profiles: ProfilesSection {
                holder: HolderParams::default(),
                supersolution: SupersolutionParams::new(0.02, 0.05, 0.5, 0.2).expect("reference parameters"),
                epsilon_c: 1e-3,
                fit_x2_max: 0.1,
                fit_theta: (0.3, 0.6),
                stationary_tol: polykin_stationary::DEFAULT_TOL,
            },
        };
        match e {
            Experiment::MassBalance | Experiment::SpecfunSuite => {}
            Experiment::LongChain => c.experiment.horizon = 40.0,
            Experiment::McVsPde => {
                c.grid = GridSpec::new((0.0, 4.0, 4), (2.0, 128), 64, 2.0 / 128.0).expect("reference grid");
                c.experiment.horizon = 1.0;
                c.experiment.initial = InitShape::Gaussian {
                    x1: 2.0,
                    x2: 1.0,
                    theta: -0.8,
                    sigma_x1: 1.0,
                    sigma_x2: 0.25,
                    sigma_theta: 0.4,
                }
                .into();
                c.chain = Some(ChainSection {
                    epsilon: 1e-3,
                    n_chains: 1_000_000,
                    trend: vec![(4e-3, 62_500), (2e-3, 250_000)],
                    block: (16, 8),
                    diffusion_samples: 1_000_000,
                    deviation_epsilons: vec![1e-2, 1e-3, 1e-4],
                    deviation_chains: 2000,
                    deviation_window: 1.0,
                });
            }
            Experiment::Duality => {
                c.grid = GridSpec::new((-4.0, 4.0, 32), (4.0, 32), 32, 0.125).expect("reference grid");
                c.experiment.horizon = 2.0;
                c.experiment.initial = InitShape::Gaussian {
                    x1: 0.0,
                    x2: 1.0,
                    theta: -std::f64::consts::FRAC_PI_2 + 0.3,
                    sigma_x1: 0.5,
                    sigma_x2: 0.3,
                    sigma_theta: 0.4,
                }
                .into();
            }
            Experiment::StationarySuite => {
                c.grid = GridSpec::new((-1.0, 1.0, 4), (8.0, 64), 64, 1.0 / 16.0).expect("reference grid");
            }
            Experiment::HolderSuite => {
                c.grid = GridSpec::new((0.0, 4.0, 4), (1.0, 128), 128, 1.0 / 128.0).expect("reference grid");
                c.experiment.horizon = 1.0;
                c.experiment.initial = InitShape::Gaussian {
                    x1: 2.0,
                    x2: 0.7,
                    theta: 0.0,
                    sigma_x1: 1.0,
                    sigma_x2: 0.3,
                    sigma_theta: 20.0,
                }
                .into();
            }
            Experiment::AdjointCertificates => {
                c.grid = GridSpec::new((-2.0, 2.0, 8), (2.0, 16), 32, 0.01).expect("reference grid");
                c.experiment.horizon = 5.0;
                c.adjoint.epsilon = 0.1;
            }
        }
        c
    }

    /// Parse TOML text; omitted keys keep the reference values of the named
    /// experiment (or of `fallback` when the file names none).
    pub fn from_toml_str(text: &str, fallback: Option<Experiment>) -> Result<Self, HarnessError> {
        let user: toml::Table = toml::from_str(text).map_err(|e| HarnessError::Parse(e.to_string()))?;
        let named = user
            .get("experiment")
            .and_then(|e| e.get("name"))
            .and_then(|n| n.as_str())
            .map(Experiment::from_str)
            .transpose()?;
        let e = named.or(fallback).ok_or_else(|| {
            HarnessError::Invalid(vec![FieldError {
                field: "experiment.name".into(),
                message: "missing (set it in the file or pass --experiment)".into(),
            }])
        })?;
        let base = toml::Table::try_from(RunConfig::reference(e)).map_err(|e| HarnessError::Parse(e.to_string()))?;
        let mut merged = toml::Value::Table(base);
        merge(&mut merged, toml::Value::Table(user));
        if let Some(n) = merged.get_mut("experiment").and_then(|x| x.get_mut("name")) {
            *n = toml::Value::String(e.name().into());
        }
        merged.try_into().map_err(|e: toml::de::Error| HarnessError::Parse(e.to_string()))
    }

    pub fn from_file(path: &Path, fallback: Option<Experiment>) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::Io(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text, fallback)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Every field error at once; nothing is computed before this passes.
    pub fn validate(&self) -> Result<(), HarnessError> {
        let mut errs = Vec::new();
        let mut bad = |field: &str, message: String| {
            errs.push(FieldError {
                field: field.into(),
                message,
            })
        };
        let g = &self.grid;
        if let Err(e) = g.validate() {
            bad("grid", e.to_string());
        }
        if g.n_x1 > MAX_N_X1 || g.n_x2 > MAX_N_X2 || g.n_theta > MAX_N_THETA {
            bad(
                "grid",
                format!("at most {MAX_N_X1}×{MAX_N_X2}×{MAX_N_THETA} nodes, got {}×{}×{}", g.n_x1, g.n_x2, g.n_theta),
            );
        }
        if g.len_full() > MAX_N_X1 * MAX_N_X2 * 64 {
            bad("grid", format!("{} cells exceed the budget of {}", g.len_full(), MAX_N_X1 * MAX_N_X2 * 64));
        }
        let kinetic = matches!(
            self.experiment.name,
            Experiment::MassBalance | Experiment::LongChain | Experiment::Duality | Experiment::McVsPde | Experiment::HolderSuite
        );
        if kinetic && g.dt > g.dx1().min(g.dx2()) * (1.0 + 1e-12) {
            bad("grid.dt", format!("{} exceeds the transport limit {}", g.dt, g.dx1().min(g.dx2())));
        }
        let x = &self.experiment;
        if !(x.horizon > 0.0 && x.horizon.is_finite()) {
            bad("experiment.horizon", format!("must be > 0, got {}", x.horizon));
        }
        if x.name == Experiment::LongChain && !(x.translation_lag > 0.0 && x.translation_lag < x.horizon) {
            bad(
                "experiment.translation_lag",
                format!("must lie in (0, horizon), got {}", x.translation_lag),
            );
        }
        let a = &self.adjoint;
        if !(a.epsilon > 0.0 && a.epsilon < 1.0) {
            bad("adjoint.epsilon", format!("must lie in (0, 1), got {}", a.epsilon));
        }
        for (name, k) in [("adjoint.kappa", a.kappa), ("adjoint.refined_kappa", a.refined_kappa)] {
            if !(k > 0.0 && k < std::f64::consts::FRAC_PI_4) {
                bad(name, format!("must lie in (0, π/4), got {k}"));
            }
        }
        if !(a.lambda > 0.0 && a.lambda.is_finite()) {
            bad("adjoint.lambda", format!("must be > 0, got {}", a.lambda));
        }
        if !(a.full_horizon > 0.0 && a.full_horizon.is_finite()) {
            bad("adjoint.full_horizon", format!("must be > 0, got {}", a.full_horizon));
        }
        if a.n_samples == 0 {
            bad("adjoint.n_samples", "must be >= 1".into());
        }
        let p = &self.profiles;
        if let Err(e) = p.holder.validate() {
            bad("profiles.holder", e.to_string());
        }
        if let Err(e) = p.supersolution.validate() {
            bad("profiles.supersolution", e.to_string());
        }
        if !(p.epsilon_c >= 0.0) {
            bad("profiles.epsilon_c", format!("must be >= 0, got {}", p.epsilon_c));
        }
        if !(p.fit_x2_max > 0.0) {
            bad("profiles.fit_x2_max", format!("must be > 0, got {}", p.fit_x2_max));
        }
        if !(p.fit_theta.0 > 0.0 && p.fit_theta.1 > p.fit_theta.0) {
            bad("profiles.fit_theta", format!("need 0 < lo < hi, got {:?}", p.fit_theta));
        }
        if !(p.stationary_tol > 0.0) {
            bad("profiles.stationary_tol", format!("must be > 0, got {}", p.stationary_tol));
        }
        match (&self.chain, x.name) {
            (None, Experiment::McVsPde) => bad("chain", "required by mc_vs_pde".into()),
            (Some(c), _) => {
                let check_eps = |e: f64| e > 0.0 && e <= 0.1;
                if !check_eps(c.epsilon) {
                    bad("chain.epsilon", format!("must lie in (0, 0.1], got {}", c.epsilon));
                }
                if c.n_chains == 0 || c.n_chains > MAX_CHAINS {
                    bad("chain.n_chains", format!("must lie in [1, {MAX_CHAINS}], got {}", c.n_chains));
                }
                for (i, &(e, n)) in c.trend.iter().enumerate() {
                    if !check_eps(e) || n == 0 || n > MAX_CHAINS {
                        bad(&format!("chain.trend[{i}]"), format!("invalid level ({e}, {n})"));
                    }
                }
                if c.block.0 == 0 || c.block.1 == 0 || g.n_x2 % c.block.0 != 0 || g.n_theta % c.block.1 != 0 {
                    bad("chain.block", format!("{:?} must divide ({}, {})", c.block, g.n_x2, g.n_theta));
                }
                if c.diffusion_samples < 2 {
                    bad("chain.diffusion_samples", "must be >= 2".into());
                }
                if c.deviation_epsilons.iter().any(|&e| !check_eps(e)) {
                    bad("chain.deviation_epsilons", format!("each must lie in (0, 0.1], got {:?}", c.deviation_epsilons));
                }
                if c.deviation_chains < 2 || c.deviation_chains > MAX_CHAINS {
                    bad("chain.deviation_chains", format!("must lie in [2, {MAX_CHAINS}]"));
                }
                if !(c.deviation_window > 0.0) {
                    bad("chain.deviation_window", format!("must be > 0, got {}", c.deviation_window));
                }
            }
            _ => {}
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(HarnessError::Invalid(errs))
        }
    }
}

/// Recursive table merge; `over` wins on leaves and arrays.
fn merge(base: &mut toml::Value, over: toml::Value) {
    match (base, over) {
        (toml::Value::Table(b), toml::Value::Table(o)) => {
            for (k, v) in o {
                match b.get_mut(&k) {
                    Some(slot) if slot.is_table() && v.is_table() && k != "initial" => merge(slot, v),
                    _ => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (b, o) => *b = o,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn references_validate_and_round_trip() {
        for e in Experiment::ALL {
            let c = RunConfig::reference(e);
            c.validate().unwrap_or_else(|err| panic!("{e}: {err}"));
            let back = RunConfig::from_toml_str(&c.to_toml_string(), None).unwrap();
            assert_eq!(back, c);
        }
    }

    #[test]
    fn partial_file_overrides_reference() {
        let c = RunConfig::from_toml_str("[experiment]\nname = \"long_chain\"\nseed = 3\n[grid]\ndt = 0.0625\n", None).unwrap();
        assert_eq!(c.experiment.seed, 3);
        assert_eq!(c.grid.dt, 0.0625);
        assert_eq!(c.grid.n_x1, 64);
        assert_eq!(c.experiment.horizon, 40.0);
    }

    #[test]
    fn initial_shape_is_replaced_whole() {
        let text = "[experiment]\nname = \"mass_balance\"\n[experiment.initial]\nkind = \"gaussian\"\nx1 = 0.0\nx2 = 2.0\ntheta = 0.5\nsigma_x1 = 0.5\nsigma_x2 = 0.5\nsigma_theta = 0.5\n";
        let c = RunConfig::from_toml_str(text, None).unwrap();
        assert!(matches!(c.experiment.initial.shape, InitShape::Gaussian { .. }));
    }

    #[test]
    fn field_errors_are_collected() {
        let text = "[experiment]\nname = \"mass_balance\"\nhorizon = -1.0\n[grid]\ndt = -0.1\n[adjoint]\nkappa = 2.0\n";
        let c = RunConfig::from_toml_str(text, None).unwrap();
        match c.validate() {
            Err(HarnessError::Invalid(v)) => {
                let fields: Vec<&str> = v.iter().map(|e| e.field.as_str()).collect();
                assert!(fields.contains(&"grid"));
                assert!(fields.contains(&"experiment.horizon"));
                assert!(fields.contains(&"adjoint.kappa"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_names_are_rejected() {
        assert!("nope".parse::<Experiment>().is_err());
        assert!(RunConfig::from_toml_str("[experiment]\nname = \"nope\"\n", None).is_err());
        assert!(RunConfig::from_toml_str("[adjoint]\nbogus = 1\n", Some(Experiment::MassBalance)).is_err());
        assert!(RunConfig::from_toml_str("", None).is_err());
    }
}
