use std::f64::consts::PI;
use std::path::Path;

use polykin_adjoint::{chi_kappa, duality_check, AdjointParams, AngularOp, DualityReport};
use polykin_core::GridSpec;
use polykin_kinetic::{advance, init_state, InitSpec, KineticState};

use crate::report::write_csv;
use crate::{Check, Context, ExperimentReport, Label, Relation, Result, RunConfig};

/// Smooth test function whose wall trace matches the smoothed trapping
/// data: `ψ = e^{−x2}[χ p + (1 − χ) m] + (1 − e^{−x2}) q`.
pub fn duality_test_function(period: f64, kappa: f64) -> impl Fn(f64, f64, f64) -> f64 + Sync {
    move |x1: f64, x2: f64, th: f64| {
        let w = (-x2).exp();
        let c = chi_kappa(-th.abs(), kappa);
        let s = (2.0 * PI * x1 / period).sin();
        let p = 1.0 + 0.3 * s;
        let m = 0.6 + 0.2 * (2.0 * PI * x1 / period).cos();
        let q = 0.5 + 0.2 * th.cos() + 0.1 * s;
        w * (c * p + (1.0 - c) * m) + (1.0 - w) * q
    }
}

/// Forward states at `t = 0, 0.5, 1, …, horizon`.
fn trajectory(grid: GridSpec, init: &InitSpec, horizon: f64) -> Result<Vec<KineticState>> {
    let mut s = init_state(init, grid).context("initial state")?;
    let every = (0.5 / grid.dt).round().max(1.0) as usize;
    let n = (horizon / grid.dt).round() as usize;
    let mut out = vec![s.clone()];
    for i in 1..=n {
        s = advance(&s, grid.dt).context("kinetic step")?;
        if i % every == 0 {
            out.push(s.clone());
        }
    }
    Ok(out)
}

fn level(config: &RunConfig, grid: GridSpec, kappa: f64) -> Result<DualityReport> {
    let traj = trajectory(grid, &config.experiment.initial, config.experiment.horizon)?;
    let psi = duality_test_function(grid.x1_len(), kappa);
    let p = AdjointParams {
        epsilon: config.adjoint.epsilon,
        kappa,
        dt: Some(grid.dt),
        angular: AngularOp::Diffusion,
        ..AdjointParams::default()
    };
    duality_check(&traj, &psi, &p).context("duality check")
}

pub fn duality(config: &RunConfig, dir: &Path) -> Result<ExperimentReport> {
    let mut rep = ExperimentReport::new(config);
    let coarse = level(config, config.grid, config.adjoint.kappa)?;
    let fine = level(config, config.grid.refined(), config.adjoint.refined_kappa)?;
    let ratio = coarse.max_defect / fine.max_defect;
    rep.check(
        Check::new("pairing_defect_reference", Some(4), coarse.max_defect, Relation::AtMost, 0.01, Label::Derived)
            .with_note("reference grid fixed by a refinement study"),
    );
    rep.check(Check::new("pairing_defect_refined", None, fine.max_defect, Relation::AtMost, 0.01, Label::Derived));
    rep.check(Check::new("refinement_ratio", Some(4), ratio, Relation::AtLeast, 1.8, Label::Derived));
    rep.metric("pairing_scale", coarse.scale);
    let path = dir.join("duality.csv");
    let rows = [(0.0, &coarse), (1.0, &fine)].into_iter().flat_map(|(lvl, r)| {
        (0..r.taus.len()).map(move |i| vec![lvl, r.taus[i], r.forward[i], r.backward[i], r.defects[i]])
    });
    write_csv(&path, &["level", "tau", "forward", "backward", "defect"], rows)?;
    rep.artifacts.push(path);
    Ok(rep)
}
