use std::path::Path;

use polykin_kinetic::{advance, init_state, KineticState};

use crate::report::write_csv;
use crate::{Check, Context, ExperimentReport, Label, Relation, Result, RunConfig};

/// Absolute rounding allowance on a step-to-step increase of interior mass.
pub(crate) const MONOTONE_SLACK: f64 = 1e-13;

pub(crate) struct Series {
    /// `(t, interior, plus, minus, escaped, total)` per step, including `t = 0`.
    pub rows: Vec<[f64; 6]>,
    pub max_drift: f64,
    pub max_increase: f64,
    pub min_density: f64,
}

/// Run the kinetic solver to `horizon`, calling `at` after every step.
pub(crate) fn run_kinetic(config: &RunConfig, mut at: impl FnMut(&KineticState)) -> Result<(KineticState, Series)> {
    let g = config.grid;
    let mut s = init_state(&config.experiment.initial, g).context("initial state")?;
    let m0 = s.ledger.total;
    let row = |s: &KineticState| {
        let l = s.ledger;
        [s.time, l.interior, l.trapped_plus, l.trapped_minus, l.escaped_top, l.total]
    };
    let mut series = Series {
        rows: vec![row(&s)],
        max_drift: 0.0,
        max_increase: f64::NEG_INFINITY,
        min_density: s.f.min_value(),
    };
    let n = (config.experiment.horizon / g.dt).round() as usize;
    for _ in 0..n {
        let next = advance(&s, g.dt).context("kinetic step")?;
        series.max_increase = series.max_increase.max(next.ledger.interior - s.ledger.interior);
        series.max_drift = series.max_drift.max((next.ledger.total - m0).abs());
        series.min_density = series.min_density.min(next.f.min_value()).min(next.boundary.min_value());
        s = next;
        series.rows.push(row(&s));
        at(&s);
    }
    Ok((s, series))
}

fn write_series(dir: &Path, series: &Series, rep: &mut ExperimentReport) -> Result<()> {
    let path = dir.join("mass_series.csv");
    write_csv(
        &path,
        &["t", "interior", "trapped_plus", "trapped_minus", "escaped_top", "total"],
        series.rows.iter().map(|r| r.to_vec()),
    )?;
    rep.artifacts.push(path);
    Ok(())
}

pub fn mass_balance(config: &RunConfig, dir: &Path) -> Result<ExperimentReport> {
    let mut rep = ExperimentReport::new(config);
    let (last, series) = run_kinetic(config, |_| {})?;
    rep.check(Check::new("mass_drift_max", Some(1), series.max_drift, Relation::AtMost, 1e-6, Label::Paper));
    rep.check(Check::new(
        "interior_mass_increase_max",
        None,
        series.max_increase,
        Relation::AtMost,
        MONOTONE_SLACK,
        Label::Paper,
    ));
    rep.metric("min_density", series.min_density);
    rep.metric("interior_final", last.ledger.interior);
    rep.metric("trapped_plus_final", last.ledger.trapped_plus);
    rep.metric("trapped_minus_final", last.ledger.trapped_minus);
    rep.metric("escaped_final", last.ledger.escaped_top);
    write_series(dir, &series, &mut rep)?;
    Ok(rep)
}

pub fn long_chain(config: &RunConfig, dir: &Path) -> Result<ExperimentReport> {
    let mut rep = ExperimentReport::new(config);
    let g = config.grid;
    let horizon = config.experiment.horizon;
    let lag = config.experiment.translation_lag;
    let t1 = horizon - lag;
    let mut early = None;
    let (last, series) = run_kinetic(config, |s| {
        if early.is_none() && s.time >= t1 - 0.5 * g.dt {
            early = Some((s.time, s.boundary.clone()));
        }
    })?;
    let (te, early) = early.expect("t1 lies inside the run");
    let mut shifted = early.clone();
    shifted.translate(last.time - te);
    let (a, b) = (shifted.plus_on_grid(), last.boundary.plus_on_grid());
    let defect = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).sum::<f64>() * g.dx1();
    let m0 = series.rows[0][5];
    let interior_fraction = last.ledger.interior / m0;

    rep.check(Check::new(
        "interior_mass_increase_max",
        Some(2),
        series.max_increase,
        Relation::AtMost,
        MONOTONE_SLACK,
        Label::Paper,
    ));
    rep.check(
        Check::new("interior_fraction_at_horizon", Some(2), interior_fraction, Relation::Below, 0.1, Label::Derived)
            .with_note(format!("horizon {horizon} fixed by a pilot run")),
    );
    rep.check(Check::new("rho_plus_translation_defect", Some(10), defect, Relation::AtMost, 0.05, Label::Paper));
    rep.check(Check::new("mass_drift_max", None, series.max_drift, Relation::AtMost, 1e-6, Label::Paper));
    rep.metric("rho_plus_mass", last.ledger.trapped_plus);
    rep.metric("rho_minus_mass", last.ledger.trapped_minus);
    rep.metric("escaped", last.ledger.escaped_top);
    rep.metric("translation_defect_relative", defect / last.ledger.trapped_plus.max(f64::MIN_POSITIVE));
    write_series(dir, &series, &mut rep)?;
    let path = dir.join("rho_plus.csv");
    let e = early.plus_on_grid();
    write_csv(
        &path,
        &["x1", "rho_plus_t1", "rho_plus_t1_translated", "rho_plus_t2"],
        (0..g.n_x1).map(|i| vec![g.x1(i), e[i], a[i], b[i]]),
    )?;
    rep.artifacts.push(path);
    Ok(rep)
}
