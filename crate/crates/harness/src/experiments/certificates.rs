use std::fs;
use std::path::Path;

use polykin_adjoint::{
    data_norms, resolvent, solve_adjoint_full, solve_adjoint_reduced, write_json_lines, AdjointParams, Certificate,
    SmoothData,
};
use polykin_core::GridSpec;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::report::{io_err, write_csv};
use crate::{Check, Context, ExperimentReport, Label, Relation, Result, RunConfig};

const ROUNDOFF: f64 = 1e-8;

pub fn adjoint_certificates(config: &RunConfig, dir: &Path) -> Result<ExperimentReport> {
    let mut rep = ExperimentReport::new(config);
    let g = config.grid;
    let a = &config.adjoint;
    let horizon = config.experiment.horizon;
    let mut rng = ChaCha8Rng::seed_from_u64(config.experiment.seed);
    let p = AdjointParams { epsilon: a.epsilon, kappa: a.kappa, ..AdjointParams::default() };

    let mut certs = Vec::new();
    let mut rows = Vec::new();
    let (mut reduced_bad, mut full_bad) = (0usize, 0usize);
    let (mut reduced_ratio, mut full_ratio) = (0.0f64, 0.0f64);
    for s in 0..a.n_samples {
        let data = SmoothData::sample(&mut rng, 1.0, false);
        let (gn, _) = data_norms(&data, &g);
        let run = solve_adjoint_reduced(|x2, th| data.reduced(x2, th), g, &p, horizon, &[]).context("reduced adjoint")?;
        let c = Certificate::upper(format!("reduced[{s}]: sup|psi| <= 2|g|"), run.sup_norm, 2.0 * gn + ROUNDOFF);
        reduced_bad += usize::from(!c.pass);
        reduced_ratio = reduced_ratio.max(run.sup_norm / gn.max(f64::MIN_POSITIVE));
        certs.push(c);

        let data = SmoothData::sample(&mut rng, g.x1_len(), true);
        let (gn_full, dg) = data_norms(&data, &g);
        let run_full = solve_adjoint_full(&data, g, &p, a.full_horizon, &[]).context("full adjoint")?;
        let bound = 3.0 * gn_full + 2.0 * p.kappa * dg;
        let c = Certificate::upper(
            format!("full[{s}]: sup|psi| <= 3|g| + 2 kappa |d1 g|"),
            run_full.sup_norm,
            bound + ROUNDOFF,
        );
        full_bad += usize::from(!c.pass);
        full_ratio = full_ratio.max(run_full.sup_norm / bound.max(f64::MIN_POSITIVE));
        certs.push(c);
        rows.push(vec![s as f64, gn, run.sup_norm, gn_full, dg, run_full.sup_norm]);
    }
    rep.check(
        Check::new("reduced_max_principle_violations", Some(3), reduced_bad as f64, Relation::AtMost, 0.0, Label::Paper)
            .with_note(format!("{} random data", a.n_samples)),
    );
    rep.check(
        Check::new("full_max_principle_violations", Some(3), full_bad as f64, Relation::AtMost, 0.0, Label::Paper)
            .with_note(format!("{} random data", a.n_samples)),
    );
    rep.metric("reduced_sup_over_g_max", reduced_ratio);
    rep.metric("full_sup_over_bound_max", full_ratio);

    // Resolvent on a 64×64 reduced grid.
    let rg = GridSpec::new((g.x1_min, g.x1_max, g.n_x1), (4.0, 64), 64, 0.01).context("resolvent grid")?;
    let data = SmoothData::sample(&mut rng, 1.0, false);
    let r = resolvent(|x2, th| data.reduced(x2, th), rg, &p, a.lambda, None).context("resolvent")?;
    let c = Certificate::upper("resolvent residual <= 1e-3 |g|", r.residual, 1e-3 * r.g_norm);
    rep.check(Check::new("resolvent_relative_residual", None, r.residual / r.g_norm, Relation::AtMost, 1e-3, Label::Derived));
    certs.push(c);

    let path = dir.join("certificates.jsonl");
    let file = fs::File::create(&path).map_err(|e| io_err(&path, e))?;
    write_json_lines(std::io::BufWriter::new(file), &certs).map_err(|e| io_err(&path, e))?;
    rep.artifacts.push(path);
    let path = dir.join("max_principle.csv");
    write_csv(&path, &["sample", "g_reduced", "sup_reduced", "g_full", "d1_g_full", "sup_full"], rows)?;
    rep.artifacts.push(path);
    Ok(rep)
}
