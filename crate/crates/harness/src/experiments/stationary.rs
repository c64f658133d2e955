use std::fs;
use std::path::Path;

use polykin_adjoint::TopBoundary;
use polykin_core::{GridSpec, ReducedField};
use polykin_stationary::{
    check_symmetry, farfield_limit, solve_stationary, supersolution_domination, trapped_mass_prediction, write_csv,
    BoundaryKind, StationaryProblem, StationarySolution,
};

use crate::report::io_err;
use crate::{Check, Context, ExperimentReport, Label, Relation, Result, RunConfig};

fn solve(kind: BoundaryKind, grid: GridSpec, initial: f64, far: Option<TopBoundary>, tol: f64) -> Result<StationarySolution> {
    let mut p = StationaryProblem::new(kind, grid);
    p.initial = initial;
    if let Some(f) = far {
        p.far_field = f;
    }
    solve_stationary(&p, tol).context("stationary solve")
}

fn bound_violation(f: &ReducedField) -> f64 {
    f.values.iter().fold(0.0f64, |m, &v| m.max(-v).max(v - 1.0))
}

fn max_gap(a: &ReducedField, b: &ReducedField) -> f64 {
    a.values.iter().zip(&b.values).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
}

fn save(rep: &mut ExperimentReport, dir: &Path, name: &str, f: &ReducedField) -> Result<()> {
    let path = dir.join(name);
    let file = fs::File::create(&path).map_err(|e| io_err(&path, e))?;
    write_csv(f, std::io::BufWriter::new(file)).map_err(|e| io_err(&path, e))?;
    rep.artifacts.push(path);
    Ok(())
}

pub fn stationary_suite(config: &RunConfig, dir: &Path) -> Result<ExperimentReport> {
    let mut rep = ExperimentReport::new(config);
    let g = config.grid;
    let tol = config.profiles.stationary_tol;

    let plus = solve(BoundaryKind::Plus, g, 0.0, None, tol)?;
    let plus_from_one = solve(BoundaryKind::Plus, g, 1.0, None, tol)?;
    let minus = solve(BoundaryKind::Minus, g, 0.0, None, tol)?;
    let zero = solve(BoundaryKind::Zero, g, 1.0, None, tol)?;

    let bounds = bound_violation(&plus.field).max(bound_violation(&minus.field));
    rep.check(Check::new("bound_violation", Some(6), bounds, Relation::AtMost, 0.0, Label::Paper));
    rep.check(Check::new("symmetry_defect", Some(6), check_symmetry(&plus.field), Relation::AtMost, 0.02, Label::Paper));
    let far = farfield_limit(&plus.field).max(farfield_limit(&minus.field));
    rep.check(Check::new("farfield_defect", Some(6), far, Relation::AtMost, 0.02, Label::Paper));
    let zero_max = zero.field.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    rep.check(Check::new("zero_state_max", Some(6), zero_max, Relation::AtMost, 0.02, Label::Paper));
    rep.check(
        Check::new("uniqueness_gap", Some(6), max_gap(&plus.field, &plus_from_one.field), Relation::AtMost, 2.0 * tol, Label::Paper)
            .with_note("plus state started from 0 and from 1"),
    );
    let residual = plus.residual.max(minus.residual).max(zero.residual);
    rep.check(Check::new("residual_max", None, residual, Relation::AtMost, 10.0 * tol, Label::Trivial));

    let mut reflect = 0.0f64;
    for j in 0..g.n_x2 {
        for k in 0..g.n_theta {
            reflect = reflect.max((minus.field.get(j, k) - plus.field.get(j, g.reflect_theta(k))).abs());
        }
    }
    rep.check(Check::new("reflection_defect", None, reflect, Relation::AtMost, 1e-6, Label::Trivial));

    let s = &config.profiles.supersolution;
    let dom = supersolution_domination(&zero.field, s, Some(s.eta / 2.0)).context("supersolution")?;
    rep.check(
        Check::new("supersolution_violation", None, dom.max_violation, Relation::AtMost, 1e-6, Label::Paper)
            .with_note(format!("{} nodes above x2 = η/2", dom.nodes_checked)),
    );

    // Far-field defect with a reflecting top as the domain grows.
    let mut trend = Vec::new();
    for f in [4usize, 2, 1] {
        let n = g.n_x2 / f;
        let gf = GridSpec::new((g.x1_min, g.x1_max, g.n_x1), (g.x2_max / f as f64, n), g.n_theta, g.dt)
            .context("trend grid")?;
        let s = solve(BoundaryKind::Plus, gf, 0.0, Some(TopBoundary::Neumann), tol)?;
        trend.push((gf.x2_max, farfield_limit(&s.field)));
    }
    let worst = trend.windows(2).map(|w| w[1].1 - w[0].1).fold(f64::NEG_INFINITY, f64::max);
    rep.check(Check::new("neumann_farfield_increase_max", None, worst, Relation::Below, 0.0, Label::Derived));
    for (l, d) in &trend {
        rep.metric(&format!("neumann_farfield_defect_L{l}"), *d);
    }

    // Trapped-mass split for mass starting far from the wall.
    let area = g.reduced_cell_area();
    let mut top = ReducedField::zeros(g);
    for k in 0..g.n_theta {
        top.set(g.n_x2 - 1, k, 1.0 / (g.n_theta as f64 * area));
    }
    let (p, m) = trapped_mass_prediction(&top, &plus.field, &minus.field).context("trapped mass")?;
    rep.metric("far_mass_to_plus", p);
    rep.metric("far_mass_to_minus", m);
    rep.metric("steps_plus", plus.steps as f64);
    rep.metric("pseudo_time_plus", plus.pseudo_time);
    rep.metric("tail_plus", plus.tail);

    save(&mut rep, dir, "psi_plus.csv", &plus.field)?;
    save(&mut rep, dir, "psi_minus.csv", &minus.field)?;
    save(&mut rep, dir, "psi_zero.csv", &zero.field)?;
    Ok(rep)
}
