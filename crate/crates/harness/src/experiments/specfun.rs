use std::f64::consts::PI;
use std::path::Path;

use polykin_specfun::{
    f0_selfsim_partials, fstar0_residual, kummer_m, lambda_derivs, stationary_supersol_residual, tricomi_u,
    SupersolutionParams,
};

use crate::oracles::{laplace_u, rel, series_m, M_AB, M_Z, U_AB, U_Z};
use crate::report::write_csv;
use crate::{Check, Context, ExperimentReport, Label, Relation, Result, RunConfig};

pub fn specfun_suite(config: &RunConfig, dir: &Path) -> Result<ExperimentReport> {
    let mut rep = ExperimentReport::new(config);
    let p = &config.profiles.holder;

    let mut rows = Vec::new();
    let mut m_err = 0.0f64;
    for &(a, b) in &M_AB {
        for &z in &M_Z {
            let e = rel(kummer_m(a, b, z).context("kummer_m")?, series_m(a, b, z));
            m_err = m_err.max(e);
            rows.push(vec![0.0, a, b, z, e]);
        }
    }
    let mut u_err = 0.0f64;
    for &(a, b) in &U_AB {
        for &z in &U_Z {
            let e = rel(tricomi_u(a, b, z).context("tricomi_u")?, laplace_u(a, b, z));
            u_err = u_err.max(e);
            rows.push(vec![1.0, a, b, z, e]);
        }
    }
    rep.check(Check::new("kummer_m_rel_error", Some(5), m_err, Relation::AtMost, 1e-8, Label::Paper).with_note("series oracle, 50 points"));
    rep.check(Check::new("tricomi_u_rel_error", Some(5), u_err, Relation::AtMost, 1e-8, Label::Paper).with_note("Laplace oracle, 50 points"));
    let path = dir.join("hypergeometric_errors.csv");
    write_csv(&path, &["function", "a", "b", "z", "rel_error"], rows)?;
    rep.artifacts.push(path);

    let mut lam = 0.0f64;
    for i in 0..=400 {
        let z = -10.0 + 20.0 * i as f64 / 400.0;
        let l = lambda_derivs(z, p).context("lambda profile")?;
        let r = l[2] + 3.0 * z * z * l[1] - 9.0 * p.alpha * z * l[0];
        lam = lam.max(r.abs() / (1.0 + l[0].abs() + l[1].abs() + l[2].abs()));
    }
    rep.check(Check::new("lambda_ode_residual", Some(5), lam, Relation::AtMost, 1e-6, Label::Paper));

    let mut steady = 0.0f64;
    for &x2 in &[1e-4, 1e-3, 0.02, 0.5, 2.0] {
        for &th in &[-0.7, -0.3, -0.02, 0.0, 0.02, 0.1, 0.7] {
            let (r, scale) = fstar0_residual(x2, th, p).context("fstar0")?;
            steady = steady.max(r.abs() / scale);
        }
    }
    rep.check(Check::new("fstar0_residual", Some(5), steady, Relation::AtMost, 1e-8, Label::Paper));

    let (mut closed, mut sign) = (0.0f64, f64::NEG_INFINITY);
    for l in [0.01, 0.05, 0.1, 0.2] {
        let s = SupersolutionParams::new(l, 0.05, 0.5, 0.2).context("supersolution")?;
        for i in 0..200 {
            let th = -PI + 2.0 * PI * i as f64 / 200.0;
            for x2 in [0.0, 0.5, 1.0, 10.0] {
                let r = stationary_supersol_residual(x2, th, &s);
                let c = (-l * x2).exp() * (-l * l / 2.0 - l.powi(3) / 8.0 * th.sin() * (2.0 * th).cos());
                closed = closed.max((r - c).abs());
                sign = sign.max(r);
            }
        }
    }
    rep.check(Check::new("supersolution_closed_form_gap", Some(5), closed, Relation::AtMost, 0.0, Label::Paper));
    rep.check(Check::new("supersolution_residual_max", Some(5), sign, Relation::AtMost, 0.0, Label::Paper));

    let (mut heat, mut euler) = (0.0f64, 0.0f64);
    for &y in &[1e-3, 0.05, 0.5, 2.0] {
        for &z in &[-1.5, -0.3, 0.0, 0.4, 1.2] {
            let d = f0_selfsim_partials(y, z, p).context("self-similar profile")?;
            let s1 = d.f_zz.abs() + (z * d.f_y).abs() + d.f.abs();
            heat = heat.max((d.f_zz - z * d.f_y).abs() / s1);
            let s2 = (z * d.f_z).abs() + (y * d.f_y).abs() + d.f.abs();
            euler = euler.max((0.5 * z * d.f_z + 1.5 * y * d.f_y - 1.5 * p.alpha * d.f).abs() / s2);
        }
    }
    rep.check(Check::new("f0_heat_identity", Some(5), heat, Relation::AtMost, 1e-6, Label::Paper));
    rep.check(Check::new("f0_scaling_identity", Some(5), euler, Relation::AtMost, 1e-6, Label::Paper));
    Ok(rep)
}
