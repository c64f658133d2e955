use std::path::Path;

use polykin_chain::{
    empirical_reduced, estimate_diffusion, fit_exponent, simulate_from, wall_deviation, ChainParams, ChainState,
    InitialSampler, TrapBands, TrapSide,
};
use polykin_core::{GridSpec, PhasePoint, ReducedField};
use polykin_kinetic::{advance_reduced, init_state, ReducedState};

use crate::report::write_csv;
use crate::{Check, Context, ExperimentReport, HarnessError, Label, Relation, Result, RunConfig};

/// L1 distance after summing both fields over `(rows, θ nodes)` blocks.
pub fn block_l1(a: &ReducedField, b: &ReducedField, block: (usize, usize)) -> f64 {
    let g = a.grid;
    let area = g.reduced_cell_area();
    let mut s = 0.0;
    for j0 in (0..g.n_x2).step_by(block.0) {
        for k0 in (0..g.n_theta).step_by(block.1) {
            let mut d = 0.0;
            for j in j0..(j0 + block.0).min(g.n_x2) {
                for k in k0..(k0 + block.1).min(g.n_theta) {
                    d += a.get(j, k) - b.get(j, k);
                }
            }
            s += d.abs() * area;
        }
    }
    s
}

/// Chain histogram with trapping decided by wall contact: a chain whose
/// last clamp was on the `+` (`−`) side counts towards ρ+ (ρ−). Returns the
/// reduced density and `(plus, minus, escaped)` masses.
pub fn flagged_reduced(chains: &[ChainState], grid: GridSpec) -> (ReducedField, [f64; 3]) {
    let w = 1.0 / chains.len() as f64;
    let mut f = ReducedField::zeros(grid);
    let mut m = [0.0; 3];
    let cell = w / grid.reduced_cell_area();
    for c in chains {
        match c.trapped {
            Some(TrapSide::Plus) => m[0] += w,
            Some(TrapSide::Minus) => m[1] += w,
            None if c.x2 >= grid.x2_max => m[2] += w,
            None => {
                let j = ((c.x2 / grid.dx2()) as usize).min(grid.n_x2 - 1);
                let i = grid.ridx(j, grid.nearest_theta(c.theta));
                f.values[i] += cell;
            }
        }
    }
    (f, m)
}

/// `Σ_blocks sd(p̂)·area⁻¹…`: the summed binomial standard deviation of the
/// block masses, an upper estimate of the mean sampling part of the distance.
fn sampling_error(f: &ReducedField, masses: [f64; 3], block: (usize, usize), n: usize) -> f64 {
    let g = f.grid;
    let area = g.reduced_cell_area();
    let n = n as f64;
    let sd = |p: f64| (p * (1.0 - p) / n).max(0.0).sqrt();
    let mut s: f64 = masses.iter().map(|&p| sd(p)).sum();
    for j0 in (0..g.n_x2).step_by(block.0) {
        for k0 in (0..g.n_theta).step_by(block.1) {
            let mut p = 0.0;
            for j in j0..(j0 + block.0).min(g.n_x2) {
                for k in k0..(k0 + block.1).min(g.n_theta) {
                    p += f.get(j, k) * area;
                }
            }
            s += sd(p);
        }
    }
    s
}

pub(crate) struct Level {
    pub epsilon: f64,
    pub n_chains: usize,
    pub d_eff: f64,
    pub distance: f64,
    pub distance_t0: f64,
    pub band_distance: f64,
    pub sampling_error: f64,
    pub mc: [f64; 3],
    pub pde: [f64; 3],
    pub fields: Option<(ReducedField, ReducedField)>,
}

fn level(config: &RunConfig, epsilon: f64, n_chains: usize, seed: u64, keep: bool) -> Result<Level> {
    let chain = config.chain.as_ref().expect("validated");
    let d = estimate_diffusion(epsilon, chain.diffusion_samples, seed ^ 0x5eed).context("diffusion estimate")?;
    let grid = config.grid.with_diffusion(d.d_eff).context("grid")?;
    let horizon = config.experiment.horizon;
    let s0 = init_state(&config.experiment.initial, grid).context("initial state")?;
    let sampler = InitialSampler::new(&s0.f, &s0.boundary).context("initial sampler")?;
    let initial = sampler.sample_many(n_chains, seed).context("initial sample")?;

    let mut pde = ReducedState::from_full(&s0);
    let (f0, m0) = flagged_reduced(&initial, grid);
    let distance_t0 = block_l1(&f0, &pde.rho1, chain.block)
        + (m0[0] - pde.trapped_plus).abs()
        + (m0[1] - pde.trapped_minus).abs()
        + (m0[2] - pde.escaped_top).abs();
    let n_steps = (horizon / grid.dt).round() as usize;
    for _ in 0..n_steps {
        pde = advance_reduced(&pde, grid.dt).context("reduced step")?;
    }
    let x0 = PhasePoint::new(0.0, 1.0, 0.0).context("start point")?;
    let params = ChainParams::for_length(epsilon, horizon, x0, seed.wrapping_add(1)).context("chain parameters")?;
    let ens = simulate_from(&initial, &params).context("chain ensemble")?;
    let (f, m) = flagged_reduced(&ens.chains, grid);
    let pde_m = [pde.trapped_plus, pde.trapped_minus, pde.escaped_top];
    let distance = block_l1(&f, &pde.rho1, chain.block) + m.iter().zip(&pde_m).map(|(a, b)| (a - b).abs()).sum::<f64>();
    let band = empirical_reduced(&ens.chains, grid, TrapBands::for_epsilon(epsilon)).context("band histogram")?;
    let band_distance = block_l1(&band.rho1, &pde.rho1, chain.block)
        + (band.trapped_plus - pde_m[0]).abs()
        + (band.trapped_minus - pde_m[1]).abs()
        + (band.escaped - pde_m[2]).abs();
    Ok(Level {
        epsilon,
        n_chains,
        d_eff: d.d_eff,
        distance,
        distance_t0,
        band_distance,
        sampling_error: sampling_error(&f, m, chain.block, n_chains),
        mc: m,
        pde: pde_m,
        fields: keep.then(|| (f, pde.rho1.clone())),
    })
}

pub fn mc_vs_pde(config: &RunConfig, dir: &Path) -> Result<ExperimentReport> {
    let mut rep = ExperimentReport::new(config);
    let chain = config.chain.as_ref().ok_or_else(|| HarnessError::Runtime {
        context: "mc_vs_pde".into(),
        message: "missing [chain] section".into(),
    })?;
    let seed = config.experiment.seed;
    let mut levels = Vec::new();
    for (i, &(e, n)) in chain.trend.iter().enumerate() {
        levels.push(level(config, e, n, seed.wrapping_add(17 * (i as u64 + 1)), false)?);
    }
    let reference = level(config, chain.epsilon, chain.n_chains, seed, true)?;
    levels.push(reference);
    let r = levels.last().expect("reference level");

    rep.check(
        Check::new("l1_distance_reference", Some(7), r.distance, Relation::AtMost, 0.05, Label::Derived)
            .with_note("trapping by wall contact; pilot distance 0.0136"),
    );
    rep.check(Check::new("l1_distance_t0", None, r.distance_t0, Relation::AtMost, 0.01, Label::Trivial));
    rep.check(
        Check::new("sampling_error_reference", Some(7), r.sampling_error, Relation::Below, 0.05, Label::Derived)
            .with_note("summed binomial standard deviation of the compared masses"),
    );
    let worst_step = levels.windows(2).map(|w| w[1].distance - w[0].distance).fold(f64::NEG_INFINITY, f64::max);
    if levels.len() >= 2 {
        rep.check(
            Check::new("trend_distance_increase_max", Some(7), worst_step, Relation::AtMost, 0.0, Label::Derived)
                .with_note("ε halved with 4× chains at each level"),
        );
    }
    rep.metric("band_distance_reference", r.band_distance);
    rep.metric("d_eff_reference", r.d_eff);

    // Wall deviation after trapping, over the ε sweep.
    let mut dev = Vec::new();
    for (i, &e) in chain.deviation_epsilons.iter().enumerate() {
        dev.push(
            wall_deviation(e, chain.deviation_chains, chain.deviation_window, seed.wrapping_add(1000 + i as u64))
                .context("wall deviation")?,
        );
    }
    let eps: Vec<f64> = dev.iter().map(|d| d.epsilon).collect();
    let means: Vec<f64> = dev.iter().map(|d| d.mean_max_x2).collect();
    let medians: Vec<f64> = dev.iter().map(|d| d.median_max_x2).collect();
    let exponent = fit_exponent(&eps, &means).unwrap_or(f64::NAN);
    rep.check(
        Check::new("deviation_exponent_error", Some(8), (exponent - 0.5).abs(), Relation::AtMost, 0.15, Label::Paper)
            .with_note(format!("fitted exponent {exponent:.4} of the mean maximal wall distance")),
    );
    rep.metric("deviation_exponent_mean", exponent);
    rep.metric("deviation_exponent_median", fit_exponent(&eps, &medians).unwrap_or(f64::NAN));

    let path = dir.join("mc_levels.csv");
    write_csv(
        &path,
        &[
            "epsilon", "n_chains", "d_eff", "distance", "distance_t0", "band_distance", "sampling_error", "mc_plus",
            "mc_minus", "mc_escaped", "pde_plus", "pde_minus", "pde_escaped",
        ],
        levels.iter().map(|l| {
            vec![
                l.epsilon,
                l.n_chains as f64,
                l.d_eff,
                l.distance,
                l.distance_t0,
                l.band_distance,
                l.sampling_error,
                l.mc[0],
                l.mc[1],
                l.mc[2],
                l.pde[0],
                l.pde[1],
                l.pde[2],
            ]
        }),
    )?;
    rep.artifacts.push(path);
    if let Some((mc, pde)) = &r.fields {
        let g = mc.grid;
        let path = dir.join("reduced_fields.csv");
        write_csv(
            &path,
            &["x2", "theta", "mc", "pde"],
            (0..g.n_x2).flat_map(|j| (0..g.n_theta).map(move |k| (j, k))).map(|(j, k)| {
                vec![g.x2(j), g.theta(k), mc.get(j, k), pde.get(j, k)]
            }),
        )?;
        rep.artifacts.push(path);
    }
    let path = dir.join("deviation.csv");
    write_csv(
        &path,
        &["epsilon", "n_chains", "window", "mean_max_x2", "median_max_x2", "std_error"],
        dev.iter().map(|d| vec![d.epsilon, d.n_chains as f64, d.window, d.mean_max_x2, d.median_max_x2, d.std_error]),
    )?;
    rep.artifacts.push(path);
    Ok(rep)
}
