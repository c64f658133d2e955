use std::f64::consts::{FRAC_PI_2, PI};

use polykin_chain::*;
use polykin_core::{GridSpec, PhasePoint};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / (2 * n) as f64;
    let mut s = f(a) + f(b);
    for i in 1..2 * n {
        s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

/// `Var[Δθ]` of the Gibbs density by quadrature on `[−π, π]`.
fn variance_oracle(eps: f64) -> f64 {
    let w = |p: f64| ((p.cos() - 1.0) / eps).exp();
    simpson(|p| p * p * w(p), -PI, PI, 200_000) / simpson(w, -PI, PI, 200_000)
}

fn moments(eps: f64, n: usize, seed: u64) -> (f64, f64) {
    let t = GibbsTable::new(eps).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut s1, mut s2) = (0.0, 0.0);
    for _ in 0..n {
        let x = t.sample(&mut rng);
        s1 += x;
        s2 += x * x;
    }
    let m = s1 / n as f64;
    (m, s2 / n as f64 - m * m)
}

#[test]
fn gibbs_increment_moments() {
    let n = 1_000_000;
    let (mean, var) = moments(0.01, n, 1);
    assert!(mean.abs() <= 3.0 * (var / n as f64).sqrt(), "mean {mean}");
    let oracle = variance_oracle(0.01);
    assert!((oracle - 0.01).abs() < 0.05 * 0.01, "oracle {oracle}");
    assert!((var - oracle).abs() < 0.01 * oracle, "{var} vs {oracle}");
    assert!((var - 0.01).abs() < 0.05 * 0.01);

    let (_, var) = moments(100.0, 200_000, 2);
    let oracle = variance_oracle(100.0);
    assert!((oracle - PI * PI / 3.0).abs() < 0.02 * PI * PI / 3.0, "oracle {oracle}");
    assert!((var - PI * PI / 3.0).abs() < 0.02 * PI * PI / 3.0, "{var}");

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let d = gibbs_angle_increment(0.01, &mut rng).unwrap();
    assert!(d.abs() <= PI);
}

#[test]
fn diffusion_estimate_is_one_half() {
    let oracle = variance_oracle(1e-3) / 2e-3;
    assert!((oracle - 0.5).abs() < 0.025, "oracle {oracle}");
    let e = estimate_diffusion(1e-3, 400_000, 7).unwrap();
    assert!((e.d_eff - 0.5).abs() < 0.025, "{e:?}");
    let ds: Vec<f64> = [1e-2, 1e-3, 1e-4].iter().map(|&eps| estimate_diffusion(eps, 400_000, 8).unwrap().d_eff).collect();
    let (lo, hi) = ds.iter().fold((f64::INFINITY, 0.0f64), |(a, b), d| (a.min(*d), b.max(*d)));
    assert!(hi / lo < 1.1, "{ds:?}");

    let a = estimate_diffusion(1e-3, 100_000, 9).unwrap();
    let b = estimate_diffusion(1e-3, 200_000, 10).unwrap();
    let ratio = (a.std_error / b.std_error).powi(2);
    assert!((ratio - 2.0).abs() < 0.3, "variance ratio {ratio}");
}

#[test]
fn boundary_rule_examples_through_chain_step() {
    let table = GibbsTable::new(1e-4).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..100 {
        let s = ChainState::new(PhasePoint::new(0.0, 0.0, -FRAC_PI_2 - 0.1).unwrap());
        let n = chain_step(&s, &table, &mut rng);
        assert_eq!(n.theta, -PI);
        assert_eq!(n.trapped, Some(TrapSide::Minus));
        let s = ChainState::new(PhasePoint::new(0.0, 0.0, -0.3).unwrap());
        let n = chain_step(&s, &table, &mut rng);
        assert_eq!(n.theta, 0.0);
        assert_eq!(n.x2, 0.0);
    }
}

#[test]
fn mirrored_increments_mirror_the_path() {
    let table = GibbsTable::new(0.01).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let start = ChainState::new(PhasePoint::new(0.0, 50.0, 0.2).unwrap());
    let mirror_start = ChainState::new(PhasePoint::new(0.0, 50.0, -0.2).unwrap());
    let (mut a, mut b) = (start, mirror_start);
    for _ in 0..500 {
        let d = table.sample(&mut rng);
        a = chain_step_with(&a, 0.01, d);
        b = chain_step_with(&b, 0.01, -d);
        assert!((a.theta + b.theta).abs() < 1e-12 || (a.theta.abs() - PI).abs() < 1e-9);
        assert!((a.x1 - b.x1).abs() < 1e-12);
        assert!(((a.x2 - 50.0) + (b.x2 - 50.0)).abs() < 1e-12);
    }
}

#[test]
fn mean_square_angle_grows_linearly() {
    let eps = 1e-3;
    let table = GibbsTable::new(eps).unwrap();
    let d = estimate_diffusion(eps, 200_000, 11).unwrap().d_eff;
    let ks = [100usize, 200, 300, 400];
    let mut msd = vec![0.0; ks.len()];
    let n_chains = 4000;
    for c in 0..n_chains {
        let mut rng = chain_rng(12, c);
        let mut s = ChainState::new(PhasePoint::new(0.0, 100.0, 0.0).unwrap());
        let mut unwrapped = 0.0;
        let mut next = 0;
        for step in 1..=*ks.last().unwrap() {
            let prev = s.theta;
            s = chain_step(&s, &table, &mut rng);
            let mut dt = s.theta - prev;
            if dt > PI {
                dt -= 2.0 * PI;
            } else if dt < -PI {
                dt += 2.0 * PI;
            }
            unwrapped += dt;
            if step == ks[next] {
                msd[next] += unwrapped * unwrapped / n_chains as f64;
                next += 1;
            }
        }
    }
    // slope through the origin against t = kε
    let ts: Vec<f64> = ks.iter().map(|k| *k as f64 * eps).collect();
    let slope = ts.iter().zip(&msd).map(|(t, m)| t * m).sum::<f64>() / ts.iter().map(|t| t * t).sum::<f64>();
    assert!((slope / (2.0 * d) - 1.0).abs() < 0.1, "slope {slope} vs 2D = {}", 2.0 * d);
}

fn params(eps: f64, n: usize, seed: u64) -> ChainParams {
    ChainParams {
        epsilon: eps,
        n_steps: n,
        x0: PhasePoint::new(0.0, 1.0, -FRAC_PI_2).unwrap(),
        seed,
    }
}

#[test]
fn ensembles_are_reproducible_and_schedule_independent() {
    let p0 = params(0.01, 0, 1);
    let e = simulate_ensemble(&p0, 1).unwrap();
    assert_eq!(e.chains[0], ChainState::new(p0.x0));

    let p = params(0.01, 300, 42);
    let a = simulate_ensemble(&p, 500).unwrap();
    let b = simulate_ensemble(&p, 500).unwrap();
    assert_eq!(a, b);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
    let c = pool.install(|| simulate_ensemble(&p, 500).unwrap());
    assert_eq!(a.chains, c.chains);
    assert!(a.chains.iter().all(|c| c.x2 >= 0.0));
    assert!(matches!(simulate_ensemble(&p, 0), Err(ChainError::EmptyEnsemble)));

    let mut csv = Vec::new();
    a.write_csv(&mut csv).unwrap();
    let text = String::from_utf8(csv).unwrap();
    assert_eq!(text.lines().count(), 501);
    assert!(text.starts_with("chain_id,x1,x2,theta,trapped_flag"));
}

#[test]
fn near_wall_fraction_grows_with_length() {
    let frac = |n: usize| {
        let e = simulate_ensemble(&params(1e-3, n, 77), 100_000).unwrap();
        e.chains.iter().filter(|c| c.x2 < 0.1).count() as f64 / 1e5
    };
    let (a, b) = (frac(500), frac(1000));
    assert!(a >= 0.0 && b > 0.0 && b > a, "{a} {b}");
}

#[test]
fn empirical_field_classes() {
    let grid = GridSpec::new((-2.0, 2.0, 8), (2.0, 8), 16, 0.1).unwrap();
    let bands = TrapBands::for_epsilon(1e-2);
    let right: Vec<ChainState> = (0..100)
        .map(|i| ChainState { x1: -1.9 + 0.038 * i as f64, x2: 0.0, theta: 0.0, trapped: Some(TrapSide::Plus) })
        .collect();
    let e = empirical_fields(&right, grid, bands).unwrap();
    assert!(e.f.values.iter().all(|v| *v == 0.0));
    assert!((e.boundary.mass_plus() - 1.0).abs() < 1e-12);
    assert_eq!(e.boundary.mass_minus(), 0.0);

    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let far: Vec<ChainState> = (0..1000)
        .map(|_| {
            use rand::Rng;
            ChainState { x1: rng.gen_range(-5.0..5.0), x2: rng.gen_range(0.5..2.5), theta: rng.gen_range(-PI..PI), trapped: None }
        })
        .collect();
    let e = empirical_fields(&far, grid, bands).unwrap();
    assert_eq!(e.boundary.mass_plus() + e.boundary.mass_minus(), 0.0);
    assert_eq!(e.counts.total(), far.len());
    let vol = grid.cell_volume();
    let interior: f64 = e.f.values.iter().sum::<f64>() * vol;
    assert!((interior + e.escaped - 1.0).abs() < 1e-12);
    assert!(e.escaped > 0.0);
    assert!(empirical_fields(&[], grid, bands).is_err());

    let r = empirical_reduced(&far, grid, bands).unwrap();
    let m: f64 = r.rho1.values.iter().sum::<f64>() * grid.reduced_cell_area();
    assert!((m - interior).abs() < 1e-12);
}

#[test]
fn initial_sampler_reproduces_cell_masses() {
    use polykin_core::{BoundaryDensityPair, PhaseField};
    let grid = GridSpec::new((-2.0, 2.0, 4), (2.0, 4), 8, 0.1).unwrap();
    let mut f = PhaseField::zeros(grid);
    f.set(1, 2, 3, 1.0);
    f.set(3, 0, 6, 3.0);
    let mut b = BoundaryDensityPair::zeros(grid);
    b.deposit_plus(0, 4.0 * grid.cell_volume());
    let s = InitialSampler::new(&f, &b).unwrap();
    let states = s.sample_many(80_000, 3).unwrap();
    let bands = TrapBands { x2: 1e-9, theta: 1e-9 };
    let e = empirical_fields(&states, grid, bands).unwrap();
    let vol = grid.cell_volume();
    let expect = [(grid.idx(1, 2, 3), 0.125), (grid.idx(3, 0, 6), 0.375)];
    for (i, m) in expect {
        assert!((e.f.values[i] * vol - m).abs() < 0.01, "{} vs {m}", e.f.values[i] * vol);
    }
    assert!((e.boundary.mass_plus() - 0.5).abs() < 0.01);
}
