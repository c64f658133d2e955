use std::f64::consts::PI;
use std::io::Write;

use polykin_core::{BoundaryDensityPair, GridSpec, PhaseField};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::gibbs::GibbsTable;
use crate::step::{chain_step, ChainParams, ChainState, TrapSide};
use crate::{ChainError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ChainEnsemble {
    pub chains: Vec<ChainState>,
    pub params: ChainParams,
    pub master_seed: u64,
}

/// RNG stream of chain `index`; independent of scheduling.
pub fn chain_rng(master_seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(index as u64);
    rng
}

fn alloc(n: usize) -> Result<Vec<ChainState>> {
    let mut v = Vec::new();
    v.try_reserve_exact(n).map_err(|_| ChainError::Resources { done: 0, requested: n })?;
    Ok(v)
}

/// Advance every chain `n_steps` times from the given initial states.
pub fn simulate_from(initial: &[ChainState], params: &ChainParams) -> Result<ChainEnsemble> {
    params.validate()?;
    if initial.is_empty() {
        return Err(ChainError::EmptyEnsemble);
    }
    let table = GibbsTable::new(params.epsilon)?;
    let mut chains = alloc(initial.len())?;
    initial
        .par_iter()
        .enumerate()
        .map(|(i, s0)| {
            let mut rng = chain_rng(params.seed, i);
            let mut s = *s0;
            for _ in 0..params.n_steps {
                s = chain_step(&s, &table, &mut rng);
            }
            s
        })
        .collect_into_vec(&mut chains);
    Ok(ChainEnsemble {
        chains,
        params: *params,
        master_seed: params.seed,
    })
}

/// `n_chains` chains started at `params.x0`.
pub fn simulate_ensemble(params: &ChainParams, n_chains: usize) -> Result<ChainEnsemble> {
    if n_chains == 0 {
        return Err(ChainError::EmptyEnsemble);
    }
    let mut init = alloc(n_chains)?;
    init.resize(n_chains, ChainState::new(params.x0));
    simulate_from(&init, params)
}

impl ChainEnsemble {
    /// CSV with columns `chain_id,x1,x2,theta,trapped_flag` (`+`, `-` or empty).
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "chain_id,x1,x2,theta,trapped_flag")?;
        for (i, c) in self.chains.iter().enumerate() {
            let flag = match c.trapped {
                Some(TrapSide::Plus) => "+",
                Some(TrapSide::Minus) => "-",
                None => "",
            };
            writeln!(w, "{i},{},{},{},{flag}", c.x1, c.x2, c.theta)?;
        }
        Ok(())
    }
}

/// Draws chain states from a discrete phase density: a cell is chosen with
/// probability proportional to its mass, then the state is uniform inside it.
/// Trapped masses start on the wall aligned with it.
#[derive(Debug, Clone)]
pub struct InitialSampler {
    grid: GridSpec,
    cumulative: Vec<f64>,
    n_interior: usize,
}

impl InitialSampler {
    pub fn new(f: &PhaseField, b: &BoundaryDensityPair) -> Result<Self> {
        let grid = f.grid;
        let vol = grid.cell_volume();
        let mut cumulative = Vec::with_capacity(f.values.len() + 2 * grid.n_x1);
        let mut acc = 0.0;
        for v in &f.values {
            acc += v.max(0.0) * vol;
            cumulative.push(acc);
        }
        for rho in [b.plus_on_grid(), b.minus_on_grid()] {
            for r in rho {
                acc += r.max(0.0) * grid.dx1();
                cumulative.push(acc);
            }
        }
        if !(acc > 0.0) {
            return Err(ChainError::Parameter("initial density has no mass".into()));
        }
        Ok(Self {
            grid,
            cumulative,
            n_interior: f.values.len(),
        })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> ChainState {
        let g = &self.grid;
        let total = *self.cumulative.last().unwrap();
        let u = rng.gen::<f64>() * total;
        let i = self.cumulative.partition_point(|c| *c <= u).min(self.cumulative.len() - 1);
        let jitter = |rng: &mut R| rng.gen::<f64>() - 0.5;
        if i < self.n_interior {
            let k = i % g.n_theta;
            let j = (i / g.n_theta) % g.n_x2;
            let i1 = i / (g.n_theta * g.n_x2);
            let theta = g.theta(k) + jitter(rng) * g.dtheta();
            ChainState {
                x1: g.x1(i1) + jitter(rng) * g.dx1(),
                x2: g.x2(j) + jitter(rng) * g.dx2(),
                theta: if theta >= PI { theta - 2.0 * PI } else { theta },
                trapped: None,
            }
        } else {
            let r = i - self.n_interior;
            let (i1, side) = if r < g.n_x1 { (r, TrapSide::Plus) } else { (r - g.n_x1, TrapSide::Minus) };
            ChainState {
                x1: g.x1(i1) + jitter(rng) * g.dx1(),
                x2: 0.0,
                theta: if side == TrapSide::Plus { 0.0 } else { -PI },
                trapped: Some(side),
            }
        }
    }

    /// `n` states, chain `i` drawn from `chain_rng(seed, i)`.
    pub fn sample_many(&self, n: usize, seed: u64) -> Result<Vec<ChainState>> {
        let mut out = alloc(n)?;
        (0..n)
            .into_par_iter()
            .map(|i| self.sample(&mut chain_rng(seed ^ 0x5eed_1417, i)))
            .collect_into_vec(&mut out);
        Ok(out)
    }
}
