use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ensemble::chain_rng;
use crate::gibbs::GibbsTable;
use crate::step::{chain_step, ChainState};
use crate::{ChainError, Result};

/// Maximum wall distance reached after trapping.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeviationSample {
    pub epsilon: f64,
    pub n_chains: usize,
    /// Chain length followed after the trap, in units of `t = Nε`.
    pub window: f64,
    pub mean_max_x2: f64,
    pub median_max_x2: f64,
    pub std_error: f64,
}

/// Chains start trapped (`x2 = 0`, `θ = 0`) and run `window/ε` steps; each
/// records `max x2` along its path.
pub fn wall_deviation(epsilon: f64, n_chains: usize, window: f64, seed: u64) -> Result<DeviationSample> {
    if n_chains < 2 {
        return Err(ChainError::Parameter("need at least 2 chains".into()));
    }
    let table = GibbsTable::new(epsilon)?;
    let n_steps = (window / epsilon).round() as usize;
    let mut maxima: Vec<f64> = (0..n_chains)
        .into_par_iter()
        .map(|i| {
            let mut rng = chain_rng(seed, i);
            let mut s = ChainState {
                x1: 0.0,
                x2: 0.0,
                theta: 0.0,
                trapped: None,
            };
            let mut m: f64 = 0.0;
            for _ in 0..n_steps {
                s = chain_step(&s, &table, &mut rng);
                m = m.max(s.x2);
            }
            m
        })
        .collect();
    let n = n_chains as f64;
    let mean = maxima.iter().sum::<f64>() / n;
    let var = maxima.iter().map(|m| (m - mean).powi(2)).sum::<f64>() / (n - 1.0);
    maxima.sort_by(f64::total_cmp);
    Ok(DeviationSample {
        epsilon,
        n_chains,
        window,
        mean_max_x2: mean,
        median_max_x2: maxima[n_chains / 2],
        std_error: (var / n).sqrt(),
    })
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn fit_exponent(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() || x.len() < 2 || x.iter().chain(y).any(|v| !(*v > 0.0)) {
        return Err(ChainError::Parameter("need >= 2 positive pairs".into()));
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponent_fit_recovers_power_laws() {
        let x = [1e-2, 1e-3, 1e-4];
        let y: Vec<f64> = x.iter().map(|v: &f64| 3.0 * v.powf(0.5)).collect();
        assert!((fit_exponent(&x, &y).unwrap() - 0.5).abs() < 1e-12);
        assert!(fit_exponent(&x, &[1.0, 0.0, 1.0]).is_err());
    }
}
