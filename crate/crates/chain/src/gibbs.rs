use std::f64::consts::PI;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::{ChainError, Result};

pub const TABLE_POINTS: usize = 4096;
/// Substeps of the cumulative Simpson rule between table nodes.
const SUBSTEPS: usize = 8;

/// Inverse-CDF table for `|Δθ|` with density `∝ exp((cos Δθ − 1)/ε)`; the
/// sign is drawn separately so the sampled law is exactly symmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct GibbsTable {
    pub epsilon: f64,
    /// Nodes on `[0, φ_max]`, `φ_max = min(π, 14√ε)`.
    phi: Vec<f64>,
    /// Normalised CDF at the nodes.
    cdf: Vec<f64>,
}

impl GibbsTable {
    pub fn new(epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0) || !epsilon.is_finite() {
            return Err(ChainError::Parameter(format!("epsilon must be > 0, got {epsilon}")));
        }
        let phi_max = PI.min(14.0 * epsilon.sqrt());
        let n = TABLE_POINTS - 1;
        let h = phi_max / n as f64;
        let dens = |p: f64| ((p.cos() - 1.0) / epsilon).exp();
        let mut phi = Vec::with_capacity(TABLE_POINTS);
        let mut cdf = Vec::with_capacity(TABLE_POINTS);
        phi.push(0.0);
        cdf.push(0.0);
        let mut acc = 0.0;
        let hs = h / SUBSTEPS as f64;
        for i in 0..n {
            let a = i as f64 * h;
            for s in 0..SUBSTEPS {
                let x = a + s as f64 * hs;
                acc += hs / 6.0 * (dens(x) + 4.0 * dens(x + 0.5 * hs) + dens(x + hs));
            }
            phi.push((i + 1) as f64 * h);
            cdf.push(acc);
        }
        cdf.iter_mut().for_each(|c| *c /= acc);
        Ok(Self { epsilon, phi, cdf })
    }

    /// `|Δθ|` for a uniform `u ∈ [0, 1)`, linear between nodes.
    pub fn magnitude(&self, u: f64) -> f64 {
        let i = self.cdf.partition_point(|c| *c <= u).clamp(1, self.cdf.len() - 1);
        let (c0, c1) = (self.cdf[i - 1], self.cdf[i]);
        let f = if c1 > c0 { (u - c0) / (c1 - c0) } else { 0.0 };
        self.phi[i - 1] + f * (self.phi[i] - self.phi[i - 1])
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.gen();
        let m = self.magnitude(u);
        if rng.gen::<bool>() {
            m
        } else {
            -m
        }
    }
}

/// One increment `Δθ ∈ [−π, π]`. Builds a table per call; hot loops should
/// hold a [`GibbsTable`].
pub fn gibbs_angle_increment<R: Rng + ?Sized>(epsilon: f64, rng: &mut R) -> Result<f64> {
    Ok(GibbsTable::new(epsilon)?.sample(rng))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiffusionEstimate {
    pub epsilon: f64,
    /// `Var[Δθ]/(2ε)`.
    pub d_eff: f64,
    pub std_error: f64,
    pub n_samples: usize,
}

pub fn estimate_diffusion(epsilon: f64, n_samples: usize, seed: u64) -> Result<DiffusionEstimate> {
    if epsilon > 0.1 {
        return Err(ChainError::Parameter(format!("epsilon must be <= 0.1, got {epsilon}")));
    }
    if n_samples < 2 {
        return Err(ChainError::Parameter("need at least 2 samples".into()));
    }
    let table = GibbsTable::new(epsilon)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // The mean is zero by symmetry, so the second moment is the variance.
    let (mut s2, mut s4) = (0.0, 0.0);
    for _ in 0..n_samples {
        let x = table.sample(&mut rng);
        let x2 = x * x;
        s2 += x2;
        s4 += x2 * x2;
    }
    let n = n_samples as f64;
    let var = s2 / n;
    let var_of_var = (s4 / n - var * var).max(0.0) / n;
    Ok(DiffusionEstimate {
        epsilon,
        d_eff: var / (2.0 * epsilon),
        std_error: var_of_var.sqrt() / (2.0 * epsilon),
        n_samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_is_monotone_and_normalised() {
        for eps in [1e-4, 1e-2, 0.1, 100.0] {
            let t = GibbsTable::new(eps).unwrap();
            assert_eq!(t.cdf.len(), TABLE_POINTS);
            assert!(t.cdf.windows(2).all(|w| w[1] >= w[0]));
            assert!((t.cdf[TABLE_POINTS - 1] - 1.0).abs() < 1e-15);
            assert_eq!(t.magnitude(0.0), 0.0);
            assert!(t.magnitude(0.999_999) <= PI);
        }
    }

    #[test]
    fn rejects_bad_epsilon() {
        assert!(GibbsTable::new(0.0).is_err());
        assert!(GibbsTable::new(f64::NAN).is_err());
        assert!(estimate_diffusion(0.2, 10, 1).is_err());
    }
}
