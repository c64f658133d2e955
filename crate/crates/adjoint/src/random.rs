use std::f64::consts::PI;

use rand::Rng;

use crate::boundary::AdjointData;

#[derive(Debug, Clone, PartialEq)]
struct Term {
    amp: f64,
    n: f64,
    m: f64,
    phase_theta: f64,
    phase_x1: f64,
    decay: f64,
}

/// Random smooth data `c + Σ a cos(nθ + p) cos(2πm x1/L + q) e^{−b x2}`,
/// with an exact `x1` derivative.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothData {
    constant: f64,
    terms: Vec<Term>,
    period: f64,
}

impl SmoothData {
    /// `full = false` drops the `x1` dependence.
    pub fn sample<R: Rng + ?Sized>(rng: &mut R, period: f64, full: bool) -> Self {
        let n_terms = rng.gen_range(2..=5);
        let terms = (0..n_terms)
            .map(|_| Term {
                amp: rng.gen_range(-1.0..1.0),
                n: rng.gen_range(0..=3) as f64,
                m: if full { rng.gen_range(0..=2) as f64 } else { 0.0 },
                phase_theta: rng.gen_range(0.0..2.0 * PI),
                phase_x1: rng.gen_range(0.0..2.0 * PI),
                decay: rng.gen_range(0.0..2.0),
            })
            .collect();
        Self {
            constant: rng.gen_range(-0.5..0.5),
            terms,
            period,
        }
    }

    pub fn reduced(&self, x2: f64, theta: f64) -> f64 {
        self.value(0.0, x2, theta)
    }
}

impl AdjointData for SmoothData {
    fn value(&self, x1: f64, x2: f64, theta: f64) -> f64 {
        let w = 2.0 * PI / self.period;
        self.constant
            + self
                .terms
                .iter()
                .map(|t| {
                    t.amp * (t.n * theta + t.phase_theta).cos() * (w * t.m * x1 + t.phase_x1).cos() * (-t.decay * x2).exp()
                })
                .sum::<f64>()
    }

    fn d_x1(&self, x1: f64, x2: f64, theta: f64) -> f64 {
        let w = 2.0 * PI / self.period;
        self.terms
            .iter()
            .map(|t| {
                -t.amp * w * t.m * (t.n * theta + t.phase_theta).cos() * (w * t.m * x1 + t.phase_x1).sin() * (-t.decay * x2).exp()
            })
            .sum()
    }
}

/// Sup norms of data and of its `x1` derivative over grid nodes and the wall.
pub fn data_norms<G: AdjointData + ?Sized>(g: &G, grid: &polykin_core::GridSpec) -> (f64, f64) {
    let (mut a, mut b): (f64, f64) = (0.0, 0.0);
    for i in 0..grid.n_x1 {
        let x1 = grid.x1(i);
        for k in 0..grid.n_theta {
            let th = grid.theta(k);
            for x2 in std::iter::once(0.0).chain((0..grid.n_x2).map(|j| grid.x2(j))) {
                a = a.max(g.value(x1, x2, th).abs());
                b = b.max(g.d_x1(x1, x2, th).abs());
            }
        }
    }
    (a, b)
}
