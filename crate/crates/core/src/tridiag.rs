//! Implicit periodic diffusion step `(I − r·δ²) u_new = u_old`, where `δ²` is
//! the cyclic second difference. Solved with the Thomas algorithm plus a
//! Sherman–Morrison correction for the two corner entries.

/// Factorised cyclic system for a fixed `r = D·dt/Δθ²`.
#[derive(Debug, Clone)]
pub struct CyclicDiffusion {
    n: usize,
    r: f64,
    /// Modified Thomas coefficients of the tridiagonal part.
    cp: Vec<f64>,
    denom: Vec<f64>,
    /// Solution of `T z = u` for the Sherman–Morrison vector `u`.
    z: Vec<f64>,
    gamma: f64,
    zfac: f64,
}

impl CyclicDiffusion {
    pub fn new(n: usize, r: f64) -> Self {
        assert!(n >= 3, "cyclic system needs at least 3 unknowns");
        assert!(r >= 0.0 && r.is_finite());
        let b = 1.0 + 2.0 * r;
        let a = -r; // sub-diagonal, also corner A[n-1][0]
        let c = -r; // super-diagonal, also corner A[0][n-1]
        let gamma = -b;
        let mut diag = vec![b; n];
        diag[0] = b - gamma;
        diag[n - 1] = b - a * c / gamma;

        let mut cp = vec![0.0; n];
        let mut denom = vec![0.0; n];
        denom[0] = diag[0];
        cp[0] = c / denom[0];
        for i in 1..n {
            denom[i] = diag[i] - a * cp[i - 1];
            // M-matrix: the pivots stay positive.
            assert!(denom[i] > 0.0, "cyclic diffusion factorisation broke down");
            cp[i] = c / denom[i];
        }
        let mut me = Self {
            n,
            r,
            cp,
            denom,
            z: vec![0.0; n],
            gamma,
            zfac: 0.0,
        };
        let mut u = vec![0.0; n];
        u[0] = gamma;
        u[n - 1] = a;
        me.thomas(&mut u);
        me.zfac = 1.0 + u[0] + c * u[n - 1] / gamma;
        me.z = u;
        me
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    fn thomas(&self, x: &mut [f64]) {
        let a = -self.r;
        x[0] /= self.denom[0];
        for i in 1..self.n {
            x[i] = (x[i] - a * x[i - 1]) / self.denom[i];
        }
        for i in (0..self.n - 1).rev() {
            x[i] -= self.cp[i] * x[i + 1];
        }
    }

    /// Overwrite `x` (the right-hand side) with the solution.
    pub fn solve_in_place(&self, x: &mut [f64]) {
        debug_assert_eq!(x.len(), self.n);
        if self.r == 0.0 {
            return;
        }
        self.thomas(x);
        let c = -self.r;
        let fact = (x[0] + c * x[self.n - 1] / self.gamma) / self.zfac;
        for (xi, zi) in x.iter_mut().zip(&self.z) {
            *xi -= fact * zi;
        }
    }

    /// Apply the cyclic second difference `δ²u` (unscaled).
    pub fn second_difference(u: &[f64], out: &mut [f64]) {
        let n = u.len();
        for k in 0..n {
            out[k] = u[(k + n - 1) % n] - 2.0 * u[k] + u[(k + 1) % n];
        }
    }
}
