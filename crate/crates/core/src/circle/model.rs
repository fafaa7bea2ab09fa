use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};

/// Flat parameter record (n, p, c, α).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub n: usize,
    pub p: f64,
    pub c: f64,
    pub alpha: f64,
}

/// Nearest-neighbour walk on Z/nZ: clockwise with weight p/(1+c),
/// counter-clockwise with (1−p)/(1+c), killed with c/(1+c).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ModelParams")]
pub struct CircleModel {
    n: usize,
    p: f64,
    c: f64,
    alpha: f64,
    kappa: f64,
    r: f64,
}

impl TryFrom<ModelParams> for CircleModel {
    type Error = Error;
    fn try_from(m: ModelParams) -> Result<Self> {
        CircleModel::new(m.n, m.p, m.c, m.alpha)
    }
}

pub fn build_model(n: usize, p: f64, c: f64, alpha: f64) -> Result<CircleModel> {
    CircleModel::new(n, p, c, alpha)
}

impl CircleModel {
    pub fn new(n: usize, p: f64, c: f64, alpha: f64) -> Result<Self> {
        if n < 3 {
            return Err(param(format!("n must be at least 3, got {n}")));
        }
        if !(p > 0.0 && p < 1.0) {
            return Err(param(format!("p must lie in (0,1), got {p}")));
        }
        if !(c >= 0.0) || !c.is_finite() {
            return Err(param(format!("c must be a finite non-negative number, got {c}")));
        }
        if !(alpha >= 0.0) || !alpha.is_finite() {
            return Err(param(format!("alpha must be finite and non-negative, got {alpha}")));
        }
        let q = 1.0 - p;
        let s = (p * q).sqrt();
        // (1 + c − 2s)/s with 1 − 2s = (p−q)²/(1+2s), no cancellation
        let kappa = (c + (p - q) * (p - q) / (1.0 + 2.0 * s)) / s;
        let r = (0.5 * kappa + (kappa + 0.25 * kappa * kappa).sqrt()).ln_1p();
        Ok(CircleModel { n, p, c, alpha, kappa, r })
    }

    /// Model with p_n, c_n tuned so that n²κ^(n) = κ and n²c_n = ε exactly.
    pub fn scaled(n: usize, kappa: f64, epsilon: f64, alpha: f64) -> Result<Self> {
        if !(kappa > 0.0) || !(epsilon >= 0.0) || epsilon > 0.5 * kappa {
            return Err(param(format!("need kappa > 0 and 0 <= epsilon <= kappa/2 (kappa={kappa}, epsilon={epsilon})")));
        }
        let nn = (n * n) as f64;
        let kn = kappa / nn;
        let c = epsilon / nn;
        // s = √(pq) = (1+c)/(2+κ_n); 1 − 2s = (κ_n − 2c)/(2+κ_n)
        let s = (1.0 + c) / (2.0 + kn);
        let one_minus_2s = (kn - 2.0 * c) / (2.0 + kn);
        let disc = (one_minus_2s * (1.0 + 2.0 * s)).max(0.0);
        let p = 0.5 * (1.0 - disc.sqrt());
        CircleModel::new(n, p, c, alpha)
    }

    pub fn params(&self) -> ModelParams {
        ModelParams { n: self.n, p: self.p, c: self.c, alpha: self.alpha }
    }

    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        CircleModel::new(self.n, self.p, self.c, alpha)
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn p(&self) -> f64 {
        self.p
    }
    pub fn q(&self) -> f64 {
        1.0 - self.p
    }
    pub fn c(&self) -> f64 {
        self.c
    }
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn kappa(&self) -> f64 {
        self.kappa
    }
    pub fn r(&self) -> f64 {
        self.r
    }
    /// θ = ½ ln(p/q); the drift term cosh(nθ) = cosh(n·ln(p/(1−p))/2).
    pub fn theta(&self) -> f64 {
        0.5 * (self.p / self.q()).ln()
    }
    /// √(pq)/(1+c): the common modulus of the Toeplitz roots of I − Q.
    pub fn root_scale(&self) -> f64 {
        (self.p * self.q()).sqrt() / (1.0 + self.c)
    }

    pub fn step_cw(&self) -> f64 {
        self.p / (1.0 + self.c)
    }
    pub fn step_ccw(&self) -> f64 {
        self.q() / (1.0 + self.c)
    }

    /// Q(x, y) for internal (0-based) vertices.
    pub fn jump(&self, x: usize, y: usize) -> f64 {
        let n = self.n;
        if y == (x + 1) % n {
            self.step_cw()
        } else if x == (y + 1) % n {
            self.step_ccw()
        } else {
            0.0
        }
    }

    /// Q as a row-major n×n matrix.
    pub fn jump_matrix(&self) -> Vec<f64> {
        let n = self.n;
        let mut q = vec![0.0; n * n];
        for x in 0..n {
            q[x * n + (x + 1) % n] = self.step_cw();
            q[x * n + (x + n - 1) % n] = self.step_ccw();
        }
        q
    }

    /// Generator L: L_xx = −(1+c), L_{x,x+1} = p, L_{x,x−1} = 1−p.
    pub fn generator(&self) -> Vec<f64> {
        let n = self.n;
        let mut l = vec![0.0; n * n];
        for x in 0..n {
            l[x * n + x] = -(1.0 + self.c);
            l[x * n + (x + 1) % n] += self.p;
            l[x * n + (x + n - 1) % n] += self.q();
        }
        l
    }

    /// Spectral radius of Q, 1/(1+c).
    pub fn spectral_radius(&self) -> f64 {
        1.0 / (1.0 + self.c)
    }
}
