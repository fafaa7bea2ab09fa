use rand::{Rng, RngCore};
use serde::Serialize;

use crate::circle::CircleModel;
use crate::error::{param, Error, Result};

/// C(m) = ((1 − e^{−2r})/(1 − e^{−2(m+1)r}))^α for m = 0..=N; (m+1)^{−α} at r = 0.
pub fn hitting_coefficients(alpha: f64, r: f64, horizon: usize) -> Result<Vec<f64>> {
    if !(r >= 0.0) || !r.is_finite() {
        return Err(param(format!("r must be finite and >= 0, got {r}")));
    }
    if !(alpha >= 0.0) || !alpha.is_finite() {
        return Err(param(format!("alpha must be finite and >= 0, got {alpha}")));
    }
    let num = (-2.0 * r).exp_m1();
    Ok((0..=horizon)
        .map(|m| {
            let ratio = if r == 0.0 { 1.0 / (m + 1) as f64 } else { num / (-2.0 * (m + 1) as f64 * r).exp_m1() };
            ratio.powf(alpha)
        })
        .collect())
}

/// Solves C(m) = Σ_{j=1}^{m} w(j) C(m−j) for w(1..=N); w[0] is unused (0).
pub fn invert_renewal(c: &[f64]) -> Result<Vec<f64>> {
    if c.is_empty() || (c[0] - 1.0).abs() > 1e-15 {
        return Err(param("renewal inversion needs C(0) = 1"));
    }
    let n = c.len() - 1;
    let mut w = vec![0.0; n + 1];
    for m in 1..=n {
        // Σ_{j=1}^{m−1} w(j) C(m−j)
        let conv: f64 = w[1..m].iter().zip(c[1..m].iter().rev()).map(|(a, b)| a * b).sum();
        let v = c[m] - conv;
        if v < -1e-12 {
            return Err(Error::Inconsistent { m, w: v });
        }
        w[m] = v.max(0.0);
    }
    Ok(w)
}

/// Renewal process with jump pmf w (defective) and hitting probabilities C.
#[derive(Debug, Clone, Serialize)]
pub struct RenewalLaw {
    pub alpha: f64,
    pub r: f64,
    pub horizon: usize,
    #[serde(skip)]
    c: Vec<f64>,
    #[serde(skip)]
    w: Vec<f64>,
    #[serde(skip)]
    w_prefix: Vec<f64>,
    #[serde(skip)]
    c_prefix: Vec<f64>,
    #[serde(skip)]
    w_suffix_max: Vec<f64>,
}

fn prefix(xs: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(xs.len() + 1);
    let mut acc = 0.0;
    out.push(0.0);
    for &x in xs {
        acc += x;
        out.push(acc);
    }
    out
}

/// Smallest i with prefix[i+1] > target, searching i in [lo, hi).
fn search(prefix: &[f64], lo: usize, hi: usize, target: f64) -> usize {
    let (mut a, mut b) = (lo, hi);
    while a + 1 < b {
        let mid = (a + b) / 2;
        if prefix[mid] <= target {
            a = mid;
        } else {
            b = mid;
        }
    }
    a
}

const DIRECT_LIMIT: usize = 64;

impl RenewalLaw {
    pub fn new(alpha: f64, r: f64, horizon: usize) -> Result<Self> {
        if horizon == 0 {
            return Err(param("renewal horizon must be >= 1"));
        }
        let c = hitting_coefficients(alpha, r, horizon)?;
        let w = invert_renewal(&c)?;
        let w_prefix = prefix(&w);
        let c_prefix = prefix(&c);
        let mut w_suffix_max = w.clone();
        for j in (0..horizon).rev() {
            w_suffix_max[j] = w_suffix_max[j].max(w_suffix_max[j + 1]);
        }
        Ok(RenewalLaw { alpha, r, horizon, c, w, w_prefix, c_prefix, w_suffix_max })
    }

    /// Closed-edge renewal of the soup avoiding vertex 1 on the n-circle:
    /// same α and r, total jump n − 1.
    pub fn for_model(model: &CircleModel) -> Result<Self> {
        RenewalLaw::new(model.alpha(), model.r(), model.n() - 1)
    }

    /// Rate matched to a scaling limit: r with 2cosh r = 2 + κ/n².
    pub fn scaled(alpha: f64, kappa: f64, n: usize) -> Result<Self> {
        let kn = kappa / (n as f64 * n as f64);
        let r = (0.5 * kn + (kn + 0.25 * kn * kn).sqrt()).ln_1p();
        RenewalLaw::new(alpha, r, n)
    }

    pub fn c(&self) -> &[f64] {
        &self.c
    }
    pub fn w(&self) -> &[f64] {
        &self.w
    }

    /// P[first jump = j | hit L] = w(j) C(L−j)/C(L).
    pub fn conditioned_jump_pmf(&self, remaining: usize) -> Vec<f64> {
        let l = remaining;
        (0..=l).map(|j| if j == 0 { 0.0 } else { self.w[j] * self.c[l - j] / self.c[l] }).collect()
    }

    fn conditioned_jump<R: RngCore>(&self, rng: &mut R, l: usize) -> usize {
        if l == 1 {
            return 1;
        }
        let (c, w) = (&self.c, &self.w);
        if l <= DIRECT_LIMIT {
            let u: f64 = rng.random::<f64>() * c[l];
            let mut acc = 0.0;
            for j in 1..=l {
                acc += w[j] * c[l - j];
                if u < acc {
                    return j;
                }
            }
            return l;
        }
        // envelope: j ≤ h uses w(j)·C(L−h); j > h uses max w · C(L−j)
        let h = l / 2;
        let mass_a = self.w_prefix[h + 1] * c[l - h];
        let wmax = self.w_suffix_max[h + 1];
        let mass_b = wmax * self.c_prefix[l - h];
        loop {
            let u: f64 = rng.random::<f64>() * (mass_a + mass_b);
            if u < mass_a {
                let t = rng.random::<f64>() * self.w_prefix[h + 1];
                let j = search(&self.w_prefix, 1, h + 1, t).max(1);
                if rng.random::<f64>() * c[l - h] < c[l - j] {
                    return j;
                }
            } else {
                // k = L − j ∈ [0, L−h) drawn ∝ C(k)
                let t = rng.random::<f64>() * self.c_prefix[l - h];
                let k = search(&self.c_prefix, 0, l - h, t);
                let j = l - k;
                if rng.random::<f64>() * wmax < w[j] {
                    return j;
                }
            }
        }
    }

    /// Renewal path from 0 conditioned to hit `target` ≤ horizon exactly.
    pub fn sample_conditioned<R: RngCore>(&self, rng: &mut R, target: usize) -> Result<Vec<usize>> {
        if target > self.horizon {
            return Err(param(format!("target {target} exceeds horizon {}", self.horizon)));
        }
        if self.c[target] <= 0.0 {
            return Err(param("target is not reachable (C = 0)"));
        }
        let mut path = vec![0];
        let mut pos = 0;
        while pos < target {
            pos += self.conditioned_jump(rng, target - pos);
            path.push(pos);
        }
        Ok(path)
    }

    /// Unconditioned path up to the horizon. The flag is set when the path
    /// was cut: the next renewal lies beyond the horizon or the walk was
    /// killed (the defect 1 − Σw).
    pub fn sample_unconditioned<R: RngCore>(&self, rng: &mut R) -> (Vec<usize>, bool) {
        let total = self.w_prefix[self.horizon + 1];
        let mut path = vec![0];
        let mut pos = 0;
        loop {
            let u: f64 = rng.random();
            if u >= total {
                return (path, true);
            }
            let j = search(&self.w_prefix, 1, self.horizon + 1, u).max(1);
            pos += j;
            if pos > self.horizon {
                return (path, true);
            }
            path.push(pos);
        }
    }

    /// First renewal strictly above `level`, or `None` if it is beyond the
    /// horizon.
    pub fn first_passage<R: RngCore>(&self, rng: &mut R, level: usize) -> Option<usize> {
        let total = self.w_prefix[self.horizon + 1];
        let mut pos = 0;
        while pos <= level {
            let u: f64 = rng.random();
            if u >= total {
                return None;
            }
            pos += search(&self.w_prefix, 1, self.horizon + 1, u).max(1);
            if pos > self.horizon {
                return None;
            }
        }
        Some(pos)
    }
}

pub fn sample_conditioned_renewal<R: RngCore>(law: &RenewalLaw, n: usize, rng: &mut R) -> Result<Vec<usize>> {
    law.sample_conditioned(rng, n)
}
