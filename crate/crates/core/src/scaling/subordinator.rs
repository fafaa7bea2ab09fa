use std::f64::consts::PI;

use rand::{Rng, RngCore};
use rand_distr::{Beta, Distribution};
use serde::{Deserialize, Serialize};

use crate::error::{domain, param, Result};
use crate::numerics::special::{ln_gamma, ln_gamma_ratio, ln_sinh_scaled};
use crate::numerics::{integrate_singular, QuadratureSpec};

use super::renewal::RenewalLaw;

/// Subordinator with potential density u(x) = (2√κ/(1 − e^{−2√κx}))^α.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubordinatorLaw {
    pub kappa: f64,
    pub alpha: f64,
}

impl SubordinatorLaw {
    pub fn new(kappa: f64, alpha: f64) -> Result<Self> {
        if !(kappa >= 0.0) || !kappa.is_finite() {
            return Err(param(format!("kappa must be finite and >= 0, got {kappa}")));
        }
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(param(format!("alpha must lie in (0,1), got {alpha}")));
        }
        Ok(SubordinatorLaw { kappa, alpha })
    }

    fn k(&self) -> f64 {
        self.kappa.sqrt()
    }

    /// ln((e^{2kt} − 1)/(2k)), → ln t as k → 0.
    fn ln_e(&self, t: f64) -> f64 {
        let z = 2.0 * self.k() * t;
        if z < 1e-8 {
            t.ln() + 0.5 * z
        } else {
            (z.exp_m1() / (2.0 * self.k())).ln()
        }
    }

    /// u(x) = (e^{√κx}/S(x))^α, S(x) = sinh(√κx)/√κ.
    pub fn potential_density(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return f64::INFINITY;
        }
        (self.alpha * (self.k() * x - ln_sinh_scaled(self.k(), x))).exp()
    }

    /// Π(dt)/dt = (1/π)(1−α) sin(απ) e^{2√κt} E(t)^{α−2}, E(t) = (e^{2√κt} − 1)/(2√κ).
    pub fn levy_density(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return f64::INFINITY;
        }
        let a = self.alpha;
        (1.0 - a) * (a * PI).sin() / PI * (2.0 * self.k() * t + (a - 2.0) * self.ln_e(t)).exp()
    }

    /// Π̄(t) = (1/π) sin(απ) E(t)^{α−1}.
    pub fn levy_tail(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return f64::INFINITY;
        }
        (self.alpha * PI).sin() / PI * ((self.alpha - 1.0) * self.ln_e(t)).exp()
    }

    /// Φ(λ) = (2√κ)^{1−α}/B(λ/(2√κ), 1−α); λ^{1−α}/Γ(1−α) at κ = 0.
    pub fn laplace_exponent(&self, lambda: f64) -> Result<f64> {
        if lambda < 0.0 {
            return Err(domain(format!("laplace exponent needs lambda >= 0, got {lambda}")));
        }
        if lambda == 0.0 {
            return Ok(0.0);
        }
        let b = 1.0 - self.alpha;
        let lg = ln_gamma(b)?;
        if self.kappa == 0.0 {
            return Ok((b * lambda.ln() - lg).exp());
        }
        let x = lambda / (2.0 * self.k());
        // Γ(x+b)/Γ(x) ~ x^b for large x: factor it out to keep κ → 0 exact
        Ok((b * lambda.ln() + ln_gamma_ratio(x, b)? - b * x.ln() - lg).exp())
    }

    /// Density of X at its first passage above a: (1/π) sin(απ) e^{α√κx} S(a)^{1−α}/(S(x) S(x−a)^{1−α}).
    pub fn hitting_density(&self, a: f64, x: f64) -> f64 {
        self.overshoot_density(a, x - a)
    }

    /// Density of the overshoot X_{T_a} − a at d; avoids the rounding of x − a
    /// near the (d^{α−1}) singularity.
    pub fn overshoot_density(&self, a: f64, d: f64) -> f64 {
        if d <= 0.0 || a <= 0.0 {
            return 0.0;
        }
        let (k, al) = (self.k(), self.alpha);
        let s = |y: f64| ln_sinh_scaled(k, y);
        let x = a + d;
        (al * PI).sin() / PI * (al * k * x + (1.0 - al) * (s(a) - s(d)) - s(x)).exp()
    }

    /// ∫₀ᵃ u(y) π(x − y) dy by quadrature (y = t^{1/(1−α)} removes y^{−α}).
    pub fn hitting_density_integral(&self, a: f64, x: f64, spec: &QuadratureSpec) -> Result<f64> {
        if x <= a || a <= 0.0 {
            return Ok(0.0);
        }
        let f = |y: f64| self.potential_density(y) * self.levy_density(x - y);
        // π(x − y) is singular at y → x only when x − a is small; split there
        integrate_singular(f, 0.0, a, 1.0 - self.alpha, 1.0, spec).into_result()
    }

    /// P[X_{T_a} ≤ x] by quadrature of the hitting density.
    pub fn hitting_cdf(&self, a: f64, x: f64) -> Result<f64> {
        if x <= a {
            return Ok(0.0);
        }
        let f = |d: f64| self.overshoot_density(a, d);
        integrate_singular(f, 0.0, x - a, self.alpha, 1.0, &QuadratureSpec::tol(1e-11)).into_result()
    }
}

/// Y: the subordinator h-transformed by u(1 − ·) so that Y_{ζ−} = 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConditionedBridgeLaw {
    pub base: SubordinatorLaw,
}

impl ConditionedBridgeLaw {
    pub fn new(kappa: f64, alpha: f64) -> Result<Self> {
        Ok(ConditionedBridgeLaw { base: SubordinatorLaw::new(kappa, alpha)? })
    }

    /// u(1−y)/u(1−x) for 0 ≤ x ≤ y < 1.
    pub fn bridge_weight(&self, x: f64, y: f64) -> Result<f64> {
        if !(y < 1.0) {
            return Err(domain(format!("bridge weight needs y < 1, got {y}")));
        }
        if !(0.0 <= x && x <= y) {
            return Err(domain(format!("bridge weight needs 0 <= x <= y, got x={x}, y={y}")));
        }
        if x == y {
            return Ok(1.0);
        }
        Ok(self.base.potential_density(1.0 - y) / self.base.potential_density(1.0 - x))
    }

    /// Density of Y at its first passage above a (bridge started at 0).
    pub fn hitting_density(&self, a: f64, x: f64) -> f64 {
        if x >= 1.0 {
            return 0.0;
        }
        let b = &self.base;
        b.hitting_density(a, x) * b.potential_density(1.0 - x) / b.potential_density(1.0)
    }

    /// Discrete approximation at resolution `n_approx`.
    pub fn discretization(&self, n_approx: usize) -> Result<RenewalLaw> {
        RenewalLaw::scaled(self.base.alpha, self.base.kappa, n_approx)
    }
}

/// One bridge path on [0, 1]: the conditioned renewal at resolution N,
/// scaled by 1/N. The points are the range, in increasing order, ending at 1.
pub fn sample_bridge_path<R: RngCore>(renewal: &RenewalLaw, rng: &mut R) -> Result<Vec<f64>> {
    let n = renewal.horizon;
    let path = renewal.sample_conditioned(rng, n)?;
    Ok(path.into_iter().map(|p| p as f64 / n as f64).collect())
}

/// Position at the middle jump, (P_{⌊k/2⌋}, 1 − P_{⌈k/2⌉}), for a bridge path
/// with k jumps. The two coordinates have the same law when the path law is
/// invariant under x ↦ 1 − x read backwards.
pub fn reversal_pair(path: &[f64]) -> (f64, f64) {
    let k = path.len() - 1;
    (path[k / 2], 1.0 - path[k.div_ceil(2)])
}

/// Exact draw from the limit law of (G, D). The density depends on u = x + y
/// only, so U has density ∝ S(u)^{α−2} u S(1−u)^{−α}: propose U ~ Beta(α, 1−α)
/// and accept with (S(u)/u)^{α−2} ((S(1−u)/(1−u))^{−α} ≤ 1; then G ~ U·Uniform.
pub fn sample_gd_limit<R: RngCore>(kappa: f64, alpha: f64, rng: &mut R) -> Result<(f64, f64)> {
    SubordinatorLaw::new(kappa, alpha)?;
    let k = kappa.sqrt();
    let beta = Beta::new(alpha, 1.0 - alpha).map_err(|e| param(e.to_string()))?;
    loop {
        let u: f64 = beta.sample(rng);
        if !(u > 0.0 && u < 1.0) {
            continue;
        }
        let ln_h = (alpha - 2.0) * (ln_sinh_scaled(k, u) - u.ln()) - alpha * (ln_sinh_scaled(k, 1.0 - u) - (1.0 - u).ln());
        if rng.random::<f64>() < ln_h.exp() {
            let g = u * rng.random::<f64>();
            return Ok((g, u - g));
        }
    }
}

/// Draw of the limit closed-edge set G + (1 − G − D)·R, R the range of a
/// bridge with killing κ(1 − G − D)². `renewal` must be
/// `RenewalLaw::scaled(α, κ, N)`: hitting N(1 − G − D) at rate r ≈ √κ/N is
/// the bridge at that killing.
pub fn sample_limit_cluster_set<R: RngCore>(renewal: &RenewalLaw, kappa: f64, rng: &mut R) -> Result<Vec<f64>> {
    let (g, d) = sample_gd_limit(kappa, renewal.alpha, rng)?;
    let len = 1.0 - g - d;
    let target = ((renewal.horizon as f64 * len).round() as usize).max(1);
    let path = renewal.sample_conditioned(rng, target)?;
    Ok(path.into_iter().map(|p| g + len * p as f64 / target as f64).collect())
}

/// Joint density of (Y_{T_a}, 1 − Y_{T_{1−b}−}) at (x, y), 0 < a < x < 1−y < 1−b < 1:
/// (sin²απ/π²) S(1)^α/(S(1−x−y)^α S(x) S(y)) · (S(a)S(b)/(S(x−a)S(y−b)))^{1−α}.
pub fn gd_hitting_joint(kappa: f64, alpha: f64, a: f64, b: f64, x: f64, y: f64) -> Result<f64> {
    SubordinatorLaw::new(kappa, alpha)?;
    if !(0.0 < a && a < x && x < 1.0 - y && 1.0 - y < 1.0 - b && b > 0.0) {
        return Ok(0.0);
    }
    let k = kappa.sqrt();
    let s = |z: f64| ln_sinh_scaled(k, z);
    let sin = (alpha * PI).sin() / PI;
    let ln = alpha * s(1.0) - alpha * s(1.0 - x - y) - s(x) - s(y) + (1.0 - alpha) * (s(a) + s(b) - s(x - a) - s(y - b));
    Ok(sin * sin * ln.exp())
}
