use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Roots of x² − a·x + b·c = 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Roots {
    Distinct(f64, f64),
    Double(f64),
    /// ρ·e^{±iφ}
    Complex { modulus: f64, arg: f64 },
}

/// Tri-diagonal n×n matrix with diagonal a, super-diagonal b, sub-diagonal c.
/// The circulant variant also carries b at (n−1, 0) and c at (0, n−1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetSpec {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub n: usize,
}

impl DetSpec {
    pub fn new(a: f64, b: f64, c: f64, n: usize) -> Self {
        DetSpec { a, b, c, n }
    }

    pub fn roots(&self) -> Roots {
        let disc = self.a * self.a - 4.0 * self.b * self.c;
        let scale = (self.a * self.a).max((4.0 * self.b * self.c).abs()).max(f64::MIN_POSITIVE);
        if disc.abs() <= 1e-14 * scale {
            Roots::Double(0.5 * self.a)
        } else if disc > 0.0 {
            // avoid cancellation in the smaller root
            let big = 0.5 * (self.a + self.a.signum() * disc.sqrt());
            let big = if big == 0.0 { 0.5 * disc.sqrt() } else { big };
            Roots::Distinct(big, self.b * self.c / big)
        } else {
            let modulus = (self.b * self.c).sqrt();
            let arg = (0.5 * self.a / modulus).clamp(-1.0, 1.0).acos();
            Roots::Complex { modulus, arg }
        }
    }

    pub fn is_degenerate(&self) -> bool {
        matches!(self.roots(), Roots::Double(_))
    }

    pub fn toeplitz_matrix(&self) -> Vec<f64> {
        let n = self.n;
        let mut m = vec![0.0; n * n];
        for i in 0..n {
            m[i * n + i] = self.a;
            if i + 1 < n {
                m[i * n + i + 1] = self.b;
                m[(i + 1) * n + i] = self.c;
            }
        }
        m
    }

    pub fn circulant_matrix(&self) -> Vec<f64> {
        let n = self.n;
        let mut m = vec![0.0; n * n];
        for i in 0..n {
            m[i * n + i] += self.a;
            m[i * n + (i + 1) % n] += self.b;
            m[i * n + (i + n - 1) % n] += self.c;
        }
        m
    }
}

/// det T_n = (x₁^{n+1} − x₂^{n+1})/(x₁ − x₂), or (n+1)xⁿ for a double root.
pub fn toeplitz_det(spec: &DetSpec) -> f64 {
    let n = spec.n as i32;
    match spec.roots() {
        Roots::Double(x) => (n + 1) as f64 * x.powi(n),
        Roots::Distinct(x1, x2) => {
            // Σ_{k=0}^{n} x₁^k x₂^{n−k}, written as a difference quotient
            (x1.powi(n + 1) - x2.powi(n + 1)) / (x1 - x2)
        }
        Roots::Complex { modulus, arg } => modulus.powi(n) * ((n + 1) as f64 * arg).sin() / arg.sin(),
    }
}

/// det C_n = x₁ⁿ + x₂ⁿ + (−1)^{n+1}(bⁿ + cⁿ), n ≥ 3.
pub fn circulant_det(spec: &DetSpec) -> Result<f64> {
    if spec.n < 3 {
        return Err(domain(format!("circulant determinant needs n >= 3, got {}", spec.n)));
    }
    let n = spec.n as i32;
    let power_sum = match spec.roots() {
        Roots::Double(x) => 2.0 * x.powi(n),
        Roots::Distinct(x1, x2) => x1.powi(n) + x2.powi(n),
        Roots::Complex { modulus, arg } => 2.0 * modulus.powi(n) * (n as f64 * arg).cos(),
    };
    let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
    Ok(power_sum + sign * (spec.b.powi(n) + spec.c.powi(n)))
}
