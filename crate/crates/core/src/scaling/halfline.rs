use crate::error::{domain, Result};
use crate::numerics::{polylog, riemann_zeta};

/// E[s^{W_1}] = 1 − s/Li_α(s) for the κ = 0 half-line renewal, 0 < s < 1.
pub fn halfline_kappa0(alpha: f64, s: f64) -> Result<f64> {
    if !(s > 0.0 && s < 1.0) {
        return Err(domain(format!("generating function needs 0 < s < 1, got {s}")));
    }
    Ok(1.0 - s / polylog(alpha, s)?)
}

/// P[S_1 = ∞] = 1/ζ(α) for α > 1.
pub fn escape_probability(alpha: f64) -> Result<f64> {
    if !(alpha > 1.0) {
        return Err(domain(format!("escape probability needs alpha > 1, got {alpha}")));
    }
    Ok(1.0 / riemann_zeta(alpha)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn values() {
        assert!((escape_probability(2.0).unwrap() - 6.0 / (PI * PI)).abs() < 1e-10);
        assert!(escape_probability(1.0).is_err());
        assert!(halfline_kappa0(1.5, 1.0).is_err());
        // Li_α(s) = s + s²/2^α + …: 1 − s/Li ≈ s/2^α for small s
        let s = 1e-6;
        assert!((halfline_kappa0(1.5, s).unwrap() / s - 2f64.powf(-1.5)).abs() < 1e-5);
        // W_1 is defective: generating function at s → 1 tends to 1 − 1/ζ(α)
        let g = halfline_kappa0(2.0, 0.999_999).unwrap();
        assert!((g - (1.0 - 6.0 / (PI * PI))).abs() < 1e-4);
    }
}
