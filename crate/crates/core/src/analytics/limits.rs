use std::f64::consts::PI;

use crate::circle::CircleModel;
use crate::error::{domain, param, Result};
use crate::numerics::special::{ln_cosh, ln_cosh_diff, ln_sinh_scaled, sinh_scaled};
use crate::numerics::{integrate_simplex, integrate_singular, QuadratureSpec};

use super::masses::{mass_o3, mass_through_vertex1};

fn check_limit(kappa: f64, epsilon: f64, alpha: f64) -> Result<()> {
    if !(kappa >= 0.0) || !kappa.is_finite() {
        return Err(param(format!("kappa must be finite and >= 0, got {kappa}")));
    }
    if !(epsilon >= 0.0) || epsilon > 0.5 * kappa {
        return Err(domain(format!("need 0 <= epsilon <= kappa/2, got epsilon={epsilon}, kappa={kappa}")));
    }
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(param(format!("alpha must be positive, got {alpha}")));
    }
    Ok(())
}

fn pow_alpha(alpha: f64, ln_x: f64) -> f64 {
    if alpha == 0.0 {
        1.0
    } else {
        (alpha * ln_x).exp()
    }
}

/// P[no loop with non-zero winding and no O4 loop]
/// = ((cosh nr − cosh nθ)/cosh nr)^α.
pub fn prob_no_winding_or_covering(model: &CircleModel) -> f64 {
    let n = model.n() as f64;
    let lcd = ln_cosh_diff(n * model.r(), n * model.theta());
    pow_alpha(model.alpha(), lcd - ln_cosh(n * model.r()))
}

/// Same probability through the masses: exp(−α(μ(1∈ℓ) − μ(O3))).
pub fn prob_no_winding_or_covering_from_masses(model: &CircleModel) -> f64 {
    pow_alpha(model.alpha(), -(mass_through_vertex1(model) - mass_o3(model)))
}

/// ((cosh √κ − cosh √(κ−2ε))/cosh √κ)^α.
pub fn prob_no_winding_or_covering_limit(kappa: f64, epsilon: f64, alpha: f64) -> Result<f64> {
    check_limit(kappa, epsilon, alpha)?;
    let k = kappa.sqrt();
    let k2 = (kappa - 2.0 * epsilon).max(0.0).sqrt();
    Ok(pow_alpha(alpha, ln_cosh_diff(k, k2) - ln_cosh(k)))
}

/// P[A_n ≤ m, B_n ≤ M]: no O3 loop's lift leaves [−m, M].
pub fn ab_cdf(model: &CircleModel, m: usize, big_m: usize) -> Result<f64> {
    let n = model.n();
    if m >= n - 1 && big_m >= n - 1 {
        return Ok(1.0);
    }
    let (m, big_m) = (m.min(n - 1) as f64, big_m.min(n - 1) as f64);
    let r = model.r();
    let s = |y: f64| ln_sinh_scaled(r, y);
    let ln = std::f64::consts::LN_2 + ln_cosh(n as f64 * r) - s(n as f64) + s(m + 1.0) + s(big_m + 1.0) - s(m + big_m + 2.0);
    Ok(pow_alpha(model.alpha(), ln.min(0.0)))
}

/// P[≥ 2 clusters, J_n ≤ m, K_n ≤ M | no loop avoiding 1], m + M ≤ n − 2.
pub fn jk_joint_cdf(model: &CircleModel, m: usize, big_m: usize) -> Result<f64> {
    if m + big_m + 2 > model.n() {
        return Err(domain(format!("need m + M <= n − 2, got m={m}, M={big_m}, n={}", model.n())));
    }
    Ok(prob_no_winding_or_covering(model) * ab_cdf(model, m, big_m)?)
}

/// P[≥ 2 clusters | no loop avoiding 1] = Σ_m P[J_n = m, K_n ≤ n−2−m, ≥ 2 clusters].
pub fn prob_two_clusters_given_no_o1(model: &CircleModel) -> f64 {
    let n = model.n();
    let mut total = 0.0;
    for m in 0..=n - 2 {
        let hi = jk_joint_cdf(model, m, n - 2 - m).unwrap();
        let lo = if m == 0 { 0.0 } else { jk_joint_cdf(model, m - 1, n - 2 - m).unwrap() };
        total += hi - lo;
    }
    total
}

/// P[A ≤ a, B ≤ b] for the limit of (A_n/n, B_n/n).
pub fn ab_limit_cdf(kappa: f64, alpha: f64, a: f64, b: f64) -> Result<f64> {
    check_limit(kappa, 0.0, alpha)?;
    if a < 0.0 || b < 0.0 {
        return Ok(0.0);
    }
    if a >= 1.0 && b >= 1.0 {
        return Ok(1.0);
    }
    let (a, b) = (a.min(1.0), b.min(1.0));
    if a == 0.0 || b == 0.0 {
        return Ok(0.0);
    }
    let k = kappa.sqrt();
    let s = |y: f64| ln_sinh_scaled(k, y);
    let ln = std::f64::consts::LN_2 + ln_cosh(k) - s(1.0) + s(a) + s(b) - s(a + b);
    Ok(pow_alpha(alpha, ln.min(0.0)))
}

/// Density of (A, B): κα(α+1)(2cosh√κ/sinh√κ)^α (sinh(√κa) sinh(√κb))^α / sinh(√κ(a+b))^{α+2}.
pub fn ab_limit_density(kappa: f64, alpha: f64, a: f64, b: f64) -> Result<f64> {
    check_limit(kappa, 0.0, alpha)?;
    if a <= 0.0 || b <= 0.0 || a > 1.0 || b > 1.0 {
        return Ok(0.0);
    }
    let k = kappa.sqrt();
    let s = |y: f64| ln_sinh_scaled(k, y);
    let ln = alpha * (std::f64::consts::LN_2 + ln_cosh(k) - s(1.0) + s(a) + s(b)) - (alpha + 2.0) * s(a + b);
    Ok(alpha * (alpha + 1.0) * ln.exp())
}

/// Limit of P[≥ 2 clusters, J_n/n ≤ a, K_n/n ≤ b | no loop avoiding 1].
pub fn jk_joint_cdf_limit(kappa: f64, epsilon: f64, alpha: f64, a: f64, b: f64) -> Result<f64> {
    if a < 0.0 || b < 0.0 || a + b > 1.0 + 1e-15 {
        return Err(domain(format!("need a, b >= 0 and a + b <= 1, got a={a}, b={b}")));
    }
    Ok(prob_no_winding_or_covering_limit(kappa, epsilon, alpha)? * ab_limit_cdf(kappa, alpha, a, b)?)
}

/// Limit of P[≥ 2 clusters | no loop avoiding 1]:
/// 2^α α√κ (cosh√κ − cosh√(κ−2ε))^α/sinh^{2α+1}√κ ∫₀¹ sinh(a√κ)^{α−1} sinh((1−a)√κ)^{α+1} da.
pub fn prob_two_clusters_given_no_o1_limit(kappa: f64, epsilon: f64, alpha: f64) -> Result<f64> {
    check_limit(kappa, epsilon, alpha)?;
    let k = kappa.sqrt();
    let k2 = (kappa - 2.0 * epsilon).max(0.0).sqrt();
    let lcd = ln_cosh_diff(k, k2);
    if lcd == f64::NEG_INFINITY {
        return Ok(0.0);
    }
    let g = |a: f64| ((alpha - 1.0) * ln_sinh_scaled(k, a) + (alpha + 1.0) * ln_sinh_scaled(k, 1.0 - a)).exp();
    let integral = integrate_singular(g, 0.0, 1.0, alpha, 1.0, &QuadratureSpec::tol(1e-13)).into_result()?;
    let ln_pref = alpha * std::f64::consts::LN_2 + alpha.ln() + alpha * lcd - (2.0 * alpha + 1.0) * ln_sinh_scaled(k, 1.0);
    Ok(ln_pref.exp() * integral)
}

/// Limit of P[≥ 2 clusters | no winding or O4 loop] = (2cosh√κ)^α sinh(√κ(1−α))/sinh√κ.
pub fn prob_two_clusters_given_no_winding_limit(kappa: f64, alpha: f64) -> Result<f64> {
    check_limit(kappa, 0.0, alpha)?;
    if alpha >= 1.0 {
        return Ok(0.0);
    }
    let k = kappa.sqrt();
    Ok((alpha * (std::f64::consts::LN_2 + ln_cosh(k)) + ln_sinh_scaled(k, 1.0 - alpha) - ln_sinh_scaled(k, 1.0)).exp())
}

/// 2^α sinh(√κ(1−α))(cosh√κ − cosh√(κ−2ε))^α / sinh√κ; zero for α ≥ 1.
pub fn prob_not_single_partition_limit(kappa: f64, epsilon: f64, alpha: f64) -> Result<f64> {
    check_limit(kappa, epsilon, alpha)?;
    if alpha >= 1.0 {
        return Ok(0.0);
    }
    Ok(prob_no_winding_or_covering_limit(kappa, epsilon, alpha)? * prob_two_clusters_given_no_winding_limit(kappa, alpha)?)
}

/// ∫∫_{a+b<1} of the (A, B) density, by quadrature.
pub fn ab_simplex_mass(kappa: f64, alpha: f64) -> Result<f64> {
    check_limit(kappa, 0.0, alpha)?;
    let f = |a: f64, b: f64| ab_limit_density(kappa, alpha, a, b).unwrap_or(f64::NAN);
    integrate_simplex(f, alpha, 1.0, alpha + 1.0, &QuadratureSpec::tol(1e-12)).into_result()
}

/// ∫∫ of the normalised (G, D) density over the simplex, by quadrature.
pub fn gd_simplex_mass(kappa: f64, alpha: f64) -> Result<f64> {
    gd_check(kappa, alpha)?;
    let f = |x: f64, y: f64| gd_limit_density(kappa, alpha, x, y).unwrap_or(f64::NAN);
    integrate_simplex(f, alpha, 1.0 - alpha, 1.0, &QuadratureSpec::tol(1e-10)).into_result()
}

fn gd_check(kappa: f64, alpha: f64) -> Result<()> {
    check_limit(kappa, 0.0, alpha)?;
    if alpha >= 1.0 {
        return Err(domain(format!("(G, D) law needs 0 < alpha < 1, got {alpha}")));
    }
    Ok(())
}

fn gd_shape(k: f64, alpha: f64, x: f64, y: f64) -> f64 {
    // 1/(S(1−x−y)^α S(x+y)^{2−α}), S(z) = sinh(kz)/k
    (-alpha * ln_sinh_scaled(k, 1.0 - x - y) - (2.0 - alpha) * ln_sinh_scaled(k, x + y)).exp()
}

fn in_open_simplex(x: f64, y: f64) -> bool {
    x > 0.0 && y > 0.0 && x + y < 1.0
}

/// Density of the limit (G, D), normalised to a probability density:
/// (sin απ/π)(1−α)κ sinh√κ / (sinh(√κ(1−α)) sinh(√κ(1−x−y))^α sinh(√κ(x+y))^{2−α}).
pub fn gd_limit_density(kappa: f64, alpha: f64, x: f64, y: f64) -> Result<f64> {
    gd_check(kappa, alpha)?;
    if !in_open_simplex(x, y) {
        return Ok(0.0);
    }
    let k = kappa.sqrt();
    let pref = (alpha * PI).sin() / PI * (1.0 - alpha) * sinh_scaled(k, 1.0) / sinh_scaled(k, 1.0 - alpha);
    Ok(pref * gd_shape(k, alpha, x, y))
}

/// Joint density of (g, d) on {g + d < 1} before conditioning on it:
/// (sin απ/π) 2^α (1−α) κ cosh^α√κ / (sinh(√κ(1−x−y))^α sinh(√κ(x+y))^{2−α}).
pub fn gd_unnormalized_density(kappa: f64, alpha: f64, x: f64, y: f64) -> Result<f64> {
    gd_check(kappa, alpha)?;
    if !in_open_simplex(x, y) {
        return Ok(0.0);
    }
    let k = kappa.sqrt();
    let pref = (alpha * PI).sin() / PI * (1.0 - alpha) * (alpha * (std::f64::consts::LN_2 + ln_cosh(k))).exp();
    Ok(pref * gd_shape(k, alpha, x, y))
}

/// P[g + d < 1] = (2cosh√κ)^α sinh(√κ(1−α))/sinh√κ.
pub fn gd_unnormalized_total(kappa: f64, alpha: f64) -> Result<f64> {
    gd_check(kappa, alpha)?;
    prob_two_clusters_given_no_winding_limit(kappa, alpha)
}

/// Mass of the normalised (G, D) law in the cell [x0, x1] × [y0, y1]. The
/// density depends on u = x + y only, so the cell mass is ∫ f(u) L(u) du
/// with L(u) the length of the cell's cut by the line x + y = u.
pub fn gd_limit_cell_mass(kappa: f64, alpha: f64, x0: f64, x1: f64, y0: f64, y1: f64) -> Result<f64> {
    gd_check(kappa, alpha)?;
    if !(0.0 <= x0 && x0 <= x1 && 0.0 <= y0 && y0 <= y1) {
        return Err(domain(format!("bad cell [{x0}, {x1}] x [{y0}, {y1}]")));
    }
    let k = kappa.sqrt();
    let pref = (alpha * PI).sin() / PI * (1.0 - alpha) * sinh_scaled(k, 1.0) / sinh_scaled(k, 1.0 - alpha);
    let f = |u: f64| {
        let len = (x1.min(u - y0) - x0.max(u - y1)).max(0.0);
        if len == 0.0 {
            0.0
        } else {
            pref * gd_shape(k, alpha, 0.5 * u, 0.5 * u) * len
        }
    };
    let mut cuts: Vec<f64> = [x0 + y0, x0 + y1, x1 + y0, x1 + y1].iter().map(|c| c.clamp(0.0, 1.0)).collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let spec = QuadratureSpec::tol(1e-12);
    let mut total = 0.0;
    for w in cuts.windows(2) {
        let (s, t) = (w[0], w[1]);
        let lam_a = if s == 0.0 { alpha } else { 1.0 };
        let lam_b = if t == 1.0 { 1.0 - alpha } else { 1.0 };
        total += integrate_singular(f, s, t, lam_a, lam_b, &spec).into_result()?;
    }
    Ok(total)
}
