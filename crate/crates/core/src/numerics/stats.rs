//! Goodness-of-fit statistics and distances between point sets.

use statrs::distribution::{ChiSquared, ContinuousCDF};

/// One-sample two-sided KS statistic; `samples` need not be sorted.
pub fn ks_distance<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> f64 {
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x);
        d = d.max(f - i as f64 / n).max((i + 1) as f64 / n - f);
    }
    d
}

/// Two-sample KS statistic sup |F_a − F_b|.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let mut xa = a.to_vec();
    let mut xb = b.to_vec();
    xa.sort_by(f64::total_cmp);
    xb.sort_by(f64::total_cmp);
    let (na, nb) = (xa.len() as f64, xb.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < xa.len() && j < xb.len() {
        let x = xa[i].min(xb[j]);
        while i < xa.len() && xa[i] <= x {
            i += 1;
        }
        while j < xb.len() && xb[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Kolmogorov survival function Q(λ) = 2 Σ (−1)^{k−1} e^{−2k²λ²}.
pub fn kolmogorov_q(lambda: f64) -> f64 {
    if lambda < 0.2 {
        return 1.0;
    }
    let mut s = 0.0;
    for k in 1..=100 {
        let kf = k as f64;
        let t = (-2.0 * kf * kf * lambda * lambda).exp();
        s += if k % 2 == 1 { t } else { -t };
        if t < 1e-17 {
            break;
        }
    }
    (2.0 * s).clamp(0.0, 1.0)
}

/// Asymptotic p-value for a KS statistic with effective sample size `n_eff`.
pub fn ks_pvalue(d: f64, n_eff: f64) -> f64 {
    let sn = n_eff.sqrt();
    kolmogorov_q((sn + 0.12 + 0.11 / sn) * d)
}

/// Asymptotic critical value: the D with `ks_pvalue(D) = level`.
pub fn ks_critical(level: f64, n_eff: f64) -> f64 {
    let (mut lo, mut hi) = (0.2, 5.0);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if kolmogorov_q(mid) > level {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let sn = n_eff.sqrt();
    0.5 * (lo + hi) / (sn + 0.12 + 0.11 / sn)
}

pub fn chi_squared_sf(stat: f64, dof: usize) -> f64 {
    if dof == 0 {
        return 1.0;
    }
    let dist = ChiSquared::new(dof as f64).expect("dof > 0");
    dist.sf(stat)
}

#[derive(Debug, Clone, Copy, serde::Serialize, serde::Deserialize)]
pub struct ChiSquaredTest {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    pub bins: usize,
}

/// Pearson goodness of fit. Adjacent bins are pooled (in order) until each
/// pooled bin has expected count ≥ `min_expected`.
pub fn chi_squared_gof(observed: &[u64], probs: &[f64], min_expected: f64) -> ChiSquaredTest {
    assert_eq!(observed.len(), probs.len());
    let total: u64 = observed.iter().sum();
    let n = total as f64;
    let mut pooled: Vec<(f64, f64)> = Vec::new();
    let (mut o, mut e) = (0.0, 0.0);
    for (&obs, &p) in observed.iter().zip(probs) {
        o += obs as f64;
        e += p * n;
        if e >= min_expected {
            pooled.push((o, e));
            o = 0.0;
            e = 0.0;
        }
    }
    if e > 0.0 || o > 0.0 {
        match pooled.last_mut() {
            Some(last) => {
                last.0 += o;
                last.1 += e;
            }
            None => pooled.push((o, e)),
        }
    }
    let statistic = pooled.iter().map(|&(o, e)| (o - e) * (o - e) / e).sum();
    let dof = pooled.len().saturating_sub(1);
    ChiSquaredTest { statistic, dof, p_value: chi_squared_sf(statistic, dof), bins: pooled.len() }
}

/// Two-sample chi-squared homogeneity test on aligned histograms.
/// Bins are pooled in order until the combined count reaches `min_count`.
pub fn chi_squared_homogeneity(a: &[u64], b: &[u64], min_count: f64) -> ChiSquaredTest {
    assert_eq!(a.len(), b.len());
    let mut pooled: Vec<(f64, f64)> = Vec::new();
    let (mut x, mut y) = (0.0, 0.0);
    for (&ca, &cb) in a.iter().zip(b) {
        x += ca as f64;
        y += cb as f64;
        if x + y >= min_count {
            pooled.push((x, y));
            x = 0.0;
            y = 0.0;
        }
    }
    if x + y > 0.0 {
        match pooled.last_mut() {
            Some(last) => {
                last.0 += x;
                last.1 += y;
            }
            None => pooled.push((x, y)),
        }
    }
    let na: f64 = pooled.iter().map(|p| p.0).sum();
    let nb: f64 = pooled.iter().map(|p| p.1).sum();
    let n = na + nb;
    let mut statistic = 0.0;
    for &(x, y) in &pooled {
        let col = x + y;
        let ea = col * na / n;
        let eb = col * nb / n;
        statistic += (x - ea).powi(2) / ea + (y - eb).powi(2) / eb;
    }
    let dof = pooled.len().saturating_sub(1);
    ChiSquaredTest { statistic, dof, p_value: chi_squared_sf(statistic, dof), bins: pooled.len() }
}

/// Hausdorff distance between two finite, sorted, non-empty subsets of ℝ.
pub fn hausdorff(a: &[f64], b: &[f64]) -> f64 {
    assert!(!a.is_empty() && !b.is_empty(), "hausdorff needs non-empty sets");
    directed(a, b).max(directed(b, a))
}

// max over x in a of the distance to the nearest point in b (both sorted)
fn directed(a: &[f64], b: &[f64]) -> f64 {
    let mut j = 0;
    let mut d: f64 = 0.0;
    for &x in a {
        while j + 1 < b.len() && b[j + 1] <= x {
            j += 1;
        }
        let mut near = (x - b[j]).abs();
        if j + 1 < b.len() {
            near = near.min((b[j + 1] - x).abs());
        }
        d = d.max(near);
    }
    d
}

/// Mean and standard error of the mean.
pub fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let m = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (m, f64::NAN);
    }
    let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
    (m, (v / n).sqrt())
}

/// z-score of an observed success count against probability `p`.
pub fn binomial_z(successes: u64, trials: u64, p: f64) -> f64 {
    let n = trials as f64;
    let se = (p * (1.0 - p) / n).sqrt();
    let phat = successes as f64 / n;
    if se == 0.0 {
        return if phat == p { 0.0 } else { f64::INFINITY };
    }
    (phat - p) / se
}
