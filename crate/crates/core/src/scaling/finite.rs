use crate::analytics::ab_cdf;
use crate::circle::CircleModel;
use crate::error::{param, Result};

use super::renewal::RenewalLaw;

/// Exact law of (G_n, D_n) given at least two clusters, as `law[g][d]`.
///
/// Given no winding or covering loop, closed edges (indexed by left endpoint
/// label − 1) are the renewal R of the loops avoiding 1, conditioned to hit
/// N = n − 1, minus the edges opened by the loops through 1: indices
/// [0, B) and (N − A, N]. So D_n = min R ∩ [B, N−A], G_n = N − max of it.
pub fn gd_finite_law(model: &CircleModel) -> Result<Vec<Vec<f64>>> {
    let n = model.n();
    if n < 3 {
        return Err(param("gd_finite_law needs n >= 3"));
    }
    let law = RenewalLaw::for_model(model)?;
    let big_n = law.horizon;
    let (c, w) = (law.c(), law.w());

    // P[A = a, B = b] by differencing the joint cdf
    let cdf = |a: isize, b: isize| -> Result<f64> {
        if a < 0 || b < 0 {
            Ok(0.0)
        } else {
            ab_cdf(model, a as usize, b as usize)
        }
    };
    let mut pab = vec![vec![0.0; big_n + 1]; big_n + 1];
    for a in 0..=big_n as isize {
        for b in 0..=big_n as isize {
            pab[a as usize][b as usize] = cdf(a, b)? - cdf(a - 1, b)? - cdf(a, b - 1)? + cdf(a - 1, b - 1)?;
        }
    }
    // first[b][d] = P[first renewal ≥ b is d] (unnormalised by the target)
    let mut first = vec![vec![0.0; big_n + 1]; big_n + 1];
    first[0][0] = 1.0;
    for b in 1..=big_n {
        for d in b..=big_n {
            first[b][d] = (0..b).map(|u| c[u] * w[d - u]).sum();
        }
    }
    // t[a][d] = Σ_b P[A=a, B=b] first[b][d]
    let mut t = vec![vec![0.0; big_n + 1]; big_n + 1];
    for a in 0..=big_n {
        for b in 0..=big_n {
            let p = pab[a][b];
            if p == 0.0 {
                continue;
            }
            for d in b..=big_n {
                t[a][d] += p * first[b][d];
            }
        }
    }
    // by reversibility, P[last renewal ≤ N−a is N−g, then reach N] = first[a][g]
    let mut out = vec![vec![0.0; big_n + 1]; big_n + 1];
    let mut total = 0.0;
    for g in 0..big_n {
        for d in 0..big_n - g {
            let s: f64 = (0..=big_n).map(|a| t[a][d] * first[a][g]).sum();
            let v = s * c[big_n - g - d] / c[big_n];
            out[g][d] = v;
            total += v;
        }
    }
    for row in &mut out {
        for v in row.iter_mut() {
            *v /= total;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytics::edge_configuration_law;

    #[test]
    fn matches_configuration_law() {
        // brute force from the exact edge-configuration law on small circles
        for &(n, p, c, alpha) in &[(7, 0.5, 0.05, 0.6), (9, 0.45, 0.1, 0.4)] {
            let m = CircleModel::new(n, p, c, alpha).unwrap();
            let conf = edge_configuration_law(&m).unwrap();
            let mut want = vec![vec![0.0; n]; n];
            let mut total = 0.0;
            for (mask, &pr) in conf.iter().enumerate() {
                let closed: Vec<usize> = (0..n).filter(|e| mask >> e & 1 == 0).collect();
                if closed.len() < 2 {
                    continue;
                }
                let (d, g) = (closed[0], n - 1 - closed[closed.len() - 1]);
                want[g][d] += pr;
                total += pr;
            }
            let got = gd_finite_law(&m).unwrap();
            for g in 0..n - 1 {
                for d in 0..n - 1 {
                    let w = want[g][d] / total;
                    assert!((got[g][d] - w).abs() < 1e-12, "n={n} g={g} d={d}: {} {w}", got[g][d]);
                }
            }
        }
    }
}
