use rayon::prelude::*;
use serde_json::{json, Value};

use crate::analytics::{
    gd_limit_cell_mass, jk_joint_cdf, jk_joint_cdf_limit, prob_edge_closed, prob_no_winding_or_covering,
    prob_not_single_partition_limit,
};
use crate::circle::CircleModel;
use crate::error::Result;
use crate::numerics::stats::{binomial_z, chi_squared_gof, chi_squared_homogeneity, hausdorff, ks_two_sample, mean_se};
use crate::rng::{tag_of, SeedRecord};
use crate::scaling::{gd_finite_law, reversal_pair, sample_bridge_path, sample_limit_cluster_set, RenewalLaw};
use crate::soup::{conditional_experiment, Condition, ConditionalSummary};

use super::config::{ExperimentConfig, ExperimentKind, ScheduleEntry};
use super::report::{Check, ExperimentOutput, ExperimentReport, SummaryRow};

/// Grid fractions for the (J, K) cdf comparisons.
const JK_GRID: [f64; 5] = [0.05, 0.1, 0.2, 0.3, 0.45];
/// Side of the (G, D) histogram on the unit square (cells with i + j < GD_BINS).
const GD_BINS: usize = 6;

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    cfg.validate()?;
    match cfg.experiment {
        ExperimentKind::EdgeAudit => run_edge_audit(cfg),
        ExperimentKind::SinglePartition => run_single_partition(cfg),
        ExperimentKind::ClusterScaling => run_cluster_scaling(cfg),
        ExperimentKind::LoopsThroughOne => run_loops_through_one(cfg),
        ExperimentKind::ConditionedRenewal => run_conditioned_renewal(cfg),
    }
}

fn seed_for(cfg: &ExperimentConfig, n: usize, stream: u64) -> SeedRecord {
    SeedRecord::new(cfg.seed).with_tag(tag_of(&[cfg.experiment.code(), n as u64, stream]))
}

fn soup_run(cfg: &ExperimentConfig, e: &ScheduleEntry, condition: Condition) -> Result<(CircleModel, ConditionalSummary)> {
    let model = e.model(cfg.alpha)?;
    let s = conditional_experiment(&model, seed_for(cfg, e.n, 0), condition, cfg.replicates)?;
    Ok((model, s))
}

fn push_records(out: &mut Vec<Value>, s: &ConditionalSummary) {
    for r in &s.records {
        let mut v = json!(r);
        v["n"] = json!(s.n);
        out.push(v);
    }
}

fn binomial_se(p: f64, trials: u64) -> f64 {
    (p * (1.0 - p) / trials as f64).sqrt()
}

/// Per-edge closure frequencies against exp(−α · mass of loops crossing the edge).
pub fn run_edge_audit(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    let (mut checks, mut rows, mut reps) = (Vec::new(), Vec::new(), Vec::new());
    for e in &cfg.schedule {
        let (model, s) = soup_run(cfg, e, Condition::Unconditioned)?;
        let n = e.n;
        let mut counts = vec![0u64; n];
        for r in &s.records {
            for &x in &r.closed {
                counts[x - 1] += 1;
            }
        }
        let mut zmax = 0.0f64;
        for x in 1..=n {
            let p = prob_edge_closed(&model, x)?;
            let z = binomial_z(counts[x - 1], cfg.replicates, p);
            zmax = zmax.max(z.abs());
            let phat = counts[x - 1] as f64 / cfg.replicates as f64;
            rows.push(SummaryRow::new(n, format!("edge_closed_{x}"), phat).reference(p).se(binomial_se(p, cfg.replicates)));
        }
        rows.push(SummaryRow::new(n, "max_abs_z", zmax));
        checks.push(Check::below(format!("n={n}: max |z| of edge closure"), zmax, cfg.tolerances.z_max));
        push_records(&mut reps, &s);
    }
    Ok(ExperimentOutput { report: ExperimentReport::new(cfg.clone(), checks, rows), replicates: reps })
}

/// Cells (i, j), i + j < GD_BINS, of the (G, D) histogram and their limit masses.
fn gd_cells(kappa: f64, alpha: f64) -> Result<(Vec<(usize, usize)>, Vec<f64>)> {
    let h = 1.0 / GD_BINS as f64;
    let mut cells = Vec::new();
    let mut probs = Vec::new();
    for i in 0..GD_BINS {
        for j in 0..GD_BINS - i {
            cells.push((i, j));
            let (x0, y0) = (i as f64 * h, j as f64 * h);
            probs.push(gd_limit_cell_mass(kappa, alpha, x0, x0 + h, y0, y0 + h)?);
        }
    }
    Ok((cells, probs))
}

/// Histogram cell of ((G + ½)/n, (D + ½)/n); G + D ≤ n − 2 keeps it in the simplex.
fn gd_cell(n: usize, g: usize, d: usize) -> (usize, usize) {
    let bin = |v: usize| (((v as f64 + 0.5) / n as f64) * GD_BINS as f64) as usize;
    (bin(g), bin(d))
}

/// P[not a single cluster] per n against its limit, and the (G, D) histogram
/// at the largest n against the limit density.
pub fn run_single_partition(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    let (kappa, eps, alpha) = (cfg.kappa.unwrap(), cfg.epsilon.unwrap(), cfg.alpha);
    let tol = &cfg.tolerances;
    let limit = prob_not_single_partition_limit(kappa, eps, alpha)?;
    let n_max = cfg.max_n();
    let (mut checks, mut rows, mut reps) = (Vec::new(), Vec::new(), Vec::new());
    for e in &cfg.schedule {
        let (s_model, s) = soup_run(cfg, e, Condition::Unconditioned)?;
        let n = e.n;
        let f = 1.0 - s.fraction_single_partition();
        let se = binomial_se(f, cfg.replicates);
        rows.push(SummaryRow::new(n, "p_not_single_partition", f).reference(limit).se(se));
        rows.push(SummaryRow::new(n, "gap", (f - limit).abs()));
        if n == n_max {
            let allowance = tol.discretization_allowance + tol.se_multiplier * se;
            checks.push(Check::below(format!("n={n}: |P[not single] - limit|"), (f - limit).abs(), allowance));
            if alpha < 1.0 {
                let (cells, probs) = gd_cells(kappa, alpha)?;
                let mut counts = vec![0u64; cells.len()];
                for r in &s.records {
                    if let (Some(g), Some(d)) = (r.g, r.d) {
                        let c = gd_cell(n, g, d);
                        counts[cells.iter().position(|&x| x == c).unwrap()] += 1;
                    }
                }
                let total: u64 = counts.iter().sum();
                for (c, (&(i, j), &p)) in cells.iter().zip(&probs).enumerate() {
                    rows.push(SummaryRow::new(n, format!("gd_cell_{i}_{j}"), counts[c] as f64 / total.max(1) as f64).reference(p));
                }
                let test = chi_squared_gof(&counts, &probs, tol.min_expected);
                rows.push(SummaryRow::new(n, "gd_chi2_statistic", test.statistic));
                rows.push(SummaryRow::new(n, "gd_chi2_dof", test.dof as f64));
                checks.push(Check::above(format!("n={n}: (G, D) histogram vs limit density, chi-squared p"), test.p_value, tol.gd_chi2_p));

                // the same histogram against the exact finite-n law separates
                // sampling error from the distance to the limit
                let exact = gd_finite_law(&s_model)?;
                let mut finite = vec![0.0; cells.len()];
                for (g, row) in exact.iter().enumerate() {
                    for (d, &p) in row.iter().enumerate() {
                        if p > 0.0 {
                            let c = gd_cell(n, g, d);
                            finite[cells.iter().position(|&x| x == c).unwrap()] += p;
                        }
                    }
                }
                let tv = 0.5 * finite.iter().zip(&probs).map(|(a, b)| (a - b).abs()).sum::<f64>();
                rows.push(SummaryRow::new(n, "gd_tv_exact_finite_vs_limit", tv));
                let test = chi_squared_gof(&counts, &finite, tol.min_expected);
                rows.push(SummaryRow::new(n, "gd_finite_chi2_p", test.p_value));
                checks.push(Check::above(format!("n={n}: (G, D) histogram vs exact finite-n law, chi-squared p"), test.p_value, tol.gd_chi2_p));
            }
        }
        push_records(&mut reps, &s);
    }
    Ok(ExperimentOutput { report: ExperimentReport::new(cfg.clone(), checks, rows), replicates: reps })
}

/// Under "no loop avoiding 1": the exact (J_n, K_n) cdf and P[no winding or
/// covering loop] against Monte Carlo, and the (J/n, K/n) cdf against its
/// limit at the largest n.
pub fn run_loops_through_one(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    let (kappa, eps, alpha) = (cfg.kappa.unwrap(), cfg.epsilon.unwrap(), cfg.alpha);
    let tol = &cfg.tolerances;
    let n_max = cfg.max_n();
    let trials = cfg.replicates;
    let (mut checks, mut rows, mut reps) = (Vec::new(), Vec::new(), Vec::new());
    for e in &cfg.schedule {
        let (model, s) = soup_run(cfg, e, Condition::NoO1)?;
        let n = e.n;
        let p = prob_no_winding_or_covering(&model);
        let hits = s.records.iter().filter(|r| r.type_counts[1] == 0 && r.type_counts[3] == 0).count() as u64;
        let z = binomial_z(hits, trials, p);
        rows.push(SummaryRow::new(n, "p_no_winding_or_covering", hits as f64 / trials as f64).reference(p).se(binomial_se(p, trials)));
        checks.push(Check::below(format!("n={n}: |z| of P[no winding or covering]"), z.abs(), tol.se_multiplier));

        let jk: Vec<(usize, usize)> = s.records.iter().filter_map(|r| r.j.zip(r.k)).collect();
        let grid: Vec<usize> = JK_GRID.iter().map(|f| (f * (n - 2) as f64) as usize).collect();
        let mut zmax = 0.0f64;
        for &m in &grid {
            for &big_m in &grid {
                let exact = jk_joint_cdf(&model, m, big_m)?;
                let hits = jk.iter().filter(|&&(j, k)| j <= m && k <= big_m).count() as u64;
                let z = binomial_z(hits, trials, exact);
                zmax = zmax.max(z.abs());
                rows.push(
                    SummaryRow::new(n, format!("jk_cdf_{m}_{big_m}"), hits as f64 / trials as f64)
                        .reference(exact)
                        .se(binomial_se(exact, trials)),
                );
            }
        }
        checks.push(Check::below(format!("n={n}: max |z| of the (J, K) cdf grid"), zmax, tol.se_multiplier));

        if n == n_max {
            let mut gap = 0.0f64;
            for &a in &JK_GRID {
                for &b in &JK_GRID {
                    let lim = jk_joint_cdf_limit(kappa, eps, alpha, a, b)?;
                    let hits = jk.iter().filter(|&&(j, k)| j as f64 <= a * n as f64 && k as f64 <= b * n as f64).count();
                    gap = gap.max((hits as f64 / trials as f64 - lim).abs());
                }
            }
            rows.push(SummaryRow::new(n, "jk_limit_max_gap", gap));
            checks.push(Check::below(format!("n={n}: sup gap of the (J/n, K/n) cdf to its limit"), gap, tol.jk_limit_gap));
        }
        push_records(&mut reps, &s);
    }
    Ok(ExperimentOutput { report: ExperimentReport::new(cfg.clone(), checks, rows), replicates: reps })
}

/// Two comparisons per n.
///
/// Under "no loop through 1" the closed edges (x ↦ (x − 1)/(n − 1)) form the
/// conditioned renewal from 0 to n − 1: k_n/n^{1−α} must be stable across n,
/// and the scaled sets are compared with bridge ranges.
///
/// Unconditioned, given more than one cluster, (1/n)·{closed left endpoints}
/// is compared with G + (1 − G − D)·R, (G, D) from the limit law and R a
/// bridge range at killing κ(1 − G − D)².
pub fn run_cluster_scaling(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    let (kappa, alpha) = (cfg.kappa.unwrap(), cfg.alpha);
    let tol = &cfg.tolerances;
    let n_max = cfg.max_n();
    let (mut checks, mut rows, mut reps) = (Vec::new(), Vec::new(), Vec::new());

    let res = cfg.bridge_resolution;
    let law = RenewalLaw::scaled(alpha, kappa, res)?;
    let paths = cfg.bridge_paths.unwrap_or(cfg.replicates);
    let bseed = seed_for(cfg, res, 1);
    let bridges: Vec<Vec<f64>> = (0..paths)
        .into_par_iter()
        .map(|i| sample_bridge_path(&law, &mut bseed.replicate(i).rng()))
        .collect::<Result<_>>()?;
    let lseed = seed_for(cfg, res, 2);
    let limit_sets: Vec<Vec<f64>> = (0..paths)
        .into_par_iter()
        .map(|i| sample_limit_cluster_set(&law, kappa, &mut lseed.replicate(i).rng()))
        .collect::<Result<_>>()?;

    let off_target = bridges.iter().filter(|b| *b.last().unwrap() != 1.0).count();
    rows.push(SummaryRow::new(res, "bridge_paths_not_ending_at_1", off_target as f64));
    checks.push(Check::below("bridge paths not ending exactly at 1", off_target as f64, 0.5));
    let bridge_scale = ((res + 1) as f64).powf(1.0 - alpha);
    let bridge_k: Vec<f64> = bridges.iter().map(|b| b.len() as f64 / bridge_scale).collect();
    let (bk_mean, bk_se) = mean_se(&bridge_k);
    rows.push(SummaryRow::new(res, "bridge_k_scaled_mean", bk_mean).se(bk_se));
    let (fwd, bwd): (Vec<f64>, Vec<f64>) = bridges.iter().map(|b| reversal_pair(b)).unzip();
    let reversal = ks_two_sample(&fwd, &bwd);
    rows.push(SummaryRow::new(res, "bridge_time_reversal_ks", reversal));
    checks.push(Check::below("bridge time-reversal KS at the middle jump", reversal, tol.reversal_ks));
    let limit_left: Vec<f64> = limit_sets.iter().map(|s| s[0]).collect();

    let mut per_n = Vec::new();
    for e in &cfg.schedule {
        let n = e.n;
        let (_, s) = soup_run(cfg, e, Condition::NoO2O3O4)?;
        let big_n = (n - 1) as f64;
        let sets: Vec<Vec<f64>> = s.records.iter().map(|r| r.closed.iter().map(|&x| (x - 1) as f64 / big_n).collect()).collect();
        let ks: Vec<f64> = s.records.iter().map(|r| r.k_n as f64 / (n as f64).powf(1.0 - alpha)).collect();
        let (mean, se) = mean_se(&ks);
        rows.push(SummaryRow::new(n, "k_scaled_mean", mean).reference(bk_mean).se(se));
        rows.push(SummaryRow::new(n, "ks_k_scaled_vs_bridge", ks_two_sample(&ks, &bridge_k)));
        rows.push(SummaryRow::new(n, "mean_hausdorff_vs_bridge", matched_hausdorff(&sets, &bridges, largest_gap_mid)));
        per_n.push((n, mean, ks));
        push_records(&mut reps, &s);

        let model = e.model(alpha)?;
        let u = conditional_experiment(&model, seed_for(cfg, n, 3), Condition::Unconditioned, cfg.replicates)?;
        let sets: Vec<Vec<f64>> = u
            .records
            .iter()
            .filter(|r| r.k_n >= 2)
            .map(|r| r.closed.iter().map(|&x| x as f64 / n as f64).collect())
            .collect();
        let left: Vec<f64> = sets.iter().map(|s| s[0]).collect();
        rows.push(SummaryRow::new(n, "ks_leftmost_vs_limit", ks_two_sample(&left, &limit_left)));
        rows.push(SummaryRow::new(n, "mean_hausdorff_vs_limit", matched_hausdorff(&sets, &limit_sets, |s| s[0])));
    }
    let (_, ref_mean, ref_ks) = per_n.iter().find(|p| p.0 == n_max).cloned().unwrap();
    let mut dev = 0.0f64;
    for (n, mean, ks) in &per_n {
        dev = dev.max((mean / ref_mean - 1.0).abs());
        rows.push(SummaryRow::new(*n, "ks_k_scaled_vs_largest_n", ks_two_sample(ks, &ref_ks)));
    }
    rows.push(SummaryRow::new(n_max, "k_scaled_max_rel_dev", dev));
    checks.push(Check::below("k_n/n^(1-alpha) mean stability across n", dev, tol.stability));
    Ok(ExperimentOutput { report: ExperimentReport::new(cfg.clone(), checks, rows), replicates: reps })
}

/// Midpoint of the largest gap of a sorted set.
fn largest_gap_mid(s: &[f64]) -> f64 {
    s.windows(2).max_by(|a, b| (a[1] - a[0]).total_cmp(&(b[1] - b[0]))).map_or(s[0], |w| 0.5 * (w[0] + w[1]))
}

/// Mean Hausdorff distance after pairing the two samples by the quantile
/// rank of `key`.
fn matched_hausdorff<K: Fn(&[f64]) -> f64>(a: &[Vec<f64>], b: &[Vec<f64>], key: K) -> f64 {
    if a.is_empty() || b.is_empty() {
        return f64::NAN;
    }
    let order = |s: &[Vec<f64>]| {
        let keys: Vec<f64> = s.iter().map(|x| key(x)).collect();
        let mut idx: Vec<usize> = (0..s.len()).collect();
        idx.sort_by(|&i, &j| keys[i].total_cmp(&keys[j]));
        idx
    };
    let (oa, ob) = (order(a), order(b));
    let total: f64 = oa
        .iter()
        .enumerate()
        .map(|(rank, &i)| hausdorff(&a[i], &b[ob[rank * ob.len() / oa.len()]]))
        .sum();
    total / a.len() as f64
}

/// First jump of the closed-edge renewal of the soup avoiding vertex 1
/// against w(j)C(N−j)/C(N) and against direct conditioned-renewal samples.
pub fn run_conditioned_renewal(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    let tol = &cfg.tolerances;
    let (mut checks, mut rows, mut reps) = (Vec::new(), Vec::new(), Vec::new());
    for e in &cfg.schedule {
        let (model, s) = soup_run(cfg, e, Condition::NoO2O3O4)?;
        let n = e.n;
        let law = RenewalLaw::for_model(&model)?;
        let big_n = law.horizon;
        let pmf = law.conditioned_jump_pmf(big_n);

        let mut soup = vec![0u64; big_n + 1];
        for r in &s.records {
            soup[r.closed[1] - 1] += 1;
        }
        let rseed = seed_for(cfg, n, 2);
        let paths: Vec<Vec<usize>> = (0..cfg.replicates)
            .into_par_iter()
            .map(|i| law.sample_conditioned(&mut rseed.replicate(i).rng(), big_n))
            .collect::<Result<_>>()?;
        let mut renewal = vec![0u64; big_n + 1];
        let mut misses = 0u64;
        for p in &paths {
            renewal[p[1]] += 1;
            misses += (*p.last().unwrap() != big_n) as u64;
        }
        for j in 1..=big_n {
            if pmf[j] * cfg.replicates as f64 >= 1.0 || soup[j] > 0 {
                rows.push(SummaryRow::new(n, format!("first_jump_{j}"), soup[j] as f64 / cfg.replicates as f64).reference(pmf[j]));
            }
        }
        let gof = chi_squared_gof(&soup[1..], &pmf[1..], tol.min_expected);
        let homog = chi_squared_homogeneity(&soup[1..], &renewal[1..], tol.min_expected);
        rows.push(SummaryRow::new(n, "soup_vs_pmf_chi2_p", gof.p_value));
        rows.push(SummaryRow::new(n, "soup_vs_renewal_chi2_p", homog.p_value));
        rows.push(SummaryRow::new(n, "renewal_paths_missing_target", misses as f64));
        checks.push(Check::above(format!("n={n}: soup first jump vs w(j)C(N-j)/C(N), chi-squared p"), gof.p_value, tol.renewal_chi2_p));
        checks.push(Check::below(format!("n={n}: conditioned paths not ending at N"), misses as f64, 0.5));
        push_records(&mut reps, &s);
    }
    Ok(ExperimentOutput { report: ExperimentReport::new(cfg.clone(), checks, rows), replicates: reps })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(kind: ExperimentKind) -> ExperimentConfig {
        let mut cfg = ExperimentConfig::preset(kind);
        cfg.replicates = 2000;
        cfg
    }

    #[test]
    fn edge_audit_alpha_zero_closes_everything() {
        let mut cfg = small(ExperimentKind::EdgeAudit);
        cfg.alpha = 0.0;
        cfg.replicates = 50;
        let out = run_experiment(&cfg).unwrap();
        assert!(out.report.passed);
        assert!(out.report.rows.iter().filter(|r| r.metric.starts_with("edge_closed_")).all(|r| r.value == 1.0));
    }

    #[test]
    fn report_round_trips_and_is_reproducible() {
        let cfg = small(ExperimentKind::EdgeAudit);
        let a = run_experiment(&cfg).unwrap();
        let b = run_experiment(&cfg).unwrap();
        let text = serde_json::to_string(&a.report).unwrap();
        assert_eq!(text, serde_json::to_string(&b.report).unwrap());
        let back: ExperimentReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, a.report);
        assert_eq!(a.replicates.len(), 2000);
    }

    #[test]
    fn supercritical_alpha_gives_single_partition() {
        let mut cfg = small(ExperimentKind::SinglePartition);
        cfg.alpha = 1.2;
        let out = run_experiment(&cfg).unwrap();
        let last = out.report.rows.iter().rfind(|r| r.metric == "p_not_single_partition").unwrap();
        assert!(last.value < 0.1, "{}", last.value);
        assert_eq!(last.reference, Some(0.0));
    }

    #[test]
    fn writes_all_outputs() {
        let cfg = small(ExperimentKind::ConditionedRenewal);
        let out = run_experiment(&cfg).unwrap();
        let dir = std::env::temp_dir().join(format!("loopsoup-test-{}", std::process::id()));
        out.write_to(&dir).unwrap();
        for f in ["config.json", "replicates.jsonl", "summary.csv", "report.json"] {
            assert!(dir.join(f).is_file(), "{f}");
        }
        let lines = std::fs::read_to_string(dir.join("replicates.jsonl")).unwrap();
        assert_eq!(lines.lines().count(), 2000);
        let cfg_back = ExperimentConfig::load(&dir.join("config.json")).unwrap();
        assert_eq!(cfg_back, cfg);
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
