use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::circle::CircleModel;
use crate::error::{param, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    /// per-edge closure frequencies against exp(−α μ(crossing))
    EdgeAudit,
    /// P[not a single cluster] and the (G, D) law against their limits
    SinglePartition,
    /// k_n/n^{1−α} and the scaled closed-edge set against bridge ranges
    ClusterScaling,
    /// (J, K) and the no-winding probability under "no loop avoiding 1"
    LoopsThroughOne,
    /// closed edges of the soup avoiding 1 against the conditioned renewal
    ConditionedRenewal,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 5] = [
        ExperimentKind::EdgeAudit,
        ExperimentKind::SinglePartition,
        ExperimentKind::ClusterScaling,
        ExperimentKind::LoopsThroughOne,
        ExperimentKind::ConditionedRenewal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::EdgeAudit => "edge-audit",
            ExperimentKind::SinglePartition => "single-partition",
            ExperimentKind::ClusterScaling => "cluster-scaling",
            ExperimentKind::LoopsThroughOne => "loops-through-one",
            ExperimentKind::ConditionedRenewal => "conditioned-renewal",
        }
    }

    pub(crate) fn code(self) -> u64 {
        ExperimentKind::ALL.iter().position(|&k| k == self).unwrap() as u64 + 1
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ExperimentKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| param(format!("unknown experiment '{s}'")))
    }
}

/// One model of the schedule; α is shared by the whole experiment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScheduleEntry {
    pub n: usize,
    pub p: f64,
    pub c: f64,
}

impl ScheduleEntry {
    /// The entry with n²κ^(n) = κ and n²c = ε.
    pub fn scaled(n: usize, kappa: f64, epsilon: f64) -> Result<Self> {
        let m = CircleModel::scaled(n, kappa, epsilon, 1.0)?;
        Ok(ScheduleEntry { n, p: m.p(), c: m.c() })
    }

    /// p = 1/2, c = κ/(2n²): κ^(n) = 2c, so ε = κ/2.
    pub fn symmetric(n: usize, kappa: f64) -> Self {
        ScheduleEntry { n, p: 0.5, c: kappa / (2.0 * (n * n) as f64) }
    }

    pub fn model(&self, alpha: f64) -> Result<CircleModel> {
        CircleModel::new(self.n, self.p, self.c, alpha)
    }
}

/// Pass/fail thresholds. Every check reads its threshold from here.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// per-edge |z| bound in the edge audit
    pub z_max: f64,
    /// s.e. multiple for Monte Carlo vs exact comparisons
    pub se_multiplier: f64,
    /// allowed limit-vs-finite-n gap on top of the s.e. band
    pub discretization_allowance: f64,
    pub gd_chi2_p: f64,
    pub renewal_chi2_p: f64,
    /// max_n |mean_n/mean_{n_max} − 1| for k_n/n^{1−α}
    pub stability: f64,
    /// two-sample KS of the bridge middle-jump position against its reversal
    pub reversal_ks: f64,
    /// sup-gap of the (J/n, K/n) cdf against its limit at the largest n
    pub jk_limit_gap: f64,
    /// relative drift of n²κ^(n), n²c_n from the targets
    pub schedule_drift: f64,
    /// chi-squared bins with smaller expected count are pooled
    pub min_expected: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            z_max: 4.0,
            se_multiplier: 3.0,
            discretization_allowance: 0.02,
            gd_chi2_p: 0.001,
            renewal_chi2_p: 0.01,
            stability: 0.10,
            reversal_ks: 0.02,
            jk_limit_gap: 0.03,
            schedule_drift: 0.05,
            min_expected: 5.0,
        }
    }
}

fn default_bridge_resolution() -> usize {
    100_000
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub schedule: Vec<ScheduleEntry>,
    /// limit targets: n²κ^(n) → kappa, n²c_n → epsilon
    #[serde(default)]
    pub kappa: Option<f64>,
    #[serde(default)]
    pub epsilon: Option<f64>,
    pub alpha: f64,
    pub replicates: u64,
    pub seed: u64,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    #[serde(default)]
    pub tolerances: Tolerances,
    /// internal resolution of bridge paths (cluster-scaling)
    #[serde(default = "default_bridge_resolution")]
    pub bridge_resolution: usize,
    /// bridge paths per run; defaults to `replicates`
    #[serde(default)]
    pub bridge_paths: Option<u64>,
}

impl ExperimentConfig {
    /// Desk-scale defaults for each experiment.
    pub fn preset(kind: ExperimentKind) -> Self {
        let scaled = |ns: &[usize]| ns.iter().map(|&n| ScheduleEntry::scaled(n, 1.0, 0.5).unwrap()).collect();
        let base = ExperimentConfig {
            experiment: kind,
            schedule: Vec::new(),
            kappa: Some(1.0),
            epsilon: Some(0.5),
            alpha: 0.5,
            replicates: 20_000,
            seed: 20_240_601,
            output_dir: None,
            tolerances: Tolerances::default(),
            bridge_resolution: default_bridge_resolution(),
            bridge_paths: None,
        };
        match kind {
            ExperimentKind::EdgeAudit => ExperimentConfig {
                schedule: vec![ScheduleEntry { n: 12, p: 0.55, c: 0.4 }],
                kappa: None,
                epsilon: None,
                alpha: 0.7,
                replicates: 100_000,
                ..base
            },
            ExperimentKind::SinglePartition => ExperimentConfig { schedule: scaled(&[50, 100, 200]), ..base },
            ExperimentKind::ClusterScaling => ExperimentConfig {
                schedule: scaled(&[100, 400, 1600]),
                replicates: 2000,
                bridge_paths: Some(10_000),
                ..base
            },
            ExperimentKind::LoopsThroughOne => ExperimentConfig { schedule: scaled(&[50, 400]), ..base },
            ExperimentKind::ConditionedRenewal => ExperimentConfig { schedule: scaled(&[100]), replicates: 10_000, ..base },
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_owned(), source })?;
        let cfg: ExperimentConfig = serde_json::from_str(&text).map_err(|source| Error::Json { path: path.to_owned(), source })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.schedule.is_empty() {
            return Err(param("schedule is empty"));
        }
        if self.replicates == 0 {
            return Err(param("replicates must be >= 1"));
        }
        for e in &self.schedule {
            let m = e.model(self.alpha)?;
            let nn = (e.n * e.n) as f64;
            let drift = self.tolerances.schedule_drift;
            if let Some(k) = self.kappa {
                if (nn * m.kappa() - k).abs() > drift * k.abs().max(1e-9) {
                    return Err(param(format!("n={}: n²κ^(n) = {} is off the target κ = {k}", e.n, nn * m.kappa())));
                }
            }
            if let Some(eps) = self.epsilon {
                if (nn * e.c - eps).abs() > drift * eps.abs().max(1e-9) {
                    return Err(param(format!("n={}: n²c = {} is off the target ε = {eps}", e.n, nn * e.c)));
                }
            }
        }
        let needs_limit = matches!(
            self.experiment,
            ExperimentKind::SinglePartition | ExperimentKind::ClusterScaling | ExperimentKind::LoopsThroughOne
        );
        if needs_limit && (self.kappa.is_none() || self.epsilon.is_none()) {
            return Err(param(format!("{} needs kappa and epsilon targets", self.experiment)));
        }
        match self.experiment {
            ExperimentKind::SinglePartition if self.schedule.len() < 3 => {
                Err(param("single-partition needs at least 3 values of n"))
            }
            ExperimentKind::SinglePartition if !(self.alpha > 0.0) => Err(param("single-partition needs alpha > 0")),
            ExperimentKind::ClusterScaling if !(self.alpha > 0.0 && self.alpha < 1.0) => {
                Err(param("cluster-scaling needs 0 < alpha < 1"))
            }
            ExperimentKind::ClusterScaling if self.bridge_resolution < 2 => Err(param("bridge_resolution must be >= 2")),
            _ => Ok(()),
        }
    }

    pub fn max_n(&self) -> usize {
        self.schedule.iter().map(|e| e.n).max().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_validate_and_round_trip() {
        for kind in ExperimentKind::ALL {
            let cfg = ExperimentConfig::preset(kind);
            cfg.validate().unwrap();
            let text = serde_json::to_string_pretty(&cfg).unwrap();
            let back: ExperimentConfig = serde_json::from_str(&text).unwrap();
            assert_eq!(back, cfg);
            assert_eq!(kind.name().parse::<ExperimentKind>().unwrap(), kind);
        }
    }

    #[test]
    fn defaults_fill_in() {
        let cfg: ExperimentConfig = serde_json::from_str(
            r#"{"experiment":"edge-audit","schedule":[{"n":6,"p":0.5,"c":0.1}],"alpha":0.0,"replicates":10,"seed":1,
               "tolerances":{"z_max":5.0}}"#,
        )
        .unwrap();
        assert_eq!(cfg.tolerances.z_max, 5.0);
        assert_eq!(cfg.tolerances.se_multiplier, 3.0);
        assert_eq!(cfg.bridge_resolution, 100_000);
        cfg.validate().unwrap();
    }

    #[test]
    fn schedule_drift_is_enforced() {
        let mut cfg = ExperimentConfig::preset(ExperimentKind::SinglePartition);
        cfg.schedule[1].c *= 1.2;
        assert!(cfg.validate().is_err());
        let sym = ScheduleEntry::symmetric(200, 1.0);
        let m = sym.model(0.5).unwrap();
        assert!((m.kappa() * 4e4 - 1.0).abs() < 1e-4);
        assert!((sym.c * 4e4 - 0.5).abs() < 1e-12);
    }
}
