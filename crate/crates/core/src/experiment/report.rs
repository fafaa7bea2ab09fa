use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::config::ExperimentConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub passed: bool,
}

impl Check {
    /// Passes when value < threshold.
    pub fn below(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Check { name: name.into(), value, threshold, passed: value < threshold }
    }

    /// Passes when value > threshold.
    pub fn above(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Check { name: name.into(), value, threshold, passed: value > threshold }
    }
}

/// One line of summary.csv.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub n: usize,
    pub metric: String,
    pub value: f64,
    pub reference: Option<f64>,
    pub se: Option<f64>,
}

impl SummaryRow {
    pub fn new(n: usize, metric: impl Into<String>, value: f64) -> Self {
        SummaryRow { n, metric: metric.into(), value, reference: None, se: None }
    }
    pub fn reference(mut self, r: f64) -> Self {
        self.reference = Some(r);
        self
    }
    pub fn se(mut self, se: f64) -> Self {
        self.se = Some(se);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub checks: Vec<Check>,
    pub rows: Vec<SummaryRow>,
    pub passed: bool,
}

impl ExperimentReport {
    pub fn new(config: ExperimentConfig, checks: Vec<Check>, rows: Vec<SummaryRow>) -> Self {
        let passed = checks.iter().all(|c| c.passed);
        ExperimentReport { config, checks, rows, passed }
    }

    pub fn summary_csv(&self) -> String {
        let mut s = String::from("n,metric,value,reference,se\n");
        let opt = |x: Option<f64>| x.map(|v| format!("{v:e}")).unwrap_or_default();
        for r in &self.rows {
            let _ = writeln!(s, "{},{},{:e},{},{}", r.n, r.metric, r.value, opt(r.reference), opt(r.se));
        }
        s
    }
}

/// A report plus the raw per-replicate records.
#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub report: ExperimentReport,
    pub replicates: Vec<serde_json::Value>,
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|source| Error::Io { path: path.to_owned(), source })
}

fn to_json<T: Serialize>(path: &Path, v: &T, pretty: bool) -> Result<String> {
    let r = if pretty { serde_json::to_string_pretty(v) } else { serde_json::to_string(v) };
    r.map_err(|source| Error::Json { path: path.to_owned(), source })
}

impl ExperimentOutput {
    /// Writes config.json, replicates.jsonl, summary.csv and report.json.
    pub fn write_to(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir).map_err(|source| Error::Io { path: dir.to_owned(), source })?;
        let p = dir.join("config.json");
        write(&p, &to_json(&p, &self.report.config, true)?)?;
        let p = dir.join("replicates.jsonl");
        let mut lines = String::new();
        for v in &self.replicates {
            lines.push_str(&to_json(&p, v, false)?);
            lines.push('\n');
        }
        write(&p, &lines)?;
        write(&dir.join("summary.csv"), &self.report.summary_csv())?;
        let p = dir.join("report.json");
        write(&p, &to_json(&p, &self.report, true)?)
    }
}
