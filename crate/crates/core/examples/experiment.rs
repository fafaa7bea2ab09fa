//! A reduced experiment run: preset config, checks, and the output files.

use loopsoup::experiment::{run_experiment, ExperimentConfig, ExperimentKind};

fn main() -> loopsoup::Result<()> {
    let mut cfg = ExperimentConfig::preset(ExperimentKind::ConditionedRenewal);
    cfg.replicates = 2_000;
    let out = run_experiment(&cfg)?;
    for c in &out.report.checks {
        println!("{} {}: {:.4} (threshold {})", if c.passed { "PASS" } else { "FAIL" }, c.name, c.value, c.threshold);
    }
    let dir = std::env::temp_dir().join("loopsoup-example");
    out.write_to(&dir)?;
    println!("wrote config.json, replicates.jsonl, summary.csv, report.json to {}", dir.display());
    Ok(())
}
