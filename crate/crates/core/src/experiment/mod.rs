//! Config-driven experiments. Each run produces a report with named
//! pass/fail checks (thresholds come from the config) and writes
//! config.json, replicates.jsonl, summary.csv and report.json.

mod config;
mod report;
mod runners;

pub use config::{ExperimentConfig, ExperimentKind, ScheduleEntry, Tolerances};
pub use report::{Check, ExperimentOutput, ExperimentReport, SummaryRow};
pub use runners::{
    run_cluster_scaling, run_conditioned_renewal, run_edge_audit, run_experiment, run_loops_through_one,
    run_single_partition,
};
