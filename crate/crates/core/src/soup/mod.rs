//! Exact Poisson sampling of the loop soup and its cluster statistics.

mod clusters;
mod experiment;
mod sampler;

pub use clusters::{cluster_stats, extract_clusters, ClusterAccumulator, ClusterStats};
pub use experiment::{conditional_experiment, ConditionalSummary, ReplicateRecord};
pub use sampler::{log_series, sample_soup, sample_soup_conditioned, Condition, LoopRecord, SoupSample, SoupSampler};
