use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circle::CircleModel;
use crate::error::Result;
use crate::rng::SeedRecord;

use super::clusters::ClusterAccumulator;
use super::sampler::{Condition, SoupSampler};

/// Per-replicate output of a soup run (one JSON line each).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplicateRecord {
    pub replicate: u64,
    pub loops: u64,
    pub k_n: usize,
    pub g: Option<usize>,
    pub d: Option<usize>,
    pub j: Option<usize>,
    pub k: Option<usize>,
    pub a: u64,
    pub b: u64,
    pub type_counts: [u64; 4],
    pub open_mask: Option<u64>,
    pub closed: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConditionalSummary {
    pub n: usize,
    pub condition: Condition,
    pub replicates: u64,
    pub single_partition: u64,
    pub mean_loops: f64,
    pub mean_k: f64,
    pub records: Vec<ReplicateRecord>,
}

impl ConditionalSummary {
    pub fn fraction_single_partition(&self) -> f64 {
        self.single_partition as f64 / self.replicates as f64
    }
}

/// Runs `replicates` independent soups under `condition`. Conditioning is
/// exact: the excluded sub-soups are independent Poisson processes and are
/// simply not sampled. Replicate r uses stream `seed.replicate(r)`.
pub fn conditional_experiment(model: &CircleModel, seed: SeedRecord, condition: Condition, replicates: u64) -> Result<ConditionalSummary> {
    let sampler = SoupSampler::new(model)?;
    let n = model.n();
    let records: Vec<ReplicateRecord> = (0..replicates)
        .into_par_iter()
        .map(|r| {
            let mut rng = seed.replicate(r).rng();
            let loops = sampler.sample(&mut rng, condition, false);
            let mut acc = ClusterAccumulator::new(n);
            for l in &loops {
                acc.add(&l.footprint);
            }
            let s = acc.finish();
            ReplicateRecord {
                replicate: r,
                loops: loops.len() as u64,
                k_n: s.k_n,
                g: s.g,
                d: s.d,
                j: s.j,
                k: s.k,
                a: s.a,
                b: s.b,
                type_counts: s.type_counts,
                open_mask: (n <= 64).then(|| s.open_mask()),
                closed: s.closed_left_endpoints,
            }
        })
        .collect();
    let reps = replicates.max(1) as f64;
    Ok(ConditionalSummary {
        n,
        condition,
        replicates,
        single_partition: records.iter().filter(|r| r.k_n == 1).count() as u64,
        mean_loops: records.iter().map(|r| r.loops as f64).sum::<f64>() / reps,
        mean_k: records.iter().map(|r| r.k_n as f64).sum::<f64>() / reps,
        records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytics::{mass_through_vertex1, prob_edge_closed};
    use crate::numerics::stats::binomial_z;

    #[test]
    fn edge_closure_matches_formula() {
        let m = CircleModel::new(12, 0.55, 0.4, 0.7).unwrap();
        let reps = 20_000;
        let s = conditional_experiment(&m, SeedRecord::new(2024), Condition::Unconditioned, reps).unwrap();
        for e in 0..12 {
            let closed = s.records.iter().filter(|r| r.open_mask.unwrap() >> e & 1 == 0).count() as u64;
            let z = binomial_z(closed, reps, prob_edge_closed(&m, e + 1).unwrap());
            assert!(z.abs() < 4.0, "edge {e}: z={z}");
        }
        let none_through_1 = s.records.iter().filter(|r| r.type_counts[1..].iter().all(|&c| c == 0)).count() as u64;
        let z = binomial_z(none_through_1, reps, (-0.7 * mass_through_vertex1(&m)).exp());
        assert!(z.abs() < 4.0, "z={z}");
    }

    #[test]
    fn single_partition_grows_with_alpha() {
        let base = CircleModel::scaled(40, 1.0, 0.5, 0.3).unwrap();
        let lo = conditional_experiment(&base, SeedRecord::new(5), Condition::Unconditioned, 2000).unwrap();
        let hi = conditional_experiment(&base.with_alpha(1.5).unwrap(), SeedRecord::new(5), Condition::Unconditioned, 2000).unwrap();
        assert!(hi.fraction_single_partition() > lo.fraction_single_partition() + 0.1);
    }
}
