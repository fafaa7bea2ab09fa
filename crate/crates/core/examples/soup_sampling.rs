//! Exact soup samples and their cluster structure, single and in bulk.

use loopsoup::rng::SeedRecord;
use loopsoup::soup::{conditional_experiment, extract_clusters, sample_soup, sample_soup_conditioned, Condition};
use loopsoup::CircleModel;

fn main() -> loopsoup::Result<()> {
    let model = CircleModel::scaled(40, 1.0, 0.5, 0.5)?;
    let sample = sample_soup(&model, SeedRecord::new(7))?;
    let stats = extract_clusters(&model, &sample);
    println!("{} loops, {} clusters, types O1..O4 = {:?}", sample.len(), stats.k_n, stats.type_counts);
    println!("closed edges {:?}", stats.closed_left_endpoints);
    println!("G={:?} D={:?}", stats.g, stats.d);

    let through = sample_soup_conditioned(&model, SeedRecord::new(8), Condition::NoO1, true)?;
    for l in through.classes().unwrap_or_default().iter().take(3) {
        let labels = l.labels();
        println!("loop through 1: length {}, starts {:?}", labels.len(), &labels[..labels.len().min(8)]);
    }

    let summary = conditional_experiment(&model, SeedRecord::new(9), Condition::NoO2O3O4, 5_000)?;
    println!(
        "no loop through 1: P[single partition] ≈ {:.4}, mean clusters {:.3}",
        summary.fraction_single_partition(),
        summary.mean_k
    );
    Ok(())
}
