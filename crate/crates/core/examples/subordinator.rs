//! The subordinator limit: Laplace exponent, hitting laws, bridge paths and
//! the limit cluster set; plus the κ = 0 half-line quantities.

use loopsoup::scaling::{
    escape_probability, halfline_kappa0, reversal_pair, sample_bridge_path, sample_gd_limit, sample_limit_cluster_set,
    ConditionedBridgeLaw, SubordinatorLaw,
};
use rand::SeedableRng;

fn main() -> loopsoup::Result<()> {
    let (kappa, alpha) = (1.0, 0.5);
    let law = SubordinatorLaw::new(kappa, alpha)?;
    println!("u(0.5) = {:.6}, Π(0.5) = {:.6}, Π̄(0.5) = {:.6}", law.potential_density(0.5), law.levy_density(0.5), law.levy_tail(0.5));
    println!("Φ(2) = {:.6}", law.laplace_exponent(2.0)?);
    println!("P[X at passage over 0.5 ≤ 0.8] = {:.6}", law.hitting_cdf(0.5, 0.8)?);

    let bridge = ConditionedBridgeLaw::new(kappa, alpha)?;
    let renewal = bridge.discretization(10_000)?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    let path = sample_bridge_path(&renewal, &mut rng)?;
    println!("bridge path: {} points, ends at {}, reversal pair {:?}", path.len(), path[path.len() - 1], reversal_pair(&path));

    let (g, d) = sample_gd_limit(kappa, alpha, &mut rng)?;
    println!("limit (G, D) draw: ({g:.4}, {d:.4})");
    let set = sample_limit_cluster_set(&renewal, kappa, &mut rng)?;
    println!("limit cluster set: {} points in [{:.4}, {:.4}]", set.len(), set[0], set[set.len() - 1]);

    println!("half-line κ(s=0.5) at α=0.5: {:.6}", halfline_kappa0(0.5, 0.5)?);
    println!("escape probability at α=2: {:.12}", escape_probability(2.0)?);
    Ok(())
}
