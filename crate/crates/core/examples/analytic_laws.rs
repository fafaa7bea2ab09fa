//! Closed-form loop masses, edge laws, determinants and the limit laws.

use loopsoup::analytics::{
    circulant_det, edge_configuration_law, gd_limit_density, mass_by_type, mass_through_vertex1, prob_edge_closed,
    prob_no_winding_or_covering, prob_not_single_partition_limit, toeplitz_det, total_mass, DetSpec,
};
use loopsoup::CircleModel;

fn main() -> loopsoup::Result<()> {
    let model = CircleModel::new(8, 0.5, 0.05, 0.7)?;
    let t = mass_by_type(&model);
    println!("total mass {:.6}, through 1 {:.6}", total_mass(&model), mass_through_vertex1(&model));
    println!("O1 {:.6}  O2 {:.6}  O3 {:.6}  O4 {:.6}", t.o1, t.o2, t.o3, t.o4);
    println!("P[edge 1 closed] = {:.6}", prob_edge_closed(&model, 1)?);
    let law = edge_configuration_law(&model)?;
    println!("P[all edges open] = {:.6}, P[all closed] = {:.6}", law[law.len() - 1], law[0]);
    println!("P[no winding or covering loop] = {:.6}", prob_no_winding_or_covering(&model));

    let spec = DetSpec::new(2.0, 1.0, 1.0, 5);
    println!("Toeplitz det {:?}: {}, circulant: {}", spec.roots(), toeplitz_det(&spec), circulant_det(&spec)?);

    let (kappa, eps, alpha) = (1.0, 0.5, 0.5);
    println!("limit P[not single partition] = {:.6}", prob_not_single_partition_limit(kappa, eps, alpha)?);
    println!("limit (G, D) density at (0.2, 0.3) = {:.6}", gd_limit_density(kappa, alpha, 0.2, 0.3)?);
    Ok(())
}
