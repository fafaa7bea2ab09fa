//! The closed edges as a renewal process: inversion and conditioned paths.

use loopsoup::scaling::{hitting_coefficients, invert_renewal, RenewalLaw};
use loopsoup::CircleModel;
use rand::SeedableRng;

fn main() -> loopsoup::Result<()> {
    let c = hitting_coefficients(0.5, 0.02, 10)?;
    let w = invert_renewal(&c)?;
    println!("C = {:.4?}", &c[..5]);
    println!("w = {:.4?}", &w[1..5]);

    let model = CircleModel::scaled(100, 1.0, 0.5, 0.5)?;
    let law = RenewalLaw::for_model(&model)?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
    for _ in 0..3 {
        let path = law.sample_conditioned(&mut rng, law.horizon)?;
        println!("conditioned path with {} jumps: {:?}", path.len() - 1, path);
    }
    let pmf = law.conditioned_jump_pmf(law.horizon);
    println!("P[first jump = 1, 2, 3] = {:.4} {:.4} {:.4}", pmf[1], pmf[2], pmf[3]);
    Ok(())
}
