//! Loops on the discrete circle: parameters, loop classes and their masses.

use loopsoup::circle::{classify_loop, lift_loop, loop_mass, pointed_loop_mass, Loop, PointedLoop};
use loopsoup::CircleModel;

fn main() -> loopsoup::Result<()> {
    let model = CircleModel::new(6, 0.55, 0.1, 0.5)?;
    println!("n={} p={} c={} α={}", model.n(), model.p(), model.c(), model.alpha());
    println!("κ={:.6} r={:.6} θ={:.6}", model.kappa(), model.r(), model.theta());

    // a loop winding once clockwise, and a back-and-forth loop through 1
    for labels in [vec![1, 2, 3, 4, 5, 6], vec![1, 2, 1, 6], vec![3, 4, 3, 4]] {
        let pointed = PointedLoop::new(&labels, model.n())?;
        let class = Loop::from_pointed(&pointed);
        println!(
            "{labels:?}: rot={} period={} type={:?} pointed mass={:.3e} class mass={:.3e}",
            pointed.rotation_number(),
            class.period(),
            classify_loop(&model, &class),
            pointed_loop_mass(&model, &pointed)?,
            loop_mass(&model, &class)?,
        );
        if class.rot() != 0 || !class.visits(1) {
            continue;
        }
        if let Some(lift) = lift_loop(&class, model.n())? {
            println!("    lift extent {:?}", lift.extent());
        }
    }
    Ok(())
}
