//! The discrete circle model and loops on it.

mod loops;
mod model;

pub use loops::{
    classify_loop, lift_loop, loop_mass, pointed_loop_mass, rotation_number, Footprint, LiftedLoop, Loop,
    LoopType, PointedLoop,
};
pub use model::{build_model, CircleModel, ModelParams};
