//! Loop soups on the discrete circle.
//!
//! Exact Poisson sampling of random-walk loop soups, closed-form loop
//! masses and cluster laws, and the renewal / subordinator objects that
//! describe their scaling limits.

pub mod analytics;
pub mod circle;
pub mod error;
pub mod experiment;
pub mod numerics;
pub mod rng;
pub mod scaling;
pub mod soup;

pub use circle::{CircleModel, Loop, LoopType, PointedLoop};
pub use error::{Error, Result};
