//! Closed-form loop masses and cluster probabilities.
//!
//! Masses are minus log-determinants of I − Q restricted to a vertex set
//! (restriction property); arcs and the full circle use the Toeplitz and
//! circulant closed forms in the log domain, anything else dense LU.

mod det;
mod limits;
mod masses;

pub use det::{circulant_det, toeplitz_det, DetSpec, Roots};
pub use limits::*;
pub use masses::*;
