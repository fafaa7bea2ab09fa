//! Special functions, quadrature, statistics and small dense linear algebra.

pub mod linalg;
pub mod quad;
pub mod special;
pub mod stats;

pub use linalg::{dense_det, lu_log_det};
pub use quad::{integrate, integrate_nested, integrate_simplex, integrate_singular, Domain, QuadResult, QuadratureSpec};
pub use special::{beta, ln_beta, ln_gamma, polylog, riemann_zeta};
pub use stats::{hausdorff, ks_distance, ks_two_sample};
