//! Renewal structure of the closed edges and its subordinator limit.

mod finite;
mod halfline;
mod renewal;
mod subordinator;

pub use finite::gd_finite_law;
pub use halfline::{escape_probability, halfline_kappa0};
pub use renewal::{hitting_coefficients, invert_renewal, sample_conditioned_renewal, RenewalLaw};
pub use subordinator::{
    gd_hitting_joint, reversal_pair, sample_bridge_path, sample_gd_limit, sample_limit_cluster_set, ConditionedBridgeLaw,
    SubordinatorLaw,
};
