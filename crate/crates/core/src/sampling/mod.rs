//! Randomized generators: degree-sequence builders, uniform forests with a
//! given degree sequence and size-conditioned Galton–Watson samplers.
//!
//! Every sampler takes its randomness from the caller, normally an
//! [`RngHandle`], so a seed fixes the output.

mod builders;
mod conditioned;
mod discrete;
mod rng;
mod uniform;

use crate::model::InvalidDegreeSequence;

pub use builders::{
    build_degree_sequence, build_degree_sequence_hubs, build_multitype_degree_sequence, hub_sizes_from_scaling,
};
pub use conditioned::{
    accept_bound, sample_cgw_approx, sample_cgw_devroye, sample_cmgw, simulate_gw_forest, CgwReport, CmgwOptions,
    CmgwReport, DEFAULT_MAX_ACCEPT_TRIALS, DEFAULT_MAX_TRIALS,
};
pub use discrete::{binomial, sample_multinomial_sequential, sample_offspring};
pub use rng::RngHandle;
pub use uniform::{
    sample_multitype_forest_gds_fixed_u, sample_uniform_forest_gds, sample_uniform_multitype_forest_gds,
    sample_uniform_tree_gds, shuffled_bridge,
};

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum SamplingError {
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    InvalidDegreeSequence(InvalidDegreeSequence),
    #[error("{0}")]
    Infeasible(String),
    #[error("{stage} loop gave up after {trials} trials ({hits} hits, observed rate {observed_rate:.3e})")]
    MaxTrials { stage: &'static str, trials: u64, hits: u64, observed_rate: f64 },
    #[error("forest exceeded {limit} vertices")]
    TooLarge { limit: usize },
    #[error("internal error: {0}")]
    Internal(String),
}
