//! Brute-force ground truth: exhaustive enumeration of small forests, a
//! literal good-shift counter, and the statistical tests used to check the
//! samplers.

mod enumerate;
mod stats;
mod trend;

use num_bigint::BigInt;

use crate::sampling::SamplingError;

pub use enumerate::{
    brute_count_good_perms, enumerate_forests_by_type, enumerate_forests_gds, Enumerated, ForestKind, LabeledForest,
};
pub use stats::{
    binomial_two_sided, chi_square_gof, chi_square_uniformity, degree_sequence_tv, multitype_degree_sequence_tv,
    tv_distance, tv_to_marginal, Cell, TestReport,
};
pub use trend::{empirical_degree_trend, empirical_degree_trend_multitype, TrendRow, TrendTable};

pub const DEFAULT_BUDGET: u64 = 100_000;
pub const BUDGET_ENV: &str = "MULTIFOREST_BUDGET";

/// Cap on the number of objects an oracle may enumerate or scan.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget(pub u64);

impl Default for Budget {
    fn default() -> Self {
        Budget(DEFAULT_BUDGET)
    }
}

impl Budget {
    /// `MULTIFOREST_BUDGET` if set and numeric, otherwise the default.
    pub fn from_env() -> Self {
        std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .map(Budget)
            .unwrap_or_default()
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum OracleError {
    #[error("enumeration budget exceeded: need {needed}, budget {budget}")]
    Budget { needed: BigInt, budget: u64 },
    #[error("cell {cell} has expected count {expected:.3}, below 5")]
    Undersampled { cell: usize, expected: f64 },
    #[error("sample {0} is not in the support")]
    OutOfSupport(usize),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Sampling(#[from] SamplingError),
    #[error("internal error: {0}")]
    Internal(String),
}
