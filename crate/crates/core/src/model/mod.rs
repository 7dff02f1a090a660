//! Domain types: degree sequences, forests, lattice paths and offspring laws.

mod degree;
mod forest;
mod matrix;
mod offspring;
mod path;

pub use degree::{
    ChildSequence, Condition, DsSummary, InvalidDegreeSequence, LoadError, MultitypeDegreeSequence,
    Qualifications, UnitypeDegreeSequence, UnitypeSummary, Violation,
};
pub use forest::{ForestError, MultitypeForest};
pub use matrix::{determinant, neg_determinant};
pub use offspring::{Marginal, OffspringError, OffspringSpec};
pub(crate) use offspring::convolve;
pub use path::{BundleError, Path, PathBundle};
