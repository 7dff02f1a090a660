use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::codec::{decode_multitype, decode_unitype};
use crate::cyclic::{vervaat_multitype, vervaat_unitype};
use crate::model::{MultitypeDegreeSequence, MultitypeForest, Path, PathBundle, UnitypeDegreeSequence};

use super::SamplingError;

/// Uniform tree with degree sequence `ds` (`m = 1`): shuffle the child
/// sequence, rotate the walk just past its first minimum and decode.
pub fn sample_uniform_tree_gds<R: Rng + ?Sized>(
    ds: &UnitypeDegreeSequence,
    rng: &mut R,
) -> Result<MultitypeForest, SamplingError> {
    if ds.roots() != 1 {
        return Err(SamplingError::Invalid(format!("a tree needs m = 1, got m = {}", ds.roots())));
    }
    sample_uniform_forest_gds(ds, rng)
}

/// Uniform forest of `m` trees with degree sequence `ds`: the walk is rotated
/// at `τ_U`, the first hit of `min + U` for `U` uniform on `{0, …, m−1}`.
pub fn sample_uniform_forest_gds<R: Rng + ?Sized>(
    ds: &UnitypeDegreeSequence,
    rng: &mut R,
) -> Result<MultitypeForest, SamplingError> {
    ds.validate().map_err(SamplingError::InvalidDegreeSequence)?;
    let mut c = ds.child_sequence();
    c.shuffle(rng);
    let bridge = Path::from_increments(c.iter().map(|&v| v as i64 - 1).collect());
    let m = ds.roots();
    let u = if m > 1 { rng.gen_range(0..m) } else { 0 };
    let excursion = vervaat_unitype(&bridge, u).map_err(|e| SamplingError::Internal(e.to_string()))?;
    decode_unitype(&excursion).map_err(|e| SamplingError::Internal(e.to_string()))
}

/// Bridge `W^b` from independent uniform permutations of every child sequence.
pub fn shuffled_bridge<R: Rng + ?Sized>(ds: &MultitypeDegreeSequence, rng: &mut R) -> PathBundle {
    let d = ds.d();
    let seqs = ds.child_sequence();
    let inc: Vec<Vec<Vec<i64>>> = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    let mut c = seqs.get(i, j).to_vec();
                    c.shuffle(rng);
                    c.iter().map(|&v| v as i64 - i64::from(i == j)).collect()
                })
                .collect()
        })
        .collect();
    PathBundle::new(inc).expect("child sequences of a valid degree sequence form a bundle")
}

/// Uniform multitype forest with degree sequence `ds`: the `U`-th good
/// cyclical shift of a shuffled bridge, `U` uniform on `{1, …, det(−K)}`.
pub fn sample_uniform_multitype_forest_gds<R: Rng + ?Sized>(
    ds: &MultitypeDegreeSequence,
    rng: &mut R,
) -> Result<MultitypeForest, SamplingError> {
    let summary = ds.validate().map_err(SamplingError::InvalidDegreeSequence)?;
    let det = summary
        .det
        .to_u64()
        .ok_or_else(|| SamplingError::Invalid(format!("det(−K) = {} does not fit in 64 bits", summary.det)))?;
    let bridge = shuffled_bridge(ds, rng);
    let u = rng.gen_range(1..=det);
    forest_from_bridge(&bridge, ds.roots(), u)
}

/// Same as [`sample_uniform_multitype_forest_gds`] but always takes the
/// `u`-th good shift. Not uniform unless `det(−K) = 1`.
pub fn sample_multitype_forest_gds_fixed_u<R: Rng + ?Sized>(
    ds: &MultitypeDegreeSequence,
    u: u64,
    rng: &mut R,
) -> Result<MultitypeForest, SamplingError> {
    ds.validate().map_err(SamplingError::InvalidDegreeSequence)?;
    let bridge = shuffled_bridge(ds, rng);
    forest_from_bridge(&bridge, ds.roots(), u)
}

fn forest_from_bridge(bridge: &PathBundle, r: &[usize], u: u64) -> Result<MultitypeForest, SamplingError> {
    let walk = vervaat_multitype(bridge, r, u).map_err(|e| SamplingError::Invalid(e.to_string()))?;
    decode_multitype(&walk, r).map_err(|e| SamplingError::Internal(e.to_string()))
}
