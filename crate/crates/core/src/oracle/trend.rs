use rand::Rng;
use serde::Serialize;

use crate::model::{Marginal, MultitypeForest, OffspringSpec};
use crate::sampling::{sample_cgw_devroye, sample_cmgw, CmgwOptions, DEFAULT_MAX_TRIALS};

use super::OracleError;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrendRow {
    pub size: Vec<usize>,
    pub samples: usize,
    pub tv: f64,
    pub std_err: f64,
}

/// TV distance per size, with a check that it does not increase by more than
/// three combined standard errors from one size to the next.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrendTable {
    pub rows: Vec<TrendRow>,
    pub non_increasing: bool,
}

impl TrendTable {
    fn from_rows(rows: Vec<TrendRow>) -> Self {
        let non_increasing = rows.windows(2).all(|w| {
            let band = 3.0 * (w[0].std_err.powi(2) + w[1].std_err.powi(2)).sqrt();
            w[1].tv <= w[0].tv + band
        });
        TrendTable { rows, non_increasing }
    }
}

/// Normalized child-count distributions, one block per target law.
type Blocks = Vec<Vec<f64>>;

/// TV of the averaged blocks to their targets (mean over blocks), with the
/// standard error of its linearization around the sample mean.
fn summarize(samples: &[Blocks], targets: &[&Marginal]) -> (f64, f64) {
    let count = samples.len() as f64;
    let b = targets.len();
    let mut means: Vec<Vec<f64>> = vec![Vec::new(); b];
    for s in samples {
        for (blk, dist) in s.iter().enumerate() {
            if means[blk].len() < dist.len() {
                means[blk].resize(dist.len(), 0.0);
            }
            for (k, &v) in dist.iter().enumerate() {
                means[blk][k] += v / count;
            }
        }
    }
    let tv = means.iter().zip(targets).map(|(m, nu)| super::tv_to_marginal(m, nu)).sum::<f64>() / b as f64;
    let signs: Vec<Vec<f64>> = means
        .iter()
        .zip(targets)
        .map(|(m, nu)| m.iter().enumerate().map(|(k, &v)| 0.5 * (v - nu.pmf_f64(k)).signum()).collect())
        .collect();
    let proj: Vec<f64> = samples
        .iter()
        .map(|s| {
            s.iter()
                .enumerate()
                .map(|(blk, dist)| dist.iter().enumerate().map(|(k, &v)| signs[blk][k] * v).sum::<f64>())
                .sum::<f64>()
                / b as f64
        })
        .collect();
    let mean = proj.iter().sum::<f64>() / count;
    let var = if samples.len() > 1 {
        proj.iter().map(|&v| (v - mean).powi(2)).sum::<f64>() / (count - 1.0)
    } else {
        0.0
    };
    (tv, (var / count).sqrt())
}

fn blocks_of(f: &MultitypeForest) -> Blocks {
    let ds = f.empirical_degree_sequence();
    let n = ds.type_sizes();
    let d = ds.d();
    let mut out = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            let t = ds.table(i, j);
            out.push(t.iter().map(|&c| c as f64 / n[i].max(1) as f64).collect());
        }
    }
    out
}

/// For each size, draw `samples` conditioned Galton–Watson trees and measure
/// how far their average empirical offspring law is from `ν`.
pub fn empirical_degree_trend<R: Rng + ?Sized>(
    nu: &Marginal,
    sizes: &[usize],
    samples: usize,
    rng: &mut R,
) -> Result<TrendTable, OracleError> {
    if samples == 0 {
        return Err(OracleError::Invalid("need at least one sample per size".into()));
    }
    let mut rows = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let mut draws = Vec::with_capacity(samples);
        for _ in 0..samples {
            let (tree, _) = sample_cgw_devroye(nu, n, DEFAULT_MAX_TRIALS, rng)?;
            draws.push(blocks_of(&tree));
        }
        let (tv, std_err) = summarize(&draws, &[nu]);
        rows.push(TrendRow { size: vec![n], samples, tv, std_err });
    }
    Ok(TrendTable::from_rows(rows))
}

/// Multitype version, one CMGW draw per sample; the distance is averaged over
/// the `d²` pairs `(i, j)`. Types with no vertices contribute an empty block.
pub fn empirical_degree_trend_multitype<R: Rng + ?Sized>(
    spec: &OffspringSpec,
    r: &[usize],
    sizes: &[Vec<usize>],
    samples: usize,
    rng: &mut R,
) -> Result<TrendTable, OracleError> {
    if samples == 0 {
        return Err(OracleError::Invalid("need at least one sample per size".into()));
    }
    let d = spec.d();
    let targets: Vec<&Marginal> = (0..d).flat_map(|i| (0..d).map(move |j| (i, j))).map(|(i, j)| spec.marginal(i, j)).collect();
    let mut rows = Vec::with_capacity(sizes.len());
    for n in sizes {
        let mut draws = Vec::with_capacity(samples);
        for _ in 0..samples {
            let (f, _) = sample_cmgw(spec, r, n, CmgwOptions::default(), rng)?;
            draws.push(blocks_of(&f));
        }
        let (tv, std_err) = summarize(&draws, &targets);
        rows.push(TrendRow { size: n.clone(), samples, tv, std_err });
    }
    Ok(TrendTable::from_rows(rows))
}
