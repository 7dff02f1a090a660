use std::collections::HashMap;
use std::hash::Hash;

use serde::Serialize;
use statrs::distribution::{Binomial, ChiSquared, ContinuousCDF, Discrete};

use crate::model::{Marginal, MultitypeDegreeSequence, OffspringSpec, UnitypeDegreeSequence};

use super::OracleError;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Cell {
    pub observed: u64,
    pub expected: f64,
}

/// Goodness-of-fit report. `statistic` is always Pearson's; with two cells
/// `p_value` comes from the exact two-sided binomial test instead of the
/// chi-square tail.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TestReport {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    pub cells: Vec<Cell>,
}

impl TestReport {
    pub fn passes(&self, alpha: f64) -> bool {
        self.p_value > alpha
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

/// Two-sided exact binomial p-value: total mass of outcomes no more likely
/// than `k` under `Bin(n, p)`.
pub fn binomial_two_sided(k: u64, n: u64, p: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let dist = Binomial::new(p, n).expect("p in [0, 1]");
    let at = dist.pmf(k);
    let cut = at * (1.0 + 1e-7);
    let total: f64 = (0..=n).map(|x| dist.pmf(x)).filter(|&q| q <= cut).sum();
    total.min(1.0)
}

/// Pearson test of `observed` counts against cell probabilities `probs`.
pub fn chi_square_gof(observed: &[u64], probs: &[f64]) -> Result<TestReport, OracleError> {
    if observed.len() != probs.len() {
        return Err(OracleError::Invalid(format!("{} counts for {} cells", observed.len(), probs.len())));
    }
    if observed.is_empty() {
        return Err(OracleError::Invalid("no cells".into()));
    }
    let total: u64 = observed.iter().sum();
    let mass: f64 = probs.iter().sum();
    let cells: Vec<Cell> = observed
        .iter()
        .zip(probs)
        .map(|(&o, &p)| Cell { observed: o, expected: total as f64 * p / mass })
        .collect();
    if cells.len() == 1 {
        return Ok(TestReport { statistic: 0.0, dof: 0, p_value: 1.0, cells });
    }
    if let Some((cell, c)) = cells.iter().enumerate().find(|(_, c)| c.expected < 5.0) {
        return Err(OracleError::Undersampled { cell, expected: c.expected });
    }
    let statistic: f64 = cells.iter().map(|c| (c.observed as f64 - c.expected).powi(2) / c.expected).sum();
    let dof = cells.len() - 1;
    let p_value = if cells.len() == 2 {
        binomial_two_sided(cells[0].observed, total, probs[0] / mass)
    } else {
        ChiSquared::new(dof as f64).expect("positive dof").sf(statistic)
    };
    Ok(TestReport { statistic, dof, p_value, cells })
}

/// Pearson test of `samples` against the uniform law on `support`.
pub fn chi_square_uniformity<T: Eq + Hash>(samples: &[T], support: &[T]) -> Result<TestReport, OracleError> {
    let index: HashMap<&T, usize> = support.iter().enumerate().map(|(i, s)| (s, i)).collect();
    if index.len() != support.len() {
        return Err(OracleError::Invalid("support has repeated elements".into()));
    }
    let mut counts = vec![0u64; support.len()];
    for (s, x) in samples.iter().enumerate() {
        match index.get(x) {
            Some(&i) => counts[i] += 1,
            None => return Err(OracleError::OutOfSupport(s)),
        }
    }
    chi_square_gof(&counts, &vec![1.0; support.len()])
}

/// `½ Σ |p_k − q_k|`, with the shorter vector padded by zeros.
pub fn tv_distance(p: &[f64], q: &[f64]) -> f64 {
    let len = p.len().max(q.len());
    0.5 * (0..len).map(|k| (p.get(k).unwrap_or(&0.0) - q.get(k).unwrap_or(&0.0)).abs()).sum::<f64>()
}

/// Total variation between a finitely supported `p` and `ν`.
pub fn tv_to_marginal(p: &[f64], nu: &Marginal) -> f64 {
    let head: f64 = p.iter().enumerate().map(|(k, &pk)| (pk - nu.pmf_f64(k)).abs()).sum();
    0.5 * (head + nu.tail_f64(p.len()))
}

fn normalized(counts: &[usize]) -> Vec<f64> {
    let s: usize = counts.iter().sum();
    counts.iter().map(|&c| c as f64 / s.max(1) as f64).collect()
}

/// TV distance between `N_k / s` and `ν`.
pub fn degree_sequence_tv(ds: &UnitypeDegreeSequence, nu: &Marginal) -> f64 {
    tv_to_marginal(&normalized(ds.counts()), nu)
}

/// Mean over `(i, j)` of the TV distance between `S_{i,j}(k) / n_i` and
/// `ν_{i,j}`. Types with no vertices are skipped.
pub fn multitype_degree_sequence_tv(ds: &MultitypeDegreeSequence, spec: &OffspringSpec) -> f64 {
    let d = ds.d();
    let n = ds.type_sizes();
    let mut total = 0.0;
    let mut blocks = 0usize;
    for i in (0..d).filter(|&i| n[i] > 0) {
        for j in 0..d {
            total += tv_to_marginal(&normalized(ds.table(i, j)), spec.marginal(i, j));
            blocks += 1;
        }
    }
    if blocks == 0 {
        0.0
    } else {
        total / blocks as f64
    }
}
