use std::collections::VecDeque;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use serde::Serialize;

use crate::exact::Exact;
use crate::laws::{column_prefix, otter_dwass, Grade};
use crate::model::{Marginal, MultitypeDegreeSequence, MultitypeForest, OffspringSpec, UnitypeDegreeSequence};

use super::discrete::{sample_offspring, Hazard};
use super::uniform::{sample_uniform_multitype_forest_gds, sample_uniform_tree_gds};
use super::SamplingError;

pub const DEFAULT_MAX_TRIALS: u64 = 10_000_000;
pub const DEFAULT_MAX_ACCEPT_TRIALS: u64 = 1_000_000;

/// Loop counters of the size-conditioned tree samplers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CgwReport {
    /// Multinomial vectors drawn, including the accepted one.
    pub trials: u64,
}

impl CgwReport {
    pub fn hit_rate(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            1.0 / self.trials as f64
        }
    }
}

fn max_trials_error(stage: &'static str, trials: u64, hits: u64) -> SamplingError {
    SamplingError::MaxTrials { stage, trials, hits, observed_rate: hits as f64 / trials.max(1) as f64 }
}

/// `P(Ξ = n) > 0`, i.e. some tree of size `n` has positive probability.
fn tree_size_feasible(nu: &Marginal, n: usize) -> bool {
    let p = otter_dwass(nu, 1, n, Grade::Float).map(|r| r.float).unwrap_or(0.0);
    p > 0.0 || otter_dwass(nu, 1, n, Grade::Exact).is_ok_and(|r| !r.exact_value().is_zero())
}

fn degree_sequence_from_counts(mut counts: Vec<usize>) -> UnitypeDegreeSequence {
    if counts.is_empty() {
        counts.push(0);
    }
    UnitypeDegreeSequence::new(counts, 1)
}

/// Galton–Watson tree conditioned on `n` vertices: draw multinomial
/// `(n; ν)` degree vectors until `1 + Σ k N_k = n`, then a uniform tree with
/// that degree sequence.
pub fn sample_cgw_devroye<R: Rng + ?Sized>(
    nu: &Marginal,
    n: usize,
    max_trials: u64,
    rng: &mut R,
) -> Result<(MultitypeForest, CgwReport), SamplingError> {
    if n == 0 {
        return Err(SamplingError::Invalid("n must be at least 1".into()));
    }
    if !tree_size_feasible(nu, n) {
        return Err(SamplingError::Infeasible(format!("no tree of size {} has positive probability under {}", n, nu)));
    }
    let mut hazard = Hazard::new(nu);
    for trial in 1..=max_trials {
        let counts = hazard.sample(n, rng)?;
        let xi = 1 + counts.iter().enumerate().map(|(k, &c)| k * c).sum::<usize>();
        if xi == n {
            let tree = sample_uniform_tree_gds(&degree_sequence_from_counts(counts), rng)?;
            return Ok((tree, CgwReport { trials: trial }));
        }
    }
    Err(max_trials_error("multinomial", max_trials, 0))
}

/// Tree of size within `n1 ± slack`: draw multinomial `(n1; ν)` vectors until
/// `n = 1 + Σ k N_k` is in range, reset the leaf count to `n − Σ_{k≥1} N_k`
/// and sample a uniform tree with that degree sequence.
pub fn sample_cgw_approx<R: Rng + ?Sized>(
    nu: &Marginal,
    n1: usize,
    slack: usize,
    max_trials: u64,
    rng: &mut R,
) -> Result<(MultitypeForest, CgwReport), SamplingError> {
    if n1 == 0 {
        return Err(SamplingError::Invalid("n1 must be at least 1".into()));
    }
    let lo = n1.saturating_sub(slack).max(1);
    let hi = n1 + slack;
    let mut hazard = Hazard::new(nu);
    for trial in 1..=max_trials {
        let mut counts = hazard.sample(n1, rng)?;
        let n = 1 + counts.iter().enumerate().map(|(k, &c)| k * c).sum::<usize>();
        if (lo..=hi).contains(&n) {
            if counts.is_empty() {
                counts.push(0);
            }
            let internal: usize = counts.iter().skip(1).sum();
            counts[0] = n - internal;
            let tree = sample_uniform_tree_gds(&degree_sequence_from_counts(counts), rng)?;
            return Ok((tree, CgwReport { trials: trial }));
        }
    }
    Err(max_trials_error("multinomial", max_trials, 0))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CmgwOptions {
    /// Cap on multinomial draws of the whole `d × d` family.
    pub max_trials: u64,
    /// Cap on degree sequences that hit `n` and face the accept step.
    pub max_accept_trials: u64,
}

impl Default for CmgwOptions {
    fn default() -> Self {
        CmgwOptions { max_trials: DEFAULT_MAX_TRIALS, max_accept_trials: DEFAULT_MAX_ACCEPT_TRIALS }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct CmgwReport {
    /// Multinomial families drawn.
    pub multinomial_trials: u64,
    /// Families with `Ξ_j = n_j` for every `j`, i.e. accept tests performed.
    pub accept_trials: u64,
    /// Hits rejected because `det(−K) ≤ 0`.
    pub degenerate_hits: u64,
    /// Largest `det(−K) / ((d+1)^{d−1} ∏ n_i)` seen; never above 1.
    pub max_accept_ratio: f64,
}

impl CmgwReport {
    pub fn acceptance_rate(&self) -> f64 {
        if self.accept_trials == 0 {
            0.0
        } else {
            1.0 / self.accept_trials as f64
        }
    }
}

/// `(d+1)^{d−1} ∏ n_i`, the number of elementary-forest terms times `∏ n_i`.
pub fn accept_bound(n: &[usize]) -> BigInt {
    let d = n.len() as u32;
    let base = BigInt::from(d + 1).pow(d.saturating_sub(1));
    n.iter().fold(base, |acc, &v| acc * v)
}

fn check_cmgw(spec: &OffspringSpec, r: &[usize], n: &[usize]) -> Result<(), SamplingError> {
    let d = spec.d();
    if r.len() != d || n.len() != d {
        return Err(SamplingError::Invalid(format!("r and n need {} entries", d)));
    }
    if let Some(i) = (0..d).find(|&i| r[i] == 0 || r[i] >= n[i]) {
        return Err(SamplingError::Invalid(format!(
            "type {}: need 1 ≤ r_i < n_i, got r_i = {}, n_i = {}",
            i + 1,
            r[i],
            n[i]
        )));
    }
    for j in 0..d {
        if (0..d).all(|i| matches!(spec.marginal(i, j), Marginal::Bernoulli(_))) && (n[j] - r[j]) % 2 == 1 {
            return Err(SamplingError::Infeasible(format!(
                "type {}: n_j − r_j = {} is odd but every parent has an even number of type-{} children",
                j + 1,
                n[j] - r[j],
                j + 1
            )));
        }
        let t = n[j] - r[j];
        let p = column_prefix::<f64>(spec, j, n, t, None)[t];
        if p <= 0.0 && column_prefix::<Exact>(spec, j, n, t, None)[t].is_zero() {
            return Err(SamplingError::Infeasible(format!(
                "type {}: Σ_i X^(i,{}) cannot equal n_j − r_j = {}",
                j + 1,
                j + 1,
                t
            )));
        }
    }
    Ok(())
}

/// Multitype Galton–Watson forest with root counts `r` conditioned on
/// `n_i` vertices of each type: draw independent multinomials
/// `S_{i,j} ~ (n_i; ν_{i,j})` until `r_j + Σ_i Σ_k k N_{i,j}(k) = n_j` for every
/// `j`, accept with probability `det(−K) / ((d+1)^{d−1} ∏ n_i)`, and return a
/// uniform forest with the accepted degree sequence.
///
/// The accept step depends only on the degree sequence, so it is taken before
/// the forest is built; the output law is the same.
pub fn sample_cmgw<R: Rng + ?Sized>(
    spec: &OffspringSpec,
    r: &[usize],
    n: &[usize],
    opts: CmgwOptions,
    rng: &mut R,
) -> Result<(MultitypeForest, CmgwReport), SamplingError> {
    check_cmgw(spec, r, n)?;
    let d = spec.d();
    let bound = accept_bound(n);
    let bound_u = bound
        .to_u128()
        .ok_or_else(|| SamplingError::Invalid(format!("accept bound {} does not fit in 128 bits", bound)))?;
    let mut hazards: Vec<Vec<Hazard>> =
        (0..d).map(|i| (0..d).map(|j| Hazard::new(spec.marginal(i, j))).collect()).collect();
    let mut report = CmgwReport::default();
    while report.multinomial_trials < opts.max_trials {
        report.multinomial_trials += 1;
        let mut tables = vec![vec![Vec::new(); d]; d];
        let mut hit = true;
        'columns: for j in 0..d {
            let mut xi = r[j];
            for i in 0..d {
                let c = hazards[i][j].sample(n[i], rng)?;
                xi += c.iter().enumerate().map(|(k, &v)| k * v).sum::<usize>();
                tables[i][j] = c;
                if xi > n[j] {
                    hit = false;
                    break 'columns;
                }
            }
            if xi != n[j] {
                hit = false;
                break;
            }
        }
        if !hit {
            continue;
        }
        report.accept_trials += 1;
        for row in tables.iter_mut() {
            for t in row.iter_mut() {
                if t.is_empty() {
                    t.push(0);
                }
            }
        }
        let ds = MultitypeDegreeSequence::new(r.to_vec(), tables).map_err(SamplingError::InvalidDegreeSequence)?;
        let det = crate::model::neg_determinant(&ds.terminal_matrix());
        if det <= BigInt::zero() {
            report.degenerate_hits += 1;
        } else {
            if det > bound {
                return Err(SamplingError::Internal(format!("det(−K) = {} exceeds the accept bound {}", det, bound)));
            }
            let ratio = crate::exact::ratio_to_f64(&num_rational::BigRational::new(det.clone(), bound.clone()));
            report.max_accept_ratio = report.max_accept_ratio.max(ratio);
            let v: u128 = rng.gen_range(0..bound_u);
            if BigInt::from(v) < det {
                let forest = sample_uniform_multitype_forest_gds(&ds, rng)?;
                return Ok((forest, report));
            }
        }
        if report.accept_trials >= opts.max_accept_trials {
            return Err(max_trials_error("accept", report.accept_trials, 0));
        }
    }
    Err(max_trials_error("multinomial", report.multinomial_trials, report.accept_trials))
}

/// Unconditioned multitype Galton–Watson forest, grown breadth first.
/// Fails once more than `max_vertices` vertices exist.
pub fn simulate_gw_forest<R: Rng + ?Sized>(
    spec: &OffspringSpec,
    r: &[usize],
    max_vertices: usize,
    rng: &mut R,
) -> Result<MultitypeForest, SamplingError> {
    let d = spec.d();
    if r.len() != d {
        return Err(SamplingError::Invalid(format!("r has {} entries for {} types", r.len(), d)));
    }
    let mut types = Vec::new();
    let mut children: Vec<Vec<usize>> = Vec::new();
    let mut roots = Vec::new();
    for (j, &count) in r.iter().enumerate() {
        for _ in 0..count {
            roots.push(types.len());
            types.push(j);
            children.push(Vec::new());
        }
    }
    let mut queue: VecDeque<usize> = roots.iter().copied().collect();
    while let Some(v) = queue.pop_front() {
        let i = types[v];
        for j in 0..d {
            let c = sample_offspring(spec.marginal(i, j), rng);
            if types.len() + c > max_vertices {
                return Err(SamplingError::TooLarge { limit: max_vertices });
            }
            for _ in 0..c {
                let id = types.len();
                types.push(j);
                children.push(Vec::new());
                children[v].push(id);
                queue.push_back(id);
            }
        }
    }
    MultitypeForest::from_children(d, types, roots, children).map_err(|e| SamplingError::Internal(e.to_string()))
}
