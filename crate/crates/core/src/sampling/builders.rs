use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::model::{Marginal, MultitypeDegreeSequence, OffspringSpec, UnitypeDegreeSequence};

use super::SamplingError;

/// `⌊a ν(k)⌋`, exactly when `ν(k)` is rational.
fn floor_scaled(m: &Marginal, a: u64, k: usize) -> u64 {
    match m.pmf_rational(k) {
        Some(q) => (q * BigRational::from_integer(BigInt::from(a))).floor().to_integer().to_u64().unwrap_or(0),
        None => (a as f64 * m.pmf_f64(k)).floor() as u64,
    }
}

/// `⌊a ν(k)⌋` for `k = 1..=M`, where `M` is the last `k` with a non-zero value.
/// Index 0 of the result is left at 0.
fn scaled_counts(m: &Marginal, a: u64) -> Vec<u64> {
    let mut out = vec![0u64];
    let mut k = 1;
    loop {
        let done = match m.support_max() {
            Some(top) => k > top,
            // Beyond this point every `ν(k) ≤ P(X ≥ k) < 1/a`.
            None => m.tail_f64(k) * (a as f64) < 0.5,
        };
        if done {
            break;
        }
        out.push(floor_scaled(m, a, k));
        k += 1;
    }
    while out.len() > 1 && *out.last().unwrap() == 0 {
        out.pop();
    }
    out
}

/// Degree sequence approximating a critical law `ν`:
/// `N_k = ⌊a_n ν(k)⌋` for `k ≥ 1`, `s = 1 + Σ k N_k`, `N_0 = s − Σ_{k≥1} N_k`.
pub fn build_degree_sequence(nu: &Marginal, a_n: u64) -> Result<UnitypeDegreeSequence, SamplingError> {
    if a_n == 0 {
        return Err(SamplingError::Invalid("a_n must be at least 1".into()));
    }
    nu.validate().map_err(|e| SamplingError::Invalid(e.to_string()))?;
    if nu.mean() != BigRational::one() {
        return Err(SamplingError::Invalid(format!("offspring law {} has mean {}, not 1", nu, nu.mean())));
    }
    let scaled = scaled_counts(nu, a_n);
    let s: u64 = 1 + scaled.iter().enumerate().map(|(k, &c)| k as u64 * c).sum::<u64>();
    let positive: u64 = scaled.iter().skip(1).sum();
    assert!(s >= positive, "N_0 = s − Σ N_k is non-negative by construction");
    let mut counts: Vec<usize> = scaled.iter().map(|&c| c as usize).collect();
    counts[0] = (s - positive) as usize;
    let ds = UnitypeDegreeSequence::new(counts, 1);
    ds.validate().map_err(SamplingError::InvalidDegreeSequence)?;
    Ok(ds)
}

/// Hub sizes `⌊β_i s^{1/α}⌋`, for callers who think in scaling constants.
pub fn hub_sizes_from_scaling(betas: &[f64], s: u64, alpha: f64) -> Vec<usize> {
    let b = (s as f64).powf(1.0 / alpha);
    betas.iter().map(|&beta| (beta * b).floor() as usize).collect()
}

/// [`build_degree_sequence`] plus one vertex with `I` children for each hub
/// size `I`, with `I − 1` extra leaves per hub so the sequence still codes a tree.
pub fn build_degree_sequence_hubs(
    nu: &Marginal,
    a_n: u64,
    hub_sizes: &[usize],
) -> Result<UnitypeDegreeSequence, SamplingError> {
    let base = build_degree_sequence(nu, a_n)?;
    if hub_sizes.is_empty() {
        return Ok(base);
    }
    if hub_sizes.windows(2).any(|w| w[0] <= w[1]) {
        return Err(SamplingError::Invalid(format!("hub sizes {:?} are not strictly decreasing", hub_sizes)));
    }
    let max_child = base.counts().len() - 1;
    let smallest = *hub_sizes.last().unwrap();
    if smallest <= max_child {
        return Err(SamplingError::Invalid(format!(
            "hub size {} does not exceed the largest child count {} of the base sequence",
            smallest, max_child
        )));
    }
    let mut counts = base.counts().to_vec();
    counts.resize(hub_sizes[0] + 1, 0);
    for &h in hub_sizes {
        counts[h] += 1;
        counts[0] += h - 1;
    }
    let ds = UnitypeDegreeSequence::new(counts, 1);
    ds.validate().map_err(SamplingError::InvalidDegreeSequence)?;
    Ok(ds)
}

/// Multitype version: `N_{i,j}(k) = ⌊a_n ν_{i,j}(k)⌋` for `k ≥ 1`,
/// `s(j) = r_j + Σ_i Σ_k k N_{i,j}(k)` and `N_{i,j}(0) = s(i) − Σ_{k≥1} N_{i,j}(k)`.
pub fn build_multitype_degree_sequence(
    spec: &OffspringSpec,
    a_n: u64,
    r: &[usize],
) -> Result<MultitypeDegreeSequence, SamplingError> {
    let d = spec.d();
    if a_n == 0 {
        return Err(SamplingError::Invalid("a_n must be at least 1".into()));
    }
    if r.len() != d {
        return Err(SamplingError::Invalid(format!("r has {} entries for {} types", r.len(), d)));
    }
    let means = spec.mean_matrix();
    for j in 0..d {
        let col: BigRational = (0..d).map(|i| means[i][j].clone()).fold(BigRational::zero(), |a, b| a + b);
        if !col.is_one() {
            return Err(SamplingError::Invalid(format!(
                "type {}: expected number of type-{} children summed over parent types is {}, not 1",
                j + 1,
                j + 1,
                col
            )));
        }
    }
    let scaled: Vec<Vec<Vec<u64>>> =
        (0..d).map(|i| (0..d).map(|j| scaled_counts(spec.marginal(i, j), a_n)).collect()).collect();
    let sizes: Vec<u64> = (0..d)
        .map(|j| {
            r[j] as u64
                + (0..d)
                    .map(|i| scaled[i][j].iter().enumerate().map(|(k, &c)| k as u64 * c).sum::<u64>())
                    .sum::<u64>()
        })
        .collect();
    let mut tables = vec![vec![Vec::new(); d]; d];
    for i in 0..d {
        for j in 0..d {
            let positive: u64 = scaled[i][j].iter().skip(1).sum();
            if positive > sizes[i] {
                return Err(SamplingError::Invalid(format!(
                    "a_n = {} is too small: S_{{{},{}}} needs {} vertices of type {} but only {} exist; use a larger a_n",
                    a_n,
                    i + 1,
                    j + 1,
                    positive,
                    i + 1,
                    sizes[i]
                )));
            }
            let mut t: Vec<usize> = scaled[i][j].iter().map(|&c| c as usize).collect();
            t[0] = (sizes[i] - positive) as usize;
            tables[i][j] = t;
        }
    }
    let ds = MultitypeDegreeSequence::new(r.to_vec(), tables).map_err(SamplingError::InvalidDegreeSequence)?;
    ds.validate().map_err(SamplingError::InvalidDegreeSequence)?;
    Ok(ds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;

    fn geo(p: (i64, i64)) -> Marginal {
        Marginal::geometric(ratio(p.0, p.1)).unwrap()
    }

    #[test]
    fn worked_unitype_example() {
        let ds = build_degree_sequence(&geo((1, 2)), 10).unwrap();
        assert_eq!(ds.counts(), &[2, 2, 1]);
        assert_eq!(ds.size(), 5);
        let hubs = build_degree_sequence_hubs(&geo((1, 2)), 10, &[5]).unwrap();
        assert_eq!(hubs.counts(), &[6, 2, 1, 0, 0, 1]);
        assert_eq!(hubs.size(), 10);
        assert_eq!(build_degree_sequence_hubs(&geo((1, 2)), 10, &[]).unwrap(), ds);
    }

    #[test]
    fn rejections() {
        assert!(build_degree_sequence(&geo((2, 3)), 10).is_err());
        assert!(build_degree_sequence_hubs(&geo((1, 2)), 10, &[2]).is_err());
        assert!(build_degree_sequence_hubs(&geo((1, 2)), 10, &[5, 6]).is_err());
    }

    #[test]
    fn multitype_symmetric_geometric() {
        let spec = OffspringSpec::uniform(2, geo((2, 3))).unwrap();
        let ds = build_multitype_degree_sequence(&spec, 20, &[1, 1]).unwrap();
        let n = ds.type_sizes();
        assert_eq!(n[0], n[1]);
        let one = OffspringSpec::uniform(1, geo((1, 2))).unwrap();
        let m = build_multitype_degree_sequence(&one, 10, &[1]).unwrap();
        assert_eq!(m, build_degree_sequence(&geo((1, 2)), 10).unwrap().to_multitype());
    }

    #[test]
    fn hub_helper() {
        assert_eq!(hub_sizes_from_scaling(&[2.0, 1.0], 100, 2.0), vec![20, 10]);
    }
}
