use crate::exact::{ratio, Exact};
use crate::model::OffspringSpec;

use super::{column_prefix, LawError};

/// Both sides of H2 for one ordered pair `i ≠ j`.
#[derive(Clone, Debug, PartialEq)]
pub struct H2Check {
    pub i: usize,
    pub j: usize,
    /// `E[X^{i,j}_{n_i}; Σ_l X^{l,j}_{n_l} = n_j − r_j]`
    pub lhs: Exact,
    /// `(n_i (n_j − r_j) / n) P(Σ_l X^{l,j}_{n_l} = n_j − r_j)`
    pub rhs: Exact,
    pub equal: bool,
    /// `lhs − rhs` in floating point.
    pub gap: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct H2Report {
    pub checks: Vec<H2Check>,
    pub holds: bool,
}

/// Exact evaluation of both sides of H2 at `(n, r)` for every `i ≠ j`.
pub fn verify_h2(spec: &OffspringSpec, n: &[usize], r: &[usize]) -> Result<H2Report, LawError> {
    let d = spec.d();
    if n.len() != d || r.len() != d {
        return Err(LawError::Precondition(format!(
            "offspring law has {} types but n has {} and r has {} entries",
            d,
            n.len(),
            r.len()
        )));
    }
    if let Some(j) = (0..d).find(|&j| r[j] > n[j]) {
        return Err(LawError::Precondition(format!("type {}: r_j = {} exceeds n_j = {}", j + 1, r[j], n[j])));
    }
    let total: usize = n.iter().sum();
    if total == 0 {
        return Err(LawError::Precondition("n must be non-zero".into()));
    }
    let mut checks = Vec::new();
    for j in 0..d {
        let t = n[j] - r[j];
        let all = column_prefix::<Exact>(spec, j, n, t, None);
        for i in (0..d).filter(|&i| i != j) {
            let own = spec.marginal(i, j).fold_pmf_prefix::<Exact>(n[i], t);
            let rest = column_prefix::<Exact>(spec, j, n, t, Some(i));
            let mut lhs = Exact::zero();
            for a in 1..=t {
                lhs = lhs.add(&own[a].mul(&rest[t - a]).scale(&ratio(a, 1)));
            }
            let rhs = all[t].scale(&ratio(n[i] * t, total));
            let gap = lhs.to_f64() - rhs.to_f64();
            checks.push(H2Check { i, j, equal: lhs == rhs, lhs, rhs, gap });
        }
    }
    let holds = checks.iter().all(|c| c.equal);
    Ok(H2Report { checks, holds })
}
