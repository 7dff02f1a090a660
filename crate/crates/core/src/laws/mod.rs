//! Exact laws of multitype Galton–Watson forests and the enumeration
//! formulas they specialize to.
//!
//! Every law is written once over [`Weight`] and evaluated either exactly
//! (rationals times powers of `e`) or in `f64`.

mod counts;
mod h2;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::json;

use crate::exact::{ratio, Exact, Weight};
use crate::model::{convolve, Marginal, MultitypeDegreeSequence, MultitypeForest, OffspringSpec};

pub use counts::{count_binary, count_forests_gds, count_labeled, count_plane};
pub use h2::{verify_h2, H2Check, H2Report};

/// Default cap on the size of the index set scanned by
/// [`law_population_exhaustive`].
pub const DEFAULT_INDEX_BUDGET: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Grade {
    #[default]
    Exact,
    Float,
}

impl Grade {
    pub fn name(self) -> &'static str {
        match self {
            Grade::Exact => "exact",
            Grade::Float => "float",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LawResult {
    pub exact: Option<Exact>,
    pub float: f64,
    pub grade: Grade,
    /// Probability mass dropped by truncated convolutions. Infinite supports
    /// are handled by closed forms and finite prefixes, so nothing is dropped
    /// and the bound is `0`; float rounding is not included.
    pub error_bound: f64,
    pub warnings: Vec<String>,
}

impl LawResult {
    /// The exact value. Panics on a float-grade result.
    pub fn exact_value(&self) -> &Exact {
        self.exact.as_ref().expect("float-grade result has no exact value")
    }

    /// The value as a rational, when no exponential factor is involved.
    pub fn rational(&self) -> Option<BigRational> {
        self.exact.as_ref().and_then(Exact::as_rational)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        json!({
            "exact": self.exact.as_ref().map(|e| e.to_string()),
            "float": self.float,
            "grade": self.grade.name(),
            "error_bound": self.error_bound,
            "warnings": self.warnings,
        })
    }
}

impl std::fmt::Display for LawResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.exact {
            Some(e) => write!(f, "{} = {:.15e}", e, self.float),
            None => write!(f, "{:.15e}", self.float),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum LawError {
    #[error("{0}")]
    Precondition(String),
    #[error("index set has {size} elements, above the budget of {budget}")]
    Budget { size: BigInt, budget: u64 },
    #[error("the forest has probability zero under the offspring law")]
    ZeroProbability,
    #[error("internal error: {0}")]
    Internal(String),
}

/// Weights that can be reported as a [`LawResult`].
pub trait Graded: Weight {
    fn into_result(self) -> LawResult;
}

impl Graded for Exact {
    fn into_result(self) -> LawResult {
        LawResult { float: self.to_f64(), exact: Some(self), grade: Grade::Exact, error_bound: 0.0, warnings: Vec::new() }
    }
}

impl Graded for f64 {
    fn into_result(self) -> LawResult {
        LawResult { exact: None, float: self, grade: Grade::Float, error_bound: 0.0, warnings: Vec::new() }
    }
}

macro_rules! by_grade {
    ($grade:expr, $f:ident ( $($a:expr),* $(,)? )) => {
        match $grade {
            Grade::Exact => $f::<Exact>($($a),*).map(Graded::into_result),
            Grade::Float => $f::<f64>($($a),*).map(Graded::into_result),
        }
    };
}

fn precondition<T>(msg: impl Into<String>) -> Result<T, LawError> {
    Err(LawError::Precondition(msg.into()))
}

fn w_ratio<W: Weight>(num: impl Into<BigInt>, den: impl Into<BigInt>) -> W {
    W::from_ratio(&ratio(num, den))
}

/// `P(Σ_{l ≠ skip} X^{l,j}_{n_l} = t)` for `t = 0..=tmax`.
pub(crate) fn column_prefix<W: Weight>(
    spec: &OffspringSpec,
    j: usize,
    n: &[usize],
    tmax: usize,
    skip: Option<usize>,
) -> Vec<W> {
    let rows: Vec<usize> = (0..spec.d()).filter(|&l| Some(l) != skip).collect();
    let Some(&first) = rows.first() else {
        return (0..=tmax).map(|t| if t == 0 { W::one() } else { W::zero() }).collect();
    };
    let m0 = spec.marginal(first, j);
    if rows.iter().all(|&l| spec.marginal(l, j) == m0) {
        let total: usize = rows.iter().map(|&l| n[l]).sum();
        return m0.fold_pmf_prefix(total, tmax);
    }
    let mut acc: Vec<W> = (0..=tmax).map(|t| if t == 0 { W::one() } else { W::zero() }).collect();
    for &l in &rows {
        acc = convolve(&acc, &spec.marginal(l, j).fold_pmf_prefix::<W>(n[l], tmax), tmax);
    }
    acc
}

fn otter_dwass_in<W: Weight>(nu: &Marginal, k: usize, n: usize) -> Result<W, LawError> {
    if k == 0 || n < k {
        return precondition(format!("need n ≥ k ≥ 1, got k = {}, n = {}", k, n));
    }
    Ok(w_ratio::<W>(k, n).mul(&nu.fold_pmf::<W>(n, n - k)))
}

/// Probability that a Galton–Watson forest of `k` trees with offspring law
/// `ν` has `n` vertices: `(k/n) P(X_n = n − k)`.
pub fn otter_dwass(nu: &Marginal, k: usize, n: usize, grade: Grade) -> Result<LawResult, LawError> {
    by_grade!(grade, otter_dwass_in(nu, k, n))
}

fn check_shape(spec: &OffspringSpec, r: &[usize], n: &[usize]) -> Result<(), LawError> {
    let d = spec.d();
    if r.len() != d || n.len() != d {
        return precondition(format!(
            "offspring law has {} types but r has {} and n has {} entries",
            d,
            r.len(),
            n.len()
        ));
    }
    if r.iter().all(|&v| v == 0) {
        return precondition("r must have at least one root");
    }
    Ok(())
}

fn by_types_in<W: Weight>(spec: &OffspringSpec, r: &[usize], n: &[usize]) -> Result<W, LawError> {
    check_shape(spec, r, n)?;
    for i in 0..spec.d() {
        if n[i] == 0 || r[i] >= n[i] {
            return precondition(format!(
                "type {}: need 0 ≤ r_i < n_i, got r_i = {}, n_i = {}",
                i + 1,
                r[i],
                n[i]
            ));
        }
    }
    let total_r: usize = r.iter().sum();
    let total_n: usize = n.iter().sum();
    let mut acc = w_ratio::<W>(total_r, total_n);
    for i in 0..spec.d() {
        let t = n[i] - r[i];
        let col = column_prefix::<W>(spec, i, n, t, None);
        acc = acc.mul(&col[t]);
    }
    Ok(acc)
}

/// Whether H2 is known to hold at `(r, n)`: identically distributed columns
/// give it by exchangeability, otherwise it is checked exactly.
fn h2_holds(spec: &OffspringSpec, r: &[usize], n: &[usize]) -> bool {
    spec.has_identical_columns() || verify_h2(spec, n, r).map(|rep| rep.holds).unwrap_or(false)
}

/// `P_r(O_i = n_i ∀ i) = (r/n) ∏_i P(Σ_l X^{l,i}_{n_l} = n_i − r_i)`.
///
/// The product form needs H2. When H2 fails at `(r, n)` the value is still
/// returned, with a warning, and may differ from the true law.
pub fn law_population_by_types(
    spec: &OffspringSpec,
    r: &[usize],
    n: &[usize],
    grade: Grade,
) -> Result<LawResult, LawError> {
    let mut out = by_grade!(grade, by_types_in(spec, r, n))?;
    if !h2_holds(spec, r, n) {
        out.warnings.push(format!(
            "H2 does not hold at r = {:?}, n = {:?}; the product formula may differ from the true law",
            r, n
        ));
    }
    Ok(out)
}

/// Number of `(d−1)`-vectors per column summed over; the size of `A(r, n)`.
fn index_set_size(r: &[usize], n: &[usize], active: &[usize]) -> BigInt {
    let a = active.len() as u64;
    active
        .iter()
        .map(|&j| crate::exact::binomial((n[j] - r[j]) as u64 + a - 1, a - 1))
        .fold(BigInt::one(), |acc, c| acc * c)
}

/// All `(k_{i,j})_{i ≠ j}` over `active` rows with `k_{i,j} ≥ 0` and sum at most `cap`.
fn column_vectors(len: usize, cap: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0usize; len];
    fn rec(pos: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if pos == cur.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..=left {
            cur[pos] = v;
            rec(pos + 1, left - v, cur, out);
        }
        cur[pos] = 0;
    }
    rec(0, cap, &mut cur, &mut out);
    out
}

fn exhaustive_in<W: Weight>(spec: &OffspringSpec, r: &[usize], n: &[usize], budget: u64) -> Result<W, LawError> {
    check_shape(spec, r, n)?;
    for i in 0..spec.d() {
        if r[i] > n[i] {
            return precondition(format!("type {}: r_i = {} exceeds n_i = {}", i + 1, r[i], n[i]));
        }
    }
    // Types with no individual drop out of the determinant.
    let active: Vec<usize> = (0..spec.d()).filter(|&i| n[i] > 0).collect();
    let size = index_set_size(r, n, &active);
    if size > BigInt::from(budget) {
        return Err(LawError::Budget { size, budget });
    }
    let a = active.len();
    // P(X^{i,j}_{n_i} = c) for c = 0..=n_j.
    let tables: Vec<Vec<Vec<W>>> = active
        .iter()
        .map(|&i| active.iter().map(|&j| spec.marginal(i, j).fold_pmf_prefix::<W>(n[i], n[j])).collect())
        .collect();

    // Each column: its full K column and its probability weight.
    let mut columns: Vec<Vec<(Vec<i64>, W)>> = Vec::with_capacity(a);
    for (cj, &j) in active.iter().enumerate() {
        let cap = n[j] - r[j];
        let mut entries = Vec::new();
        for off in column_vectors(a - 1, cap) {
            let mut col = vec![0i64; a];
            let mut w = W::one();
            let mut it = off.iter();
            let mut sum = 0usize;
            for ci in 0..a {
                if ci == cj {
                    continue;
                }
                let k = *it.next().unwrap();
                col[ci] = k as i64;
                sum += k;
                w = w.mul(&tables[ci][cj][k]);
            }
            col[cj] = -((r[j] + sum) as i64);
            w = w.mul(&tables[cj][cj][cap - sum]);
            if !w.is_zero() {
                entries.push((col, w));
            }
        }
        columns.push(entries);
    }

    // Active types have no children of an absent type.
    let mut absent = W::one();
    for &i in &active {
        for j in (0..spec.d()).filter(|&j| n[j] == 0) {
            absent = absent.mul(&spec.marginal(i, j).fold_pmf::<W>(n[i], 0));
        }
    }

    let mut total = W::zero();
    let mut pick = vec![0usize; a];
    if columns.iter().any(|c| c.is_empty()) {
        return Ok(total);
    }
    loop {
        let mut k = vec![vec![0i64; a]; a];
        let mut w = W::one();
        for (cj, &p) in pick.iter().enumerate() {
            let (col, cw) = &columns[cj][p];
            for ci in 0..a {
                k[ci][cj] = col[ci];
            }
            w = w.mul(cw);
        }
        let det = crate::model::neg_determinant(&k);
        if det > BigInt::zero() {
            total = total.add(&W::from_int(&det).mul(&w));
        }
        // Odometer over the column choices.
        let mut pos = a;
        loop {
            if pos == 0 {
                let denom: BigInt = active.iter().map(|&i| BigInt::from(n[i])).product();
                return Ok(total.mul(&absent).mul(&W::from_ratio(&BigRational::new(BigInt::one(), denom))));
            }
            pos -= 1;
            pick[pos] += 1;
            if pick[pos] < columns[pos].len() {
                break;
            }
            pick[pos] = 0;
        }
    }
}

/// `P_r(O_i = n_i ∀ i)` by summing the joint law of populations and
/// parent-type counts over every admissible `K ∈ A(r, n)`. Needs no H2 and
/// allows `r_i = n_i` and `n_i = 0`.
pub fn law_population_exhaustive(
    spec: &OffspringSpec,
    r: &[usize],
    n: &[usize],
    grade: Grade,
    budget: u64,
) -> Result<LawResult, LawError> {
    by_grade!(grade, exhaustive_in(spec, r, n, budget))
}

fn check_d2(spec: &OffspringSpec, r: &[usize], n_total: usize) -> Result<(), LawError> {
    if spec.d() != 2 || r.len() != 2 {
        return precondition("the total-population law is implemented for d = 2");
    }
    if !spec.has_identical_columns() {
        return precondition("the total-population law needs identically distributed columns");
    }
    if r[0] == 0 || r[1] == 0 {
        return precondition(format!("need r_1, r_2 ≥ 1, got r = {:?}", r));
    }
    if r[0] + r[1] >= n_total {
        return precondition(format!("need r < n, got r = {}, n = {}", r[0] + r[1], n_total));
    }
    Ok(())
}

struct D2Terms<W> {
    main: W,
    boundary: [W; 2],
    overcount: [W; 2],
}

fn d2_terms<W: Weight>(spec: &OffspringSpec, r: &[usize], n: usize, childless: bool) -> D2Terms<W> {
    let rt = r[0] + r[1];
    let t = n - rt;
    let x = |j: usize, m: usize, v: usize| spec.marginal(0, j).fold_pmf::<W>(m, v);
    let frac = w_ratio::<W>(rt, n);

    let mut main = W::zero();
    for a in 0..=t {
        main = main.add(&x(0, n, a).mul(&x(1, n, t - a)));
    }
    let main = frac.mul(&main);

    // Boundary n_b = r_b: every type-b vertex is a root, and those roots still
    // carry type-o children into the other subpopulation.
    let boundary_term = |o: usize, b: usize| -> W {
        let no = n - r[b];
        let mut s = W::zero();
        let top = if childless { 0 } else { t };
        for c in 0..=top {
            s = s.add(&w_ratio::<W>(r[o] + c, no).mul(&x(o, no, t - c)).mul(&x(o, r[b], c)));
        }
        s.mul(&x(b, n, 0))
    };
    let boundary = [boundary_term(0, 1), boundary_term(1, 0)];
    let overcount = [
        frac.mul(&x(0, n, t)).mul(&x(1, n, 0)),
        frac.mul(&x(0, n, 0)).mul(&x(1, n, t)),
    ];
    D2Terms { main, boundary, overcount }
}

fn total_d2_in<W: Weight>(spec: &OffspringSpec, r: &[usize], n: usize, childless: bool) -> Result<W, LawError> {
    check_d2(spec, r, n)?;
    let terms = d2_terms::<W>(spec, r, n, childless);
    Ok(terms
        .main
        .add(&terms.boundary[0])
        .add(&terms.boundary[1])
        .sub(&terms.overcount[0])
        .sub(&terms.overcount[1]))
}

/// `P_r(O = n)` for two types with identically distributed columns: the
/// product law summed in closed form over `n_1 + n_2 = n`, corrected at the
/// two boundary splits `n_2 = r_2` and `n_1 = r_1` where the product law
/// does not apply.
pub fn law_total_population_d2(
    spec: &OffspringSpec,
    r: &[usize],
    n_total: usize,
    grade: Grade,
) -> Result<LawResult, LawError> {
    by_grade!(grade, total_d2_in(spec, r, n_total, false))
}

/// Same five terms as [`law_total_population_d2`], but with boundary terms
/// that only count boundary roots without children. This under-counts
/// whenever boundary roots can have children of the other type; it is kept
/// for comparison.
pub fn law_total_population_d2_childless_boundary(
    spec: &OffspringSpec,
    r: &[usize],
    n_total: usize,
    grade: Grade,
) -> Result<LawResult, LawError> {
    by_grade!(grade, total_d2_in(spec, r, n_total, true))
}

/// The five terms `[main, boundary_1, boundary_2, overcount_1, overcount_2]`
/// of [`law_total_population_d2`], exactly.
pub fn total_population_d2_terms(spec: &OffspringSpec, r: &[usize], n_total: usize) -> Result<[Exact; 5], LawError> {
    check_d2(spec, r, n_total)?;
    let t = d2_terms::<Exact>(spec, r, n_total, false);
    let [b1, b2] = t.boundary;
    let [c1, c2] = t.overcount;
    Ok([t.main, b1, b2, c1, c2])
}

fn total_by_summation_in<W: Weight>(spec: &OffspringSpec, r: &[usize], n: usize, budget: u64) -> Result<W, LawError> {
    if spec.d() != 2 || r.len() != 2 {
        return precondition("direct summation is implemented for d = 2");
    }
    if r[0] + r[1] == 0 || r[0] + r[1] > n {
        return precondition(format!("need 0 < r ≤ n, got r = {:?}, n = {}", r, n));
    }
    let mut acc = W::zero();
    for n1 in r[0]..=n - r[1] {
        acc = acc.add(&exhaustive_in::<W>(spec, r, &[n1, n - n1], budget)?);
    }
    Ok(acc)
}

/// `P_r(O = n)` for two types by summing [`law_population_exhaustive`] over
/// every split `n_1 + n_2 = n`.
pub fn total_population_by_summation(
    spec: &OffspringSpec,
    r: &[usize],
    n_total: usize,
    grade: Grade,
    budget: u64,
) -> Result<LawResult, LawError> {
    by_grade!(grade, total_by_summation_in(spec, r, n_total, budget))
}

/// `P_r(O_i = n_i ∀ i)` by the product law when it applies and H2 holds,
/// by the exhaustive sum otherwise.
fn population_in<W: Weight>(spec: &OffspringSpec, r: &[usize], n: &[usize], budget: u64) -> Result<W, LawError> {
    check_shape(spec, r, n)?;
    let product_applies = (0..spec.d()).all(|i| r[i] < n[i]) && h2_holds(spec, r, n);
    if product_applies {
        by_types_in(spec, r, n)
    } else {
        exhaustive_in(spec, r, n, budget)
    }
}

fn divide<W: Weight>(num: &W, den: &W) -> Result<W, LawError> {
    if den.is_zero() {
        return Err(LawError::Precondition("the conditioning event has probability zero".into()));
    }
    num.div(den)
        .ok_or_else(|| LawError::Internal("denominator is not a single exponential term".into()))
}

fn forest_weight<W: Weight>(spec: &OffspringSpec, f: &MultitypeForest) -> W {
    (0..f.len()).fold(W::one(), |acc, v| acc.mul(&spec.offspring_pmf::<W>(f.ty(v), &f.child_counts(v))))
}

fn conditional_in<W: Weight>(spec: &OffspringSpec, f: &MultitypeForest, budget: u64) -> Result<W, LawError> {
    if f.d() != spec.d() {
        return precondition(format!("forest has {} types, offspring law has {}", f.d(), spec.d()));
    }
    let num = forest_weight::<W>(spec, f);
    if num.is_zero() {
        return Err(LawError::ZeroProbability);
    }
    let den = population_in::<W>(spec, &f.root_type(), &f.type_sizes(), budget)?;
    divide(&num, &den)
}

/// `P(F = f | O = n)` where `r` and `n` are read off `f`.
pub fn conditional_forest_probability(
    spec: &OffspringSpec,
    f: &MultitypeForest,
    grade: Grade,
) -> Result<LawResult, LawError> {
    by_grade!(grade, conditional_in(spec, f, DEFAULT_INDEX_BUDGET))
}

fn lambda_in<W: Weight>(spec: &OffspringSpec, ds: &MultitypeDegreeSequence, budget: u64) -> Result<W, LawError> {
    if ds.d() != spec.d() {
        return precondition(format!("degree sequence has {} types, offspring law has {}", ds.d(), spec.d()));
    }
    let count = count_forests_gds(ds)?;
    let mut w = W::from_int(&count);
    for i in 0..ds.d() {
        for j in 0..ds.d() {
            for (k, &c) in ds.table(i, j).iter().enumerate() {
                if c > 0 {
                    w = w.mul(&spec.marginal(i, j).pmf::<W>(k).pow(c as u64));
                }
            }
        }
    }
    let den = population_in::<W>(spec, ds.roots(), &ds.type_sizes(), budget)?;
    divide(&w, &den)
}

/// `λ_S = P(N̂ = S | O = n)`: the probability that the conditioned forest
/// has degree sequence `S`.
pub fn degree_sequence_probability(
    spec: &OffspringSpec,
    ds: &MultitypeDegreeSequence,
    grade: Grade,
) -> Result<LawResult, LawError> {
    by_grade!(grade, lambda_in(spec, ds, DEFAULT_INDEX_BUDGET))
}

/// `[(r/n)]` as a rational, used by the counting formulas.
pub(crate) fn root_fraction(r: &[usize], n: &[usize]) -> BigRational {
    let rt: usize = r.iter().sum();
    let nt: usize = n.iter().sum();
    if nt == 0 {
        return BigRational::zero();
    }
    ratio(rt, nt)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geo() -> Marginal {
        Marginal::geometric(ratio(1, 2)).unwrap()
    }

    fn q(a: i64, b: i64) -> Exact {
        Exact::rational(ratio(a, b))
    }

    #[test]
    fn otter_dwass_examples() {
        assert_eq!(otter_dwass(&geo(), 1, 1, Grade::Exact).unwrap().exact_value(), &q(1, 2));
        assert_eq!(otter_dwass(&geo(), 1, 2, Grade::Exact).unwrap().exact_value(), &q(1, 8));
        assert!(otter_dwass(&geo(), 0, 2, Grade::Exact).is_err());
        let f = otter_dwass(&geo(), 1, 2, Grade::Float).unwrap();
        assert!(f.exact.is_none());
        assert!((f.float - 0.125).abs() < 1e-15);
    }

    #[test]
    fn worked_by_types_value() {
        let spec = OffspringSpec::uniform(2, geo()).unwrap();
        let v = law_population_by_types(&spec, &[1, 1], &[2, 2], Grade::Exact).unwrap();
        assert_eq!(v.exact_value(), &q(1, 128));
        assert!(v.warnings.is_empty());
        let e = law_population_exhaustive(&spec, &[1, 1], &[2, 2], Grade::Exact, 1000).unwrap();
        assert_eq!(e.exact_value(), &q(1, 128));
    }

    #[test]
    fn exhaustive_reduces_to_unitype() {
        let spec = OffspringSpec::uniform(2, geo()).unwrap();
        let od = otter_dwass(&geo(), 2, 5, Grade::Exact).unwrap();
        // With no type-2 individual the second type only forbids type-2 children.
        let e = law_population_exhaustive(&spec, &[2, 0], &[5, 0], Grade::Exact, 1000).unwrap();
        let no_type2 = Exact::rational(ratio(1, 2)).pow(5);
        assert_eq!(e.exact_value(), &od.exact_value().mul(&no_type2));
    }

    #[test]
    fn budget_is_enforced() {
        let spec = OffspringSpec::uniform(2, geo()).unwrap();
        assert!(matches!(
            law_population_exhaustive(&spec, &[1, 1], &[40, 40], Grade::Exact, 10),
            Err(LawError::Budget { .. })
        ));
    }

    #[test]
    fn total_population_against_summation() {
        let spec = OffspringSpec::uniform(2, geo()).unwrap();
        for n in 3..=6 {
            let a = law_total_population_d2(&spec, &[1, 1], n, Grade::Exact).unwrap();
            let b = total_population_by_summation(&spec, &[1, 1], n, Grade::Exact, 10_000).unwrap();
            assert_eq!(a.exact, b.exact, "n = {}", n);
        }
        assert_eq!(law_total_population_d2(&spec, &[1, 1], 4, Grade::Exact).unwrap().exact_value(), &q(9, 512));
        assert_eq!(
            law_total_population_d2_childless_boundary(&spec, &[1, 1], 4, Grade::Exact).unwrap().exact_value(),
            &q(3, 256)
        );
        assert!(law_total_population_d2(&spec, &[1, 0], 5, Grade::Exact).is_err());
    }

    #[test]
    fn conditional_geometric_is_uniform() {
        let spec = OffspringSpec::uniform(2, geo()).unwrap();
        let f = MultitypeForest::from_parents(2, vec![0, 1, 0, 1], &[None, None, Some(0), Some(1)]).unwrap();
        let p = conditional_forest_probability(&spec, &f, Grade::Exact).unwrap();
        assert_eq!(p.exact_value(), &q(1, 8));
    }
}
