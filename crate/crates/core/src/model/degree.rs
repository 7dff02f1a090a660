use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use super::matrix::neg_determinant;

/// Which structural condition a degree sequence failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Condition {
    /// Table dimensions do not match `d`.
    Shape,
    /// Unitype identity `Σ N_i = m + Σ i N_i`.
    ForestIdentity,
    /// At least one root is required (`m ≥ 1`, or `r_i > 0` for some `i`).
    RootsPositive,
    /// Condition 1: every table in row `i` has the same total.
    RowTotals,
    /// Every type must be present (`n_i ≥ 1`).
    TypeNonEmpty,
    /// Condition 2: `n_j = r_j + Σ_i Σ_k k N_{i,j}(k)`.
    Balance,
    /// `r_i ≤ n_i`.
    RootBound,
    /// Condition 3: `k_{i,i} < 0`.
    DiagonalNegative,
    /// Condition 3: `det(-K) > 0`.
    DeterminantPositive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub condition: Condition,
    /// 0-based type index the violation refers to, when there is one.
    pub ty: Option<usize>,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub struct InvalidDegreeSequence {
    pub violations: Vec<Violation>,
}

impl fmt::Display for InvalidDegreeSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid degree sequence: ")?;
        for (idx, v) in self.violations.iter().enumerate() {
            if idx > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{}", v.message)?;
        }
        Ok(())
    }
}

impl InvalidDegreeSequence {
    fn single(condition: Condition, ty: Option<usize>, message: String) -> Self {
        InvalidDegreeSequence { violations: vec![Violation { condition, ty, message }] }
    }

    pub fn has(&self, condition: Condition) -> bool {
        self.violations.iter().any(|v| v.condition == condition)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Invalid(#[from] InvalidDegreeSequence),
}

/// Counts `N_i` of vertices with `i` children together with the number of
/// trees `m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UnitypeDegreeSequence {
    counts: Vec<usize>,
    roots: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UnitypeSummary {
    pub size: usize,
    pub roots: usize,
}

impl UnitypeDegreeSequence {
    pub fn new(mut counts: Vec<usize>, roots: usize) -> Self {
        while counts.last() == Some(&0) {
            counts.pop();
        }
        UnitypeDegreeSequence { counts, roots }
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn count(&self, i: usize) -> usize {
        self.counts.get(i).copied().unwrap_or(0)
    }

    pub fn roots(&self) -> usize {
        self.roots
    }

    /// Number of vertices `s = Σ N_i`.
    pub fn size(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn validate(&self) -> Result<UnitypeSummary, InvalidDegreeSequence> {
        let mut violations = Vec::new();
        if self.roots == 0 {
            violations.push(Violation {
                condition: Condition::RootsPositive,
                ty: None,
                message: "m = 0, a forest needs at least one tree".into(),
            });
        }
        let s = self.size();
        let rhs = self.roots + self.counts.iter().enumerate().map(|(i, n)| i * n).sum::<usize>();
        if s != rhs {
            violations.push(Violation {
                condition: Condition::ForestIdentity,
                ty: None,
                message: format!("Σ N_i = {} but m + Σ i·N_i = {}", s, rhs),
            });
        }
        if violations.is_empty() {
            Ok(UnitypeSummary { size: s, roots: self.roots })
        } else {
            Err(InvalidDegreeSequence { violations })
        }
    }

    /// The sorted child sequence `(0,…,0,1,…,1,2,…)`.
    pub fn child_sequence(&self) -> Vec<usize> {
        expand(&self.counts)
    }

    pub fn to_multitype(&self) -> MultitypeDegreeSequence {
        MultitypeDegreeSequence::new(vec![self.roots], vec![vec![self.counts.clone()]])
            .expect("d = 1 shapes are always consistent")
    }
}

fn expand(table: &[usize]) -> Vec<usize> {
    table
        .iter()
        .enumerate()
        .flat_map(|(k, &count)| std::iter::repeat_n(k, count))
        .collect()
}

/// Multitype degree sequence: root vector `r` and tables `S_{i,j}` where
/// `S_{i,j}[k]` counts type-`i` vertices with exactly `k` type-`j` children.
///
/// Types are 0-based in the API and 1-based in the JSON form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultitypeDegreeSequence {
    d: usize,
    r: Vec<usize>,
    tables: Vec<Vec<usize>>,
}

/// Downstream operations an instance qualifies for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Qualifications {
    /// Uniform sampling and exact counting (any valid sequence).
    pub uniform_sampling: bool,
    /// Population-by-types law and enumeration formulas: `r_i < n_i` for all `i`.
    pub population_law: bool,
    /// Conditioned multitype sampling: `1 ≤ r_i < n_i` for all `i`.
    pub conditioned_sampling: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DsSummary {
    pub n: Vec<usize>,
    /// `k_{i,j} = Σ_k k N_{i,j}(k) − n_i 1{i=j}`.
    pub k: Vec<Vec<i64>>,
    pub det: BigInt,
    pub qualifications: Qualifications,
}

#[derive(Serialize, Deserialize)]
struct DsFile {
    d: usize,
    r: Vec<usize>,
    tables: BTreeMap<String, Vec<usize>>,
}

impl MultitypeDegreeSequence {
    /// `tables[i][j]` is `S_{i,j}`. Only the shape is checked here.
    pub fn new(r: Vec<usize>, tables: Vec<Vec<Vec<usize>>>) -> Result<Self, InvalidDegreeSequence> {
        let d = r.len();
        if d == 0 {
            return Err(InvalidDegreeSequence::single(
                Condition::Shape,
                None,
                "d must be at least 1".into(),
            ));
        }
        if tables.len() != d || tables.iter().any(|row| row.len() != d) {
            return Err(InvalidDegreeSequence::single(
                Condition::Shape,
                None,
                format!("expected {d}x{d} tables for {d} root counts"),
            ));
        }
        let tables = tables
            .into_iter()
            .flatten()
            .map(|mut t| {
                while t.last() == Some(&0) {
                    t.pop();
                }
                t
            })
            .collect();
        Ok(MultitypeDegreeSequence { d, r, tables })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn roots(&self) -> &[usize] {
        &self.r
    }

    pub fn table(&self, i: usize, j: usize) -> &[usize] {
        &self.tables[i * self.d + j]
    }

    /// `Σ_k N_{i,j}(k)`.
    fn row_total(&self, i: usize, j: usize) -> usize {
        self.table(i, j).iter().sum()
    }

    /// `Σ_k k N_{i,j}(k)`.
    fn child_total(&self, i: usize, j: usize) -> usize {
        self.table(i, j).iter().enumerate().map(|(k, n)| k * n).sum()
    }

    /// Type sizes read off the diagonal tables (meaningful once Condition 1 holds).
    pub fn type_sizes(&self) -> Vec<usize> {
        (0..self.d).map(|i| self.row_total(i, i)).collect()
    }

    /// The matrix `K` of terminal values.
    pub fn terminal_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.type_sizes();
        (0..self.d)
            .map(|i| {
                (0..self.d)
                    .map(|j| {
                        let c = self.child_total(i, j) as i64;
                        if i == j {
                            c - n[i] as i64
                        } else {
                            c
                        }
                    })
                    .collect()
            })
            .collect()
    }

    pub fn validate(&self) -> Result<DsSummary, InvalidDegreeSequence> {
        let d = self.d;
        let mut violations = Vec::new();
        let n = self.type_sizes();
        for i in 0..d {
            let totals: Vec<usize> = (0..d).map(|j| self.row_total(i, j)).collect();
            if totals.iter().any(|&t| t != n[i]) {
                violations.push(Violation {
                    condition: Condition::RowTotals,
                    ty: Some(i),
                    message: format!(
                        "type {}: table totals Σ_k N_{{{},j}}(k) over j are {:?}, expected all equal",
                        i + 1,
                        i + 1,
                        totals
                    ),
                });
            }
            if n[i] == 0 {
                violations.push(Violation {
                    condition: Condition::TypeNonEmpty,
                    ty: Some(i),
                    message: format!("type {}: n_{} = 0, every type needs a vertex", i + 1, i + 1),
                });
            }
            if self.r[i] > n[i] {
                violations.push(Violation {
                    condition: Condition::RootBound,
                    ty: Some(i),
                    message: format!("type {}: r_{} = {} exceeds n_{} = {}", i + 1, i + 1, self.r[i], i + 1, n[i]),
                });
            }
        }
        if self.r.iter().all(|&v| v == 0) {
            violations.push(Violation {
                condition: Condition::RootsPositive,
                ty: None,
                message: "r = 0, at least one root is required".into(),
            });
        }
        for j in 0..d {
            let rhs = self.r[j] + (0..d).map(|i| self.child_total(i, j)).sum::<usize>();
            if rhs != n[j] {
                violations.push(Violation {
                    condition: Condition::Balance,
                    ty: Some(j),
                    message: format!(
                        "type {}: n_{} = {} but r_{} + Σ_i Σ_k k·N_{{i,{}}}(k) = {}",
                        j + 1,
                        j + 1,
                        n[j],
                        j + 1,
                        j + 1,
                        rhs
                    ),
                });
            }
        }
        let k = self.terminal_matrix();
        for i in 0..d {
            if k[i][i] >= 0 {
                violations.push(Violation {
                    condition: Condition::DiagonalNegative,
                    ty: Some(i),
                    message: format!("type {}: k_{{{},{}}} = {} is not negative", i + 1, i + 1, i + 1, k[i][i]),
                });
            }
        }
        let det = neg_determinant(&k);
        if !det.is_positive() {
            violations.push(Violation {
                condition: Condition::DeterminantPositive,
                ty: None,
                message: format!("det(-K) = {} is not positive", det),
            });
        }
        if !violations.is_empty() {
            return Err(InvalidDegreeSequence { violations });
        }
        let below = (0..d).all(|i| self.r[i] < n[i]);
        let qualifications = Qualifications {
            uniform_sampling: true,
            population_law: below,
            conditioned_sampling: below && self.r.iter().all(|&v| v >= 1),
        };
        Ok(DsSummary { n, k, det, qualifications })
    }

    pub fn child_sequence(&self) -> ChildSequence {
        ChildSequence { d: self.d, seqs: self.tables.iter().map(|t| expand(t)).collect() }
    }

    pub fn to_json(&self) -> String {
        let mut tables = BTreeMap::new();
        for i in 0..self.d {
            for j in 0..self.d {
                let mut t = self.table(i, j).to_vec();
                if t.is_empty() {
                    t.push(0);
                }
                tables.insert(format!("{},{}", i + 1, j + 1), t);
            }
        }
        let file = DsFile { d: self.d, r: self.r.clone(), tables };
        serde_json::to_string_pretty(&file).expect("degree sequences always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, LoadError> {
        let file: DsFile = serde_json::from_str(text).map_err(|e| LoadError::Parse(e.to_string()))?;
        if file.r.len() != file.d {
            return Err(InvalidDegreeSequence::single(
                Condition::Shape,
                None,
                format!("d = {} but r has {} entries", file.d, file.r.len()),
            )
            .into());
        }
        let mut tables = vec![vec![Vec::new(); file.d]; file.d];
        for (key, table) in file.tables {
            let parsed = key
                .split_once(',')
                .and_then(|(a, b)| Some((a.trim().parse::<usize>().ok()?, b.trim().parse::<usize>().ok()?)));
            match parsed {
                Some((i, j)) if (1..=file.d).contains(&i) && (1..=file.d).contains(&j) => {
                    tables[i - 1][j - 1] = table;
                }
                _ => return Err(LoadError::Parse(format!("bad table key {:?}", key))),
            }
        }
        Ok(MultitypeDegreeSequence::new(file.r, tables)?)
    }
}

impl fmt::Display for MultitypeDegreeSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "r={:?}", self.r)?;
        for i in 0..self.d {
            for j in 0..self.d {
                write!(f, " S{},{}={:?}", i + 1, j + 1, self.table(i, j))?;
            }
        }
        Ok(())
    }
}

/// Canonical child sequences `c_{i,j}` (sorted, length `n_i`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChildSequence {
    d: usize,
    seqs: Vec<Vec<usize>>,
}

impl ChildSequence {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn get(&self, i: usize, j: usize) -> &[usize] {
        &self.seqs[i * self.d + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn ten_vertex() -> MultitypeDegreeSequence {
        MultitypeDegreeSequence::new(
            vec![1, 0],
            vec![vec![vec![4, 1, 1], vec![3, 3]], vec![vec![3, 0, 1], vec![3, 1]]],
        )
        .unwrap()
    }

    #[test]
    fn unitype_examples() {
        assert!(UnitypeDegreeSequence::new(vec![1], 1).validate().is_ok());
        assert_eq!(
            UnitypeDegreeSequence::new(vec![2, 0, 1], 1).validate().unwrap(),
            UnitypeSummary { size: 3, roots: 1 }
        );
        assert!(UnitypeDegreeSequence::new(vec![1, 1], 1).validate().is_ok());
        let err = UnitypeDegreeSequence::new(vec![2, 1], 1).validate().unwrap_err();
        assert!(err.has(Condition::ForestIdentity));
        assert!(err.to_string().contains("Σ N_i = 3 but m + Σ i·N_i = 2"));
        let err = UnitypeDegreeSequence::new(vec![0], 0).validate().unwrap_err();
        assert!(err.has(Condition::RootsPositive));
    }

    #[test]
    fn trailing_zeros_are_dropped() {
        assert_eq!(UnitypeDegreeSequence::new(vec![2, 0, 1, 0, 0], 1).counts(), &[2, 0, 1]);
    }

    #[test]
    fn ten_vertex_summary() {
        let s = ten_vertex().validate().unwrap();
        assert_eq!(s.n, vec![6, 4]);
        assert_eq!(s.k, vec![vec![-3, 3], vec![2, -3]]);
        assert_eq!(s.det, BigInt::from(3));
        assert!(s.qualifications.population_law);
        assert!(!s.qualifications.conditioned_sampling);
    }

    #[test]
    fn column_identity() {
        let ds = ten_vertex();
        let s = ds.validate().unwrap();
        for j in 0..2 {
            let off: i64 = (0..2).filter(|&i| i != j).map(|i| s.k[i][j]).sum();
            assert_eq!(-s.k[j][j], ds.roots()[j] as i64 + off);
        }
    }

    #[test]
    fn single_vertex() {
        let ds = MultitypeDegreeSequence::new(vec![1], vec![vec![vec![1]]]).unwrap();
        let s = ds.validate().unwrap();
        assert_eq!(s.n, vec![1]);
        assert_eq!(s.det, BigInt::from(1));
    }

    #[test]
    fn child_sequences() {
        let c = ten_vertex().child_sequence();
        assert_eq!(c.get(0, 0), &[0, 0, 0, 0, 1, 2]);
        assert_eq!(c.get(1, 1), &[0, 0, 0, 1]);
        assert_eq!(UnitypeDegreeSequence::new(vec![1], 1).child_sequence(), vec![0]);
    }

    #[test]
    fn every_violation_is_reported() {
        let ds = MultitypeDegreeSequence::new(
            vec![0, 0],
            vec![vec![vec![1, 1], vec![3]], vec![vec![0], vec![]]],
        )
        .unwrap();
        let err = ds.validate().unwrap_err();
        assert!(err.has(Condition::RowTotals));
        assert!(err.has(Condition::TypeNonEmpty));
        assert!(err.has(Condition::RootsPositive));
        assert!(err.has(Condition::Balance));
    }

    #[test]
    fn zero_determinant_rejected() {
        // Two type-1 vertices each with one type-2 child and vice versa: K has
        // zero column sums, so det(-K) = 0.
        let ds = MultitypeDegreeSequence::new(
            vec![1, 0],
            vec![vec![vec![1], vec![0, 1]], vec![vec![0, 1], vec![1]]],
        )
        .unwrap();
        let err = ds.validate().unwrap_err();
        assert!(err.has(Condition::Balance) || err.has(Condition::DeterminantPositive));
    }

    #[test]
    fn json_round_trip() {
        let ds = ten_vertex();
        let text = ds.to_json();
        assert!(text.contains("\"1,1\""));
        assert_eq!(MultitypeDegreeSequence::from_json(&text).unwrap(), ds);
        assert!(matches!(MultitypeDegreeSequence::from_json("{"), Err(LoadError::Parse(_))));
    }

    #[test]
    fn unitype_and_multitype_agree() {
        for (counts, m) in [(vec![1], 1), (vec![2, 0, 1], 1), (vec![2, 1], 1), (vec![3], 2), (vec![0], 0)] {
            let u = UnitypeDegreeSequence::new(counts, m);
            assert_eq!(u.validate().is_ok(), u.to_multitype().validate().is_ok(), "{:?}", u);
        }
    }
}
