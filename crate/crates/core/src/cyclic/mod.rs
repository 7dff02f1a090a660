//! Cyclic shifts of path bundles, the system `(r, x)`, good cyclical
//! permutations and the Vervaat transforms.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::model::{neg_determinant, MultitypeDegreeSequence, Path, PathBundle};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CyclicError {
    #[error("shift {shift} out of range for a path of length {len}")]
    ShiftOutOfRange { shift: usize, len: usize },
    #[error("vector has {got} entries for {d} types")]
    Shape { got: usize, d: usize },
    #[error("root vector must have a positive entry")]
    NoRoots,
    #[error("incomparable minimal solutions {a:?} and {b:?}")]
    InconsistentMinimal { a: Vec<usize>, b: Vec<usize> },
    #[error("terminal matrix is not square")]
    NotSquare,
    #[error("k_({i},{i}) = 0, the cyclic lemma needs non-zero diagonal entries")]
    ZeroDiagonal { i: usize },
    #[error("column {j}: -k_jj = {lhs} but r_j + sum of off-diagonal k_ij = {rhs}")]
    Inconsistent { j: usize, lhs: i64, rhs: i64 },
    #[error("det(-K) = {0} is not positive")]
    NonPositiveDeterminant(BigInt),
    #[error("u = {u} out of range {lo}..={hi}")]
    UOutOfRange { u: u64, lo: u64, hi: String },
    #[error("system (r, x) is not solved at n")]
    NotSolvedAtN,
    #[error("path is not a bridge: {0}")]
    NotBridge(String),
    #[error("bundle has no good cyclical permutation")]
    NoGoodPermutation,
}

/// A good shift `q` together with its 0-based rank in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoodPermutationIndex {
    pub q: Vec<usize>,
    pub rank: usize,
}

/// `θ_i(y)`: rotate the increments left by `i`. `i = len` is the full rotation.
pub fn cyclic_shift_unitype(y: &Path, i: usize) -> Result<Path, CyclicError> {
    let len = y.len();
    if i > len {
        return Err(CyclicError::ShiftOutOfRange { shift: i, len });
    }
    let mut inc = y.increments().to_vec();
    if len > 0 {
        inc.rotate_left(i % len);
    }
    Ok(Path::from_increments(inc))
}

/// `θ_{q,n}(x)`: shift every `x^{i,j}` by `q_i`.
pub fn cyclic_shift_multitype(x: &PathBundle, q: &[usize]) -> Result<PathBundle, CyclicError> {
    let d = x.d();
    check_shift(x, q)?;
    let inc = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    let mut p = x.increments(i, j).to_vec();
                    p.rotate_left(q[i]);
                    p
                })
                .collect()
        })
        .collect();
    Ok(PathBundle::new(inc).expect("rotation preserves S_d"))
}

fn check_shift(x: &PathBundle, q: &[usize]) -> Result<(), CyclicError> {
    if q.len() != x.d() {
        return Err(CyclicError::Shape { got: q.len(), d: x.d() });
    }
    for (i, &qi) in q.iter().enumerate() {
        if qi >= x.lengths()[i] {
            return Err(CyclicError::ShiftOutOfRange { shift: qi, len: x.lengths()[i] });
        }
    }
    Ok(())
}

fn check_roots(x: &PathBundle, r: &[usize]) -> Result<(), CyclicError> {
    if r.len() != x.d() {
        return Err(CyclicError::Shape { got: r.len(), d: x.d() });
    }
    if r.iter().all(|&v| v == 0) {
        return Err(CyclicError::NoRoots);
    }
    Ok(())
}

/// Value of the shifted path `θ_{q_i}(x^{i,j})` at time `m`.
#[inline]
fn shifted_value(x: &PathBundle, i: usize, j: usize, q: usize, m: usize) -> i64 {
    let n = x.lengths()[i];
    let v = x.values(i, j);
    if m + q <= n {
        v[m + q] - v[q]
    } else {
        v[n] - v[q] + v[m + q - n]
    }
}

/// `r_j + Σ_i x^{i,j}(m_i) = 0` for every `j`.
pub fn solves(r: &[usize], x: &PathBundle, m: &[usize]) -> bool {
    let d = x.d();
    (0..d).all(|j| r[j] as i64 + (0..d).map(|i| x.value(i, j, m[i])).sum::<i64>() == 0)
}

/// Componentwise-smallest solution of `(r, x)`, found by scanning every
/// `m ≤ n`. Every solution is collected and the minimal ones compared, so a
/// bundle outside `S_d` semantics shows up as an error instead of a wrong answer.
pub fn minimal_solution(r: &[usize], x: &PathBundle) -> Result<Option<Vec<usize>>, CyclicError> {
    check_roots(x, r)?;
    let zero = vec![0; x.d()];
    scan_minimal(r, x, &zero)
}

fn scan_minimal(r: &[usize], x: &PathBundle, q: &[usize]) -> Result<Option<Vec<usize>>, CyclicError> {
    let d = x.d();
    let n = x.lengths();
    let mut solutions: Vec<Vec<usize>> = Vec::new();
    let mut m = vec![0; d];
    'points: loop {
        let solved = (0..d).all(|j| {
            r[j] as i64 + (0..d).map(|i| shifted_value(x, i, j, q[i], m[i])).sum::<i64>() == 0
        });
        if solved {
            solutions.push(m.clone());
        }
        for idx in (0..d).rev() {
            if m[idx] < n[idx] {
                m[idx] += 1;
                continue 'points;
            }
            m[idx] = 0;
        }
        break;
    }
    solutions.sort_by_key(|s| s.iter().sum::<usize>());
    let leq = |a: &[usize], b: &[usize]| a.iter().zip(b).all(|(x, y)| x <= y);
    let minimal: Vec<&Vec<usize>> = solutions
        .iter()
        .filter(|s| !solutions.iter().any(|t| t != *s && leq(t, s)))
        .collect();
    match minimal.len() {
        0 => Ok(None),
        1 => Ok(Some(minimal[0].clone())),
        _ => Err(CyclicError::InconsistentMinimal { a: minimal[0].clone(), b: minimal[1].clone() }),
    }
}

/// Least solution of `(r, θ_q(x))` by exploration: advance a coordinate `j`
/// while its count `r_j + Σ_i x^{i,j}(m_i)` is positive. For `S_d` bundles the
/// exploration never overshoots a solution, so it stops at the least one.
pub fn least_solution_shifted(r: &[usize], x: &PathBundle, q: &[usize]) -> Option<Vec<usize>> {
    let d = x.d();
    let n = x.lengths();
    let mut level: Vec<i64> = r.iter().map(|&v| v as i64).collect();
    let mut m = vec![0usize; d];
    loop {
        let mut progressed = false;
        for j in 0..d {
            while m[j] < n[j] && level[j] > 0 {
                let pos = (m[j] + q[j]) % n[j];
                for (k, lvl) in level.iter_mut().enumerate() {
                    *lvl += x.increments(j, k)[pos];
                }
                m[j] += 1;
                progressed = true;
            }
        }
        if !progressed {
            break;
        }
    }
    level.iter().all(|&v| v == 0).then_some(m)
}

pub fn least_solution(r: &[usize], x: &PathBundle) -> Option<Vec<usize>> {
    least_solution_shifted(r, x, &vec![0; x.d()])
}

/// `θ_q(x)` admits no solution `m < n` for the system with roots `r`.
pub fn is_good_permutation(r: &[usize], x: &PathBundle, q: &[usize]) -> Result<bool, CyclicError> {
    check_roots(x, r)?;
    check_shift(x, q)?;
    Ok(good_unchecked(r, x, q))
}

fn good_unchecked(r: &[usize], x: &PathBundle, q: &[usize]) -> bool {
    match least_solution_shifted(r, x, q) {
        None => true,
        Some(m) => m == x.lengths(),
    }
}

/// Same predicate decided by the exhaustive lattice scan.
pub fn is_good_permutation_by_scan(r: &[usize], x: &PathBundle, q: &[usize]) -> Result<bool, CyclicError> {
    check_roots(x, r)?;
    check_shift(x, q)?;
    Ok(match scan_minimal(r, x, q)? {
        None => true,
        Some(m) => m == x.lengths(),
    })
}

fn check_solved_at_n(r: &[usize], x: &PathBundle) -> Result<(), CyclicError> {
    check_roots(x, r)?;
    if !solves(r, x, x.lengths()) {
        return Err(CyclicError::NotSolvedAtN);
    }
    Ok(())
}

/// Iterates `q` in lexicographic order (first coordinate most significant).
struct Odometer {
    n: Vec<usize>,
    cur: Option<Vec<usize>>,
}

impl Odometer {
    fn new(n: &[usize]) -> Self {
        let cur = (!n.contains(&0)).then(|| vec![0; n.len()]);
        Odometer { n: n.to_vec(), cur }
    }
}

impl Iterator for Odometer {
    type Item = Vec<usize>;
    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.cur.clone()?;
        let mut q = out.clone();
        let mut done = true;
        for idx in (0..q.len()).rev() {
            if q[idx] + 1 < self.n[idx] {
                q[idx] += 1;
                done = false;
                break;
            }
            q[idx] = 0;
        }
        self.cur = (!done).then_some(q);
        Some(out)
    }
}

/// Every good shift in lexicographic order of `q`.
pub fn enumerate_good_permutations(r: &[usize], x: &PathBundle) -> Result<Vec<GoodPermutationIndex>, CyclicError> {
    check_solved_at_n(r, x)?;
    Ok(Odometer::new(x.lengths())
        .filter(|q| good_unchecked(r, x, q))
        .enumerate()
        .map(|(rank, q)| GoodPermutationIndex { q, rank })
        .collect())
}

/// `det(-K)` for a terminal matrix, checking the lemma's hypotheses. With `r`
/// given, the column identity `-k_jj = r_j + Σ_{i≠j} k_ij` is checked too.
pub fn count_good_permutations(k: &[Vec<i64>], r: Option<&[usize]>) -> Result<BigInt, CyclicError> {
    let d = k.len();
    if d == 0 || k.iter().any(|row| row.len() != d) {
        return Err(CyclicError::NotSquare);
    }
    for i in 0..d {
        if k[i][i] == 0 {
            return Err(CyclicError::ZeroDiagonal { i: i + 1 });
        }
    }
    if let Some(r) = r {
        check_column_identity(k, r)?;
    }
    let det = neg_determinant(k);
    if !det.is_positive() {
        return Err(CyclicError::NonPositiveDeterminant(det));
    }
    Ok(det)
}

pub fn count_good_permutations_ds(ds: &MultitypeDegreeSequence) -> Result<BigInt, CyclicError> {
    count_good_permutations(&ds.terminal_matrix(), Some(ds.roots()))
}

fn check_column_identity(k: &[Vec<i64>], r: &[usize]) -> Result<(), CyclicError> {
    let d = k.len();
    if r.len() != d {
        return Err(CyclicError::Shape { got: r.len(), d });
    }
    for j in 0..d {
        let lhs = -k[j][j];
        let rhs = r[j] as i64 + (0..d).filter(|&i| i != j).map(|i| k[i][j]).sum::<i64>();
        if lhs != rhs {
            return Err(CyclicError::Inconsistent { j: j + 1, lhs, rhs });
        }
    }
    Ok(())
}

/// Unitype Vervaat transform `V(y, u) = θ_{τ_u}(y)` with `τ_u` the first hit
/// of `min(y) + u`. `u` is 0-based, `0 ≤ u < m`.
pub fn vervaat_unitype(y: &Path, u: usize) -> Result<Path, CyclicError> {
    if y.is_empty() || !y.is_skip_free() {
        return Err(CyclicError::NotBridge("needs a non-empty downward skip-free path".into()));
    }
    let terminal = y.terminal();
    if terminal >= 0 {
        return Err(CyclicError::NotBridge(format!("terminal value {} is not negative", terminal)));
    }
    let m = (-terminal) as usize;
    if u >= m {
        return Err(CyclicError::UOutOfRange { u: u as u64, lo: 0, hi: (m - 1).to_string() });
    }
    let values = y.values();
    let min = *values.iter().min().unwrap();
    let target = min + u as i64;
    let tau = values.iter().position(|&v| v == target).unwrap() + 1;
    cyclic_shift_unitype(y, tau)
}

/// Multidimensional Vervaat transform: the `u`-th (1-based) good cyclical
/// permutation of the bridge `w_b` in lexicographic order of `q`.
pub fn vervaat_multitype(w_b: &PathBundle, r: &[usize], u: u64) -> Result<PathBundle, CyclicError> {
    let q = vervaat_shift(w_b, r, u)?;
    cyclic_shift_multitype(w_b, &q)
}

/// The shift `q` selected by [`vervaat_multitype`].
pub fn vervaat_shift(w_b: &PathBundle, r: &[usize], u: u64) -> Result<Vec<usize>, CyclicError> {
    check_solved_at_n(r, w_b)?;
    let det = count_good_permutations(&w_b.terminal(), Some(r))?;
    let hi = det.to_u64();
    if u == 0 || hi.is_some_and(|h| u > h) {
        return Err(CyclicError::UOutOfRange { u, lo: 1, hi: det.to_string() });
    }
    let mut seen = 0u64;
    for q in Odometer::new(w_b.lengths()) {
        if good_unchecked(r, w_b, &q) {
            seen += 1;
            if seen == u {
                return Ok(q);
            }
        }
    }
    Err(CyclicError::NoGoodPermutation)
}

/// Parent vectors `(i_1, …, i_d)` of the elementary forests: `i_j` is the
/// 1-based type of the parent of the type-`j` vertex, 0 for a root.
pub fn elementary_forests(d: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if d == 0 {
        return out;
    }
    let mut v = vec![0usize; d];
    'vectors: loop {
        let acyclic = (0..d).all(|start| {
            let mut cur = start + 1;
            for _ in 0..=d {
                if cur == 0 {
                    return true;
                }
                cur = v[cur - 1];
            }
            false
        });
        if acyclic {
            out.push(v.clone());
        }
        for idx in (0..d).rev() {
            if v[idx] < d {
                v[idx] += 1;
                continue 'vectors;
            }
            v[idx] = 0;
        }
        break;
    }
    out
}

/// `Σ_{D} ∏_j k_{i_j, j}` with `k_{0,j} = r_j`; equals `det(-K)`.
pub fn det_expansion(k: &[Vec<i64>], r: &[usize]) -> Result<BigInt, CyclicError> {
    let d = k.len();
    if d == 0 || k.iter().any(|row| row.len() != d) {
        return Err(CyclicError::NotSquare);
    }
    check_column_identity(k, r)?;
    let mut total = BigInt::zero();
    for forest in elementary_forests(d) {
        let mut prod = BigInt::from(1);
        for (j, &p) in forest.iter().enumerate() {
            let factor = if p == 0 { r[j] as i64 } else { k[p - 1][j] };
            prod *= factor;
            if prod.is_zero() {
                break;
            }
        }
        total += prod;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(inc: &[i64]) -> Path {
        Path::from_increments(inc.to_vec())
    }

    #[test]
    fn unitype_shifts() {
        let y = p(&[-1, 1, -1]);
        assert_eq!(cyclic_shift_unitype(&y, 0).unwrap(), y);
        assert_eq!(cyclic_shift_unitype(&y, 1).unwrap(), p(&[1, -1, -1]));
        assert_eq!(cyclic_shift_unitype(&y, 3).unwrap(), y);
        assert!(cyclic_shift_unitype(&y, 4).is_err());
    }

    #[test]
    fn unitype_vervaat() {
        assert_eq!(vervaat_unitype(&p(&[-1, 1, -1]), 0).unwrap(), p(&[1, -1, -1]));
        let exc = p(&[1, -1, -1]);
        assert_eq!(vervaat_unitype(&exc, 0).unwrap(), exc);
        assert!(vervaat_unitype(&exc, 1).is_err());
        // m = 2: the two choices of u give the two excursions of this bridge.
        let y = p(&[-1, 0, 1, -1, -1]);
        let a = vervaat_unitype(&y, 0).unwrap();
        let b = vervaat_unitype(&y, 1).unwrap();
        assert_ne!(a, b);
        assert_eq!(a, y);
        assert_eq!(b, p(&[0, 1, -1, -1, -1]));
    }

    #[test]
    fn elementary_forest_counts() {
        assert_eq!(elementary_forests(1), vec![vec![0]]);
        assert_eq!(elementary_forests(2), vec![vec![0, 0], vec![0, 1], vec![2, 0]]);
        assert_eq!(elementary_forests(3).len(), 16);
        assert_eq!(elementary_forests(4).len(), 125);
    }

    #[test]
    fn determinant_counts() {
        let fig = vec![vec![-3, 3], vec![2, -3]];
        assert_eq!(count_good_permutations(&fig, Some(&[1, 0])).unwrap(), BigInt::from(3));
        assert_eq!(det_expansion(&fig, &[1, 0]).unwrap(), BigInt::from(3));
        assert_eq!(count_good_permutations(&[vec![-4]], None).unwrap(), BigInt::from(4));
        assert_eq!(det_expansion(&[vec![-4]], &[4]).unwrap(), BigInt::from(4));
        let k = vec![vec![-1, 1], vec![0, -1]];
        assert_eq!(count_good_permutations(&k, Some(&[1, 0])).unwrap(), BigInt::from(1));
        assert!(matches!(
            count_good_permutations(&[vec![0, 1], vec![1, -1]], None),
            Err(CyclicError::ZeroDiagonal { i: 1 })
        ));
        assert!(matches!(det_expansion(&fig, &[0, 0]), Err(CyclicError::Inconsistent { .. })));
        assert!(matches!(count_good_permutations(&[vec![-1, 0]], None), Err(CyclicError::NotSquare)));
    }

    #[test]
    fn single_vertex_solution() {
        let x = PathBundle::new(vec![vec![vec![-1]]]).unwrap();
        assert_eq!(minimal_solution(&[1], &x).unwrap(), Some(vec![1]));
        assert_eq!(least_solution(&[1], &x), Some(vec![1]));
        assert_eq!(minimal_solution(&[3], &x).unwrap(), None);
        assert_eq!(least_solution(&[3], &x), None);
    }

    #[test]
    fn unitype_bridge_goodness() {
        let x = PathBundle::new(vec![vec![vec![-1, 1, -1]]]).unwrap();
        let goods: Vec<bool> = (0..3).map(|q| is_good_permutation(&[1], &x, &[q]).unwrap()).collect();
        // q = 1 rotates to (1,-1,-1); q = 2 gives (-1,-1,1) which hits -1 at once.
        assert_eq!(goods, vec![false, true, false]);
        assert_eq!(enumerate_good_permutations(&[1], &x).unwrap().len(), 1);
        let u = vervaat_multitype(&x, &[1], 1).unwrap();
        assert_eq!(u.increments(0, 0), &[1, -1, -1]);
        assert!(vervaat_multitype(&x, &[1], 2).is_err());
    }

    #[test]
    fn odometer_is_lexicographic() {
        let all: Vec<Vec<usize>> = Odometer::new(&[2, 3]).collect();
        assert_eq!(all.len(), 6);
        assert_eq!(all[0], vec![0, 0]);
        assert_eq!(all[1], vec![0, 1]);
        assert_eq!(all[3], vec![1, 0]);
    }
}
