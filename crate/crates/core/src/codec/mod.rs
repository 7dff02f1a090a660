//! Breadth-first walks: the Łukasiewicz path of a plane forest and the
//! `d × d` bundle coding a multitype forest.

use std::collections::VecDeque;

use crate::cyclic::least_solution;
use crate::model::{MultitypeForest, Path, PathBundle};

/// Decoding failures. Type indices and steps are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CodecError {
    #[error("step {index} jumps down by more than one")]
    NotSkipFree { index: usize },
    #[error("path ends at {value}; an excursion must end below 0")]
    BadTerminal { value: i64 },
    #[error("path reaches its terminal level {level} early, at step {index}")]
    EarlyHit { index: usize, level: i64 },
    #[error("root vector has {got} entries for {d} types")]
    RootShape { got: usize, d: usize },
    #[error("system (r, x) has no solution at n: type {ty} does not balance")]
    NoSolution { ty: usize },
    #[error("system (r, x) is already solved at m = {m:?}: type {ty} stops before n_{ty}")]
    EarlySolution { ty: usize, m: Vec<usize> },
    #[error("type {ty}: the diagonal walk does not code a forest")]
    Subforest { ty: usize },
    #[error("type {ty}: slots and subtrees do not match")]
    SlotMismatch { ty: usize },
}

/// Increments `c(u) − 1` along the global breadth-first order. Types are ignored.
pub fn encode_unitype(f: &MultitypeForest) -> Path {
    Path::from_increments((0..f.len()).map(|v| f.children(v).len() as i64 - 1).collect())
}

/// Inverse of [`encode_unitype`] on excursions: the path must be downward
/// skip-free and first reach its terminal value `−m` at its last step.
pub fn decode_unitype(path: &Path) -> Result<MultitypeForest, CodecError> {
    let inc = path.increments();
    if let Some(idx) = inc.iter().position(|&x| x < -1) {
        return Err(CodecError::NotSkipFree { index: idx + 1 });
    }
    let terminal = path.terminal();
    if terminal >= 0 {
        return Err(CodecError::BadTerminal { value: terminal });
    }
    let values = path.values();
    if let Some(idx) = values.iter().position(|&v| v == terminal) {
        if idx + 1 < values.len() {
            return Err(CodecError::EarlyHit { index: idx + 1, level: terminal });
        }
    }
    let counts: Vec<usize> = inc.iter().map(|&x| (x + 1) as usize).collect();
    let (roots, children) = split_forest(&counts).ok_or(CodecError::Subforest { ty: 1 })?;
    Ok(MultitypeForest::from_children(1, vec![0; counts.len()], roots, children).expect("decoded structure is a forest"))
}

/// Reads a Łukasiewicz child-count sequence tree by tree: a vertex that is
/// nobody's child yet starts a new tree, otherwise children take the next
/// unassigned positions.
fn split_forest(counts: &[usize]) -> Option<(Vec<usize>, Vec<Vec<usize>>)> {
    let len = counts.len();
    let mut roots = Vec::new();
    let mut children = vec![Vec::new(); len];
    let mut next = 0;
    for (l, &c) in counts.iter().enumerate() {
        if l == next {
            roots.push(l);
            next = l + 1;
        }
        if next + c > len {
            return None;
        }
        children[l] = (next..next + c).collect();
        next += c;
    }
    Some((roots, children))
}

/// Vertices of each type-`i` subforest `F^{(i)}` in its own breadth-first
/// order: maximal type-`i` subtrees ranked by the global rank of their roots,
/// each explored breadth-first through same-type children.
pub fn subforest_orders(f: &MultitypeForest) -> Vec<Vec<usize>> {
    let d = f.d();
    let mut orders = vec![Vec::new(); d];
    for v in 0..f.len() {
        let i = f.ty(v);
        let is_subtree_root = f.parent(v).is_none_or(|p| f.ty(p) != i);
        if !is_subtree_root {
            continue;
        }
        let mut queue = VecDeque::from([v]);
        while let Some(u) = queue.pop_front() {
            orders[i].push(u);
            queue.extend(f.children(u).iter().copied().filter(|&c| f.ty(c) == i));
        }
    }
    orders
}

/// Multitype breadth-first walk: `x^{i,j}` has increments
/// `p_j(u) − 1{i=j}` along the order of `F^{(i)}`.
///
/// Panics if some type has no vertex, since the bundle would have an empty
/// row; every forest of a valid degree sequence has all types.
pub fn encode_multitype(f: &MultitypeForest) -> PathBundle {
    let d = f.d();
    let orders = subforest_orders(f);
    let inc: Vec<Vec<Vec<i64>>> = (0..d)
        .map(|i| {
            let counts: Vec<Vec<usize>> = orders[i].iter().map(|&u| f.child_counts(u)).collect();
            (0..d)
                .map(|j| {
                    counts
                        .iter()
                        .map(|c| c[j] as i64 - if i == j { 1 } else { 0 })
                        .collect()
                })
                .collect()
        })
        .collect();
    PathBundle::new(inc).expect("a breadth-first walk lies in S_d")
}

/// Inverse of [`encode_multitype`] for bundles whose system `(r, x)` has
/// least solution exactly `n`.
pub fn decode_multitype(x: &PathBundle, r: &[usize]) -> Result<MultitypeForest, CodecError> {
    let d = x.d();
    let n = x.lengths().to_vec();
    if r.len() != d {
        return Err(CodecError::RootShape { got: r.len(), d });
    }
    for j in 0..d {
        let level = r[j] as i64 + (0..d).map(|i| x.value(i, j, n[i])).sum::<i64>();
        if level != 0 {
            return Err(CodecError::NoSolution { ty: j + 1 });
        }
    }
    match least_solution(r, x) {
        Some(m) if m == n => {}
        Some(m) => {
            let ty = (0..d).find(|&i| m[i] < n[i]).unwrap() + 1;
            return Err(CodecError::EarlySolution { ty, m });
        }
        None => return Err(CodecError::NoSolution { ty: 1 }),
    }

    // Per-type subforests from the diagonal walks.
    let mut sub_roots = Vec::with_capacity(d);
    let mut sub_children = Vec::with_capacity(d);
    for i in 0..d {
        let counts: Vec<usize> = x.increments(i, i).iter().map(|&v| (v + 1) as usize).collect();
        let (roots, children) = split_forest(&counts).ok_or(CodecError::Subforest { ty: i + 1 })?;
        sub_roots.push(roots);
        sub_children.push(children);
    }

    // Glue: forest roots and cross-type children are slots, each filled by the
    // next unused subtree of its type.
    let total: usize = n.iter().sum();
    let mut next_subtree = vec![0usize; d];
    let mut types = Vec::with_capacity(total);
    let mut local = Vec::with_capacity(total);
    let mut children: Vec<Vec<usize>> = Vec::with_capacity(total);
    let mut roots = Vec::new();
    let take = |j: usize, next_subtree: &mut Vec<usize>| -> Result<usize, CodecError> {
        let slot = next_subtree[j];
        let root = *sub_roots[j].get(slot).ok_or(CodecError::SlotMismatch { ty: j + 1 })?;
        next_subtree[j] += 1;
        Ok(root)
    };
    for (j, &rj) in r.iter().enumerate() {
        for _ in 0..rj {
            let l = take(j, &mut next_subtree)?;
            let g = types.len();
            types.push(j);
            local.push(l);
            children.push(Vec::new());
            roots.push(g);
            let mut queue = VecDeque::from([g]);
            while let Some(g) = queue.pop_front() {
                let (i, l) = (types[g], local[g]);
                for j2 in 0..d {
                    let kids: Vec<usize> = if j2 == i {
                        sub_children[i][l].clone()
                    } else {
                        let count = x.increments(i, j2)[l] as usize;
                        (0..count).map(|_| take(j2, &mut next_subtree)).collect::<Result<_, _>>()?
                    };
                    for c in kids {
                        let id = types.len();
                        types.push(j2);
                        local.push(c);
                        children.push(Vec::new());
                        children[g].push(id);
                        queue.push_back(id);
                    }
                }
            }
        }
    }
    for j in 0..d {
        if next_subtree[j] != sub_roots[j].len() {
            return Err(CodecError::SlotMismatch { ty: j + 1 });
        }
    }
    debug_assert_eq!(types.len(), total);
    Ok(MultitypeForest::from_children(d, types, roots, children).expect("glued structure is a forest"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star() -> MultitypeForest {
        MultitypeForest::from_parents(1, vec![0; 3], &[None, Some(0), Some(0)]).unwrap()
    }

    #[test]
    fn unitype_examples() {
        assert_eq!(encode_unitype(&MultitypeForest::singleton(1, 0)).increments(), &[-1]);
        let p = encode_unitype(&star());
        assert_eq!(p.increments(), &[1, -1, -1]);
        assert_eq!(p.values(), vec![1, 0, -1]);
        let two = MultitypeForest::from_parents(1, vec![0; 2], &[None, None]).unwrap();
        assert_eq!(encode_unitype(&two).increments(), &[-1, -1]);
        assert_eq!(decode_unitype(&Path::from_values(&[1, 0, -1])).unwrap(), star());
        assert_eq!(decode_unitype(&Path::from_values(&[-1])).unwrap(), MultitypeForest::singleton(1, 0));
    }

    #[test]
    fn unitype_rejections() {
        assert_eq!(
            decode_unitype(&Path::from_increments(vec![0, -1, 1, -1])),
            Err(CodecError::EarlyHit { index: 2, level: -1 })
        );
        assert_eq!(decode_unitype(&Path::from_increments(vec![-2, 1])), Err(CodecError::NotSkipFree { index: 1 }));
        assert_eq!(decode_unitype(&Path::from_increments(vec![1, -1])), Err(CodecError::BadTerminal { value: 0 }));
    }

    #[test]
    fn two_type_example() {
        let f = MultitypeForest::from_parents(2, vec![0, 1], &[None, Some(0)]).unwrap();
        let x = encode_multitype(&f);
        assert_eq!(x.increments(0, 0), &[-1]);
        assert_eq!(x.increments(0, 1), &[1]);
        assert_eq!(x.increments(1, 0), &[0]);
        assert_eq!(x.increments(1, 1), &[-1]);
        assert_eq!(decode_multitype(&x, &[1, 0]).unwrap(), f);
    }

    #[test]
    fn d1_matches_unitype() {
        let f = star();
        let x = encode_multitype(&f);
        assert_eq!(x.increments(0, 0), encode_unitype(&f).increments());
        assert_eq!(decode_multitype(&x, &[1]).unwrap(), f);
    }

    #[test]
    fn early_solution_is_rejected() {
        // A single leaf followed by a root with one child: the walk is
        // solved after the first vertex.
        let x = PathBundle::new(vec![vec![vec![-1, 1, -1]]]).unwrap();
        assert!(matches!(decode_multitype(&x, &[1]), Err(CodecError::EarlySolution { ty: 1, .. })));
        assert!(matches!(decode_multitype(&x, &[2]), Err(CodecError::NoSolution { ty: 1 })));
    }
}
