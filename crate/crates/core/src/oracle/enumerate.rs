use std::collections::HashSet;

use num_bigint::BigInt;

use crate::laws::count_forests_gds;
use crate::model::{MultitypeDegreeSequence, MultitypeForest, PathBundle};

use super::{Budget, OracleError};

/// Forest kinds counted by the closed-form enumeration formulas.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ForestKind {
    Plane,
    Labeled,
    Binary,
}

impl std::str::FromStr for ForestKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "plane" => Ok(ForestKind::Plane),
            "labeled" => Ok(ForestKind::Labeled),
            "binary" => Ok(ForestKind::Binary),
            other => Err(format!("unknown forest kind '{}'", other)),
        }
    }
}

/// Rooted forest on labels `0..n`: roots are `0..r` in type blocks, the
/// remaining labels are split into type blocks of sizes `n_i − r_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LabeledForest {
    pub types: Vec<usize>,
    pub parent: Vec<Option<usize>>,
}

impl LabeledForest {
    /// Forget labels: roots and children are ordered by type, then by label.
    pub fn to_plane(&self, d: usize) -> MultitypeForest {
        MultitypeForest::from_parents(d, self.types.clone(), &self.parent).expect("labeled forest is a forest")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Enumerated {
    Plane(Vec<MultitypeForest>),
    Labeled(Vec<LabeledForest>),
}

impl Enumerated {
    pub fn len(&self) -> usize {
        match self {
            Enumerated::Plane(v) => v.len(),
            Enumerated::Labeled(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Partial forest grown tree by tree, breadth first, so that creation order
/// is the canonical vertex order.
struct Grower {
    d: usize,
    types: Vec<usize>,
    children: Vec<Vec<usize>>,
    roots: Vec<usize>,
    pending_roots: Vec<usize>,
    created: Vec<usize>,
    n: Vec<usize>,
    next: usize,
}

impl Grower {
    fn new(r: &[usize], n: &[usize]) -> Self {
        let mut pending_roots: Vec<usize> = r.iter().enumerate().flat_map(|(j, &c)| std::iter::repeat_n(j, c)).collect();
        pending_roots.reverse();
        Grower {
            d: r.len(),
            types: Vec::new(),
            children: Vec::new(),
            roots: Vec::new(),
            pending_roots,
            created: vec![0; r.len()],
            n: n.to_vec(),
            next: 0,
        }
    }

    fn push_vertex(&mut self, ty: usize) -> usize {
        let id = self.types.len();
        self.types.push(ty);
        self.children.push(Vec::new());
        self.created[ty] += 1;
        id
    }

    fn pop_vertex(&mut self) {
        let ty = self.types.pop().unwrap();
        self.children.pop();
        self.created[ty] -= 1;
    }

    fn fits(&self, c: &[usize]) -> bool {
        (0..self.d).all(|j| self.created[j] + c[j] <= self.n[j])
    }

    fn attach(&mut self, v: usize, c: &[usize]) {
        for (j, &cnt) in c.iter().enumerate() {
            for _ in 0..cnt {
                let id = self.push_vertex(j);
                self.children[v].push(id);
            }
        }
    }

    fn detach(&mut self, v: usize) {
        for _ in 0..self.children[v].len() {
            self.pop_vertex();
        }
        self.children[v].clear();
    }

    fn forest(&self) -> MultitypeForest {
        MultitypeForest::from_children(self.d, self.types.clone(), self.roots.clone(), self.children.clone())
            .expect("grown structure is a forest")
    }
}

/// Drives a [`Grower`]; `choices(ty, grower)` lists the child vectors allowed
/// for the next vertex and `take`/`give` book-keep any consumed resources.
trait Rules {
    fn choices(&self, ty: usize, g: &Grower) -> Vec<Vec<usize>>;
    fn take(&mut self, ty: usize, c: &[usize]);
    fn give(&mut self, ty: usize, c: &[usize]);
    fn complete(&self, g: &Grower) -> bool;
}

fn grow<R: Rules>(
    g: &mut Grower,
    rules: &mut R,
    out: &mut Vec<MultitypeForest>,
    budget: u64,
) -> Result<(), OracleError> {
    if g.next == g.types.len() {
        match g.pending_roots.pop() {
            Some(ty) => {
                if g.created[ty] >= g.n[ty] {
                    g.pending_roots.push(ty);
                    return Ok(());
                }
                let id = g.push_vertex(ty);
                g.roots.push(id);
                let res = grow(g, rules, out, budget);
                g.roots.pop();
                g.pop_vertex();
                g.pending_roots.push(ty);
                return res;
            }
            None => {
                if rules.complete(g) {
                    if out.len() as u64 >= budget {
                        return Err(OracleError::Budget { needed: BigInt::from(budget) + 1, budget });
                    }
                    out.push(g.forest());
                }
                return Ok(());
            }
        }
    }
    let v = g.next;
    let ty = g.types[v];
    for c in rules.choices(ty, g) {
        if !g.fits(&c) {
            continue;
        }
        rules.take(ty, &c);
        g.attach(v, &c);
        g.next += 1;
        let res = grow(g, rules, out, budget);
        g.next -= 1;
        g.detach(v);
        rules.give(ty, &c);
        res?;
    }
    Ok(())
}

/// Every combination picking one value per column `j` from `options[j]`.
fn product(options: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for opts in options {
        let mut next = Vec::with_capacity(out.len() * opts.len());
        for prefix in &out {
            for &o in opts {
                let mut p = prefix.clone();
                p.push(o);
                next.push(p);
            }
        }
        out = next;
    }
    out
}

struct GdsRules {
    remaining: Vec<Vec<Vec<usize>>>,
}

impl Rules for GdsRules {
    fn choices(&self, ty: usize, _g: &Grower) -> Vec<Vec<usize>> {
        let options: Vec<Vec<usize>> = self.remaining[ty]
            .iter()
            .map(|t| t.iter().enumerate().filter(|(_, &c)| c > 0).map(|(k, _)| k).collect())
            .collect();
        product(&options)
    }
    fn take(&mut self, ty: usize, c: &[usize]) {
        for (j, &k) in c.iter().enumerate() {
            self.remaining[ty][j][k] -= 1;
        }
    }
    fn give(&mut self, ty: usize, c: &[usize]) {
        for (j, &k) in c.iter().enumerate() {
            self.remaining[ty][j][k] += 1;
        }
    }
    fn complete(&self, _g: &Grower) -> bool {
        self.remaining.iter().flatten().flatten().all(|&c| c == 0)
    }
}

fn check_unique(forests: &[MultitypeForest]) -> Result<(), OracleError> {
    let mut seen = HashSet::with_capacity(forests.len());
    for f in forests {
        if !seen.insert(f.canonical_code()) {
            return Err(OracleError::Internal(format!("duplicate forest {}", f.canonical_code())));
        }
    }
    Ok(())
}

/// Every forest with degree sequence `ds`, by recursion over the child
/// vectors of each vertex in canonical order.
pub fn enumerate_forests_gds(ds: &MultitypeDegreeSequence, budget: Budget) -> Result<Vec<MultitypeForest>, OracleError> {
    let summary = ds.validate().map_err(|e| OracleError::Invalid(e.to_string()))?;
    let count = count_forests_gds(ds).map_err(|e| OracleError::Invalid(e.to_string()))?;
    if count > BigInt::from(budget.0) {
        return Err(OracleError::Budget { needed: count, budget: budget.0 });
    }
    let d = ds.d();
    let remaining = (0..d).map(|i| (0..d).map(|j| ds.table(i, j).to_vec()).collect()).collect();
    let mut rules = GdsRules { remaining };
    let mut g = Grower::new(ds.roots(), &summary.n);
    let mut out = Vec::new();
    grow(&mut g, &mut rules, &mut out, budget.0)?;
    check_unique(&out)?;
    Ok(out)
}

struct KindRules {
    binary: bool,
}

impl Rules for KindRules {
    fn choices(&self, _ty: usize, g: &Grower) -> Vec<Vec<usize>> {
        let options: Vec<Vec<usize>> = (0..g.d)
            .map(|j| {
                let room = g.n[j] - g.created[j];
                if self.binary {
                    [0, 2].into_iter().filter(|&k| k <= room).collect()
                } else {
                    (0..=room).collect()
                }
            })
            .collect();
        product(&options)
    }
    fn take(&mut self, _ty: usize, _c: &[usize]) {}
    fn give(&mut self, _ty: usize, _c: &[usize]) {}
    fn complete(&self, g: &Grower) -> bool {
        g.created == g.n
    }
}

fn enumerate_labeled(r: &[usize], n: &[usize], budget: u64) -> Result<Vec<LabeledForest>, OracleError> {
    let d = r.len();
    let rt: usize = r.iter().sum();
    let total: usize = n.iter().sum();
    let mut types = Vec::with_capacity(total);
    for (j, &c) in r.iter().enumerate() {
        types.extend(std::iter::repeat_n(j, c));
    }
    for j in 0..d {
        types.extend(std::iter::repeat_n(j, n[j] - r[j]));
    }
    let free = total - rt;
    let maps = (total as f64).powi(free as i32);
    if maps > (budget as f64) * (total.max(1) as f64) {
        return Err(OracleError::Budget { needed: BigInt::from(total).pow(free as u32), budget });
    }
    let mut out = Vec::new();
    if total == 0 {
        return Ok(out);
    }
    // Odometer over parent choices of the non-root labels.
    let mut pick = vec![0usize; free];
    'maps: loop {
        let parent: Vec<Option<usize>> =
            (0..total).map(|v| if v < rt { None } else { Some(pick[v - rt]) }).collect();
        let acyclic = (rt..total).all(|start| {
            let mut v = start;
            for _ in 0..=total {
                match parent[v] {
                    None => return true,
                    Some(p) => v = p,
                }
            }
            false
        });
        if acyclic {
            if out.len() as u64 >= budget {
                return Err(OracleError::Budget { needed: BigInt::from(budget) + 1, budget });
            }
            out.push(LabeledForest { types: types.clone(), parent });
        }
        for idx in (0..free).rev() {
            if pick[idx] + 1 < total {
                pick[idx] += 1;
                continue 'maps;
            }
            pick[idx] = 0;
        }
        break;
    }
    Ok(out)
}

/// Every `d`-type forest of the given kind with `r_i` roots and `n_i`
/// vertices of type `i`.
pub fn enumerate_forests_by_type(
    r: &[usize],
    n: &[usize],
    kind: ForestKind,
    budget: Budget,
) -> Result<Enumerated, OracleError> {
    if r.len() != n.len() || r.is_empty() {
        return Err(OracleError::Invalid("r and n need the same positive length".into()));
    }
    if let Some(i) = (0..r.len()).find(|&i| r[i] > n[i]) {
        return Err(OracleError::Invalid(format!("type {}: r_i exceeds n_i", i + 1)));
    }
    match kind {
        ForestKind::Labeled => Ok(Enumerated::Labeled(enumerate_labeled(r, n, budget.0)?)),
        ForestKind::Plane | ForestKind::Binary => {
            let mut rules = KindRules { binary: kind == ForestKind::Binary };
            let mut g = Grower::new(r, n);
            let mut out = Vec::new();
            grow(&mut g, &mut rules, &mut out, budget.0)?;
            check_unique(&out)?;
            Ok(Enumerated::Plane(out))
        }
    }
}

/// Number of good cyclical shifts of `x`, straight from the definition: a
/// shift is good when no `m ≤ n` other than `n` itself solves the shifted system.
pub fn brute_count_good_perms(r: &[usize], x: &PathBundle, budget: Budget) -> Result<u64, OracleError> {
    let d = x.d();
    if r.len() != d {
        return Err(OracleError::Invalid(format!("r has {} entries for {} types", r.len(), d)));
    }
    let n = x.lengths().to_vec();
    let shifts: u128 = n.iter().map(|&v| v as u128).product();
    if shifts > budget.0 as u128 {
        return Err(OracleError::Budget { needed: BigInt::from(shifts), budget: budget.0 });
    }
    let mut good = 0u64;
    let mut q = vec![0usize; d];
    // values[i][j][m] of the shifted bundle.
    let mut values = vec![vec![Vec::new(); d]; d];
    'shifts: loop {
        for i in 0..d {
            for j in 0..d {
                let inc = x.increments(i, j);
                let mut acc = 0i64;
                let mut v = Vec::with_capacity(n[i] + 1);
                v.push(0);
                for step in 0..n[i] {
                    acc += inc[(q[i] + step) % n[i]];
                    v.push(acc);
                }
                values[i][j] = v;
            }
        }
        if !has_smaller_solution(r, &values, &n) {
            good += 1;
        }
        for idx in (0..d).rev() {
            if q[idx] + 1 < n[idx] {
                q[idx] += 1;
                continue 'shifts;
            }
            q[idx] = 0;
        }
        break;
    }
    Ok(good)
}

fn has_smaller_solution(r: &[usize], values: &[Vec<Vec<i64>>], n: &[usize]) -> bool {
    let d = n.len();
    let mut m = vec![0usize; d];
    loop {
        if m != n && (0..d).all(|j| r[j] as i64 + (0..d).map(|i| values[i][j][m[i]]).sum::<i64>() == 0) {
            return true;
        }
        let mut idx = d;
        loop {
            if idx == 0 {
                return false;
            }
            idx -= 1;
            if m[idx] < n[idx] {
                m[idx] += 1;
                break;
            }
            m[idx] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::{decode_multitype, encode_multitype};

    fn toy() -> MultitypeDegreeSequence {
        MultitypeDegreeSequence::new(vec![1, 0], vec![vec![vec![1, 1], vec![1, 1]], vec![vec![1], vec![1]]]).unwrap()
    }

    #[test]
    fn toy_and_unitype() {
        let fs = enumerate_forests_gds(&toy(), Budget::default()).unwrap();
        assert_eq!(fs.len(), 2);
        for f in &fs {
            assert_eq!(f.empirical_degree_sequence(), toy());
            assert_eq!(&decode_multitype(&encode_multitype(f), &[1, 0]).unwrap(), f);
        }
        let u = MultitypeDegreeSequence::new(vec![1], vec![vec![vec![2, 0, 1]]]).unwrap();
        assert_eq!(enumerate_forests_gds(&u, Budget::default()).unwrap().len(), 1);
    }

    #[test]
    fn by_type_examples() {
        let b = Budget::default();
        assert_eq!(enumerate_forests_by_type(&[1, 1], &[2, 2], ForestKind::Plane, b).unwrap().len(), 8);
        assert_eq!(enumerate_forests_by_type(&[1], &[3], ForestKind::Labeled, b).unwrap().len(), 3);
        assert_eq!(enumerate_forests_by_type(&[1], &[3], ForestKind::Binary, b).unwrap().len(), 1);
        assert_eq!(enumerate_forests_by_type(&[1], &[3], ForestKind::Plane, b).unwrap().len(), 2);
    }

    #[test]
    fn budget_applies() {
        assert!(matches!(
            enumerate_forests_by_type(&[1], &[8], ForestKind::Plane, Budget(10)),
            Err(OracleError::Budget { .. })
        ));
    }

    #[test]
    fn unitype_cycle_lemma() {
        let x = PathBundle::new(vec![vec![vec![1, -1, -1, -1, -1]]]).unwrap();
        assert_eq!(brute_count_good_perms(&[3], &x, Budget::default()).unwrap(), 3);
    }
}
