use std::collections::VecDeque;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::degree::MultitypeDegreeSequence;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ForestError {
    #[error("vertex data has inconsistent lengths")]
    LengthMismatch,
    #[error("vertex {vertex} has type {ty} outside 0..{d}")]
    TypeOutOfRange { vertex: usize, ty: usize, d: usize },
    #[error("children of vertex {vertex} are not sorted by type")]
    UnsortedChildren { vertex: usize },
    #[error("roots are not sorted by type")]
    UnsortedRoots,
    #[error("vertex {vertex} is listed more than once as a root or child")]
    MultipleParents { vertex: usize },
    #[error("vertex {vertex} is not reachable from any root")]
    Unreachable { vertex: usize },
    #[error("vertex reference {vertex} out of range")]
    BadReference { vertex: usize },
    #[error("malformed forest file: {0}")]
    Parse(String),
}

/// Rooted plane forest with typed vertices.
///
/// Vertex ids are ranks in the global breadth-first order: the trees are
/// visited one after another in root order and each tree is explored
/// breadth-first. Roots and every child list are sorted by type. Because the
/// representation is canonical, derived equality and hashing compare plane
/// structure.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultitypeForest {
    d: usize,
    types: Vec<usize>,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    roots: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct VertexFile {
    id: usize,
    #[serde(rename = "type")]
    ty: usize,
    parent: Option<usize>,
    children: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct ForestFile {
    d: usize,
    roots: Vec<usize>,
    vertices: Vec<VertexFile>,
}

impl MultitypeForest {
    /// Build from an explicit plane structure and relabel into breadth-first order.
    pub fn from_children(
        d: usize,
        types: Vec<usize>,
        roots: Vec<usize>,
        children: Vec<Vec<usize>>,
    ) -> Result<Self, ForestError> {
        let len = types.len();
        if children.len() != len {
            return Err(ForestError::LengthMismatch);
        }
        for (v, &t) in types.iter().enumerate() {
            if t >= d {
                return Err(ForestError::TypeOutOfRange { vertex: v, ty: t, d });
            }
        }
        let mut seen = vec![false; len];
        let mut mark = |v: usize| -> Result<(), ForestError> {
            if v >= len {
                return Err(ForestError::BadReference { vertex: v });
            }
            if seen[v] {
                return Err(ForestError::MultipleParents { vertex: v });
            }
            seen[v] = true;
            Ok(())
        };
        for &root in &roots {
            mark(root)?;
        }
        for list in &children {
            for &c in list {
                mark(c)?;
            }
        }
        if let Some(v) = seen.iter().position(|s| !s) {
            return Err(ForestError::Unreachable { vertex: v });
        }
        if roots.windows(2).any(|w| types[w[0]] > types[w[1]]) {
            return Err(ForestError::UnsortedRoots);
        }
        for (v, list) in children.iter().enumerate() {
            if list.windows(2).any(|w| types[w[0]] > types[w[1]]) {
                return Err(ForestError::UnsortedChildren { vertex: v });
            }
        }

        let mut order = Vec::with_capacity(len);
        let mut queue = VecDeque::new();
        for &root in &roots {
            queue.push_back(root);
            while let Some(v) = queue.pop_front() {
                order.push(v);
                queue.extend(children[v].iter().copied());
            }
        }
        if order.len() != len {
            // Every vertex had exactly one incoming reference, so a shortfall means a cycle.
            let mut reached = vec![false; len];
            for &v in &order {
                reached[v] = true;
            }
            let v = reached.iter().position(|r| !r).unwrap();
            return Err(ForestError::Unreachable { vertex: v });
        }
        let mut rank = vec![0; len];
        for (new, &old) in order.iter().enumerate() {
            rank[old] = new;
        }
        let mut new_types = vec![0; len];
        let mut new_children = vec![Vec::new(); len];
        let mut new_parent = vec![None; len];
        for &old in &order {
            let v = rank[old];
            new_types[v] = types[old];
            new_children[v] = children[old].iter().map(|&c| rank[c]).collect();
            for &c in &new_children[v] {
                new_parent[c] = Some(v);
            }
        }
        let new_roots = roots.iter().map(|&r| rank[r]).collect();
        Ok(MultitypeForest { d, types: new_types, parent: new_parent, children: new_children, roots: new_roots })
    }

    /// Build from a parent array. Children and roots keep their index order
    /// within each type.
    pub fn from_parents(d: usize, types: Vec<usize>, parents: &[Option<usize>]) -> Result<Self, ForestError> {
        let len = types.len();
        if parents.len() != len {
            return Err(ForestError::LengthMismatch);
        }
        let mut children = vec![Vec::new(); len];
        let mut roots = Vec::new();
        for (v, p) in parents.iter().enumerate() {
            match *p {
                None => roots.push(v),
                Some(p) if p < len => children[p].push(v),
                Some(p) => return Err(ForestError::BadReference { vertex: p }),
            }
        }
        if let Some(v) = types.iter().position(|&t| t >= d) {
            return Err(ForestError::TypeOutOfRange { vertex: v, ty: types[v], d });
        }
        roots.sort_by_key(|&v| types[v]);
        for list in &mut children {
            list.sort_by_key(|&v| types[v]);
        }
        Self::from_children(d, types, roots, children)
    }

    /// A single vertex of type `ty`.
    pub fn singleton(d: usize, ty: usize) -> Self {
        Self::from_children(d, vec![ty], vec![0], vec![vec![]]).expect("valid singleton")
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.types.len()
    }

    pub fn is_empty(&self) -> bool {
        self.types.is_empty()
    }

    pub fn ty(&self, v: usize) -> usize {
        self.types[v]
    }

    pub fn types(&self) -> &[usize] {
        &self.types
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    pub fn roots(&self) -> &[usize] {
        &self.roots
    }

    /// Number of type-`j` children of `v`, for every `j`.
    pub fn child_counts(&self, v: usize) -> Vec<usize> {
        let mut out = vec![0; self.d];
        for &c in &self.children[v] {
            out[self.types[c]] += 1;
        }
        out
    }

    /// Root-type vector `r`.
    pub fn root_type(&self) -> Vec<usize> {
        let mut r = vec![0; self.d];
        for &v in &self.roots {
            r[self.types[v]] += 1;
        }
        r
    }

    /// Individuals-type vector `n`.
    pub fn type_sizes(&self) -> Vec<usize> {
        let mut n = vec![0; self.d];
        for &t in &self.types {
            n[t] += 1;
        }
        n
    }

    pub fn empirical_degree_sequence(&self) -> MultitypeDegreeSequence {
        let d = self.d;
        let mut tables = vec![vec![Vec::<usize>::new(); d]; d];
        for v in 0..self.len() {
            let i = self.types[v];
            for (j, k) in self.child_counts(v).into_iter().enumerate() {
                let t = &mut tables[i][j];
                if t.len() <= k {
                    t.resize(k + 1, 0);
                }
                t[k] += 1;
            }
        }
        MultitypeDegreeSequence::new(self.root_type(), tables).expect("square tables")
    }

    /// Compact textual form of the plane structure; equal codes mean equal forests.
    pub fn canonical_code(&self) -> String {
        let mut out = String::new();
        for (idx, &v) in self.roots.iter().enumerate() {
            if idx > 0 {
                out.push(',');
            }
            let _ = write!(out, "{}", self.types[v] + 1);
        }
        out.push('|');
        for v in 0..self.len() {
            if v > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{}", self.types[v] + 1);
            if !self.children[v].is_empty() {
                out.push('(');
                for (idx, &c) in self.children[v].iter().enumerate() {
                    if idx > 0 {
                        out.push(',');
                    }
                    let _ = write!(out, "{}", self.types[c] + 1);
                }
                out.push(')');
            }
        }
        out
    }

    /// JSON form with 0-based ids and 1-based types.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("forests always serialize")
    }

    fn to_file(&self) -> ForestFile {
        ForestFile {
            d: self.d,
            roots: self.roots.clone(),
            vertices: (0..self.len())
                .map(|v| VertexFile {
                    id: v,
                    ty: self.types[v] + 1,
                    parent: self.parent[v],
                    children: self.children[v].clone(),
                })
                .collect(),
        }
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(self.to_file()).expect("forests always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, ForestError> {
        let file: ForestFile = serde_json::from_str(text).map_err(|e| ForestError::Parse(e.to_string()))?;
        let len = file.vertices.len();
        let mut types = vec![0; len];
        let mut children = vec![Vec::new(); len];
        for (idx, v) in file.vertices.into_iter().enumerate() {
            if v.id != idx {
                return Err(ForestError::Parse(format!("vertex at position {idx} has id {}", v.id)));
            }
            if v.ty == 0 {
                return Err(ForestError::Parse(format!("vertex {idx} has type 0; types are 1-based")));
            }
            types[idx] = v.ty - 1;
            children[idx] = v.children;
        }
        let forest = Self::from_children(file.d, types, file.roots, children)?;
        Ok(forest)
    }
}
