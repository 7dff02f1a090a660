/// Integer lattice path started at 0, stored by its increments.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Path {
    inc: Vec<i64>,
}

impl Path {
    pub fn from_increments(inc: Vec<i64>) -> Self {
        Path { inc }
    }

    /// Path with `y(1), …, y(s)` given (the start `y(0) = 0` is implicit).
    pub fn from_values(values: &[i64]) -> Self {
        let mut prev = 0;
        let inc = values
            .iter()
            .map(|&v| {
                let step = v - prev;
                prev = v;
                step
            })
            .collect();
        Path { inc }
    }

    pub fn increments(&self) -> &[i64] {
        &self.inc
    }

    pub fn len(&self) -> usize {
        self.inc.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inc.is_empty()
    }

    /// `y(1), …, y(s)`.
    pub fn values(&self) -> Vec<i64> {
        self.inc
            .iter()
            .scan(0, |acc, &x| {
                *acc += x;
                Some(*acc)
            })
            .collect()
    }

    pub fn terminal(&self) -> i64 {
        self.inc.iter().sum()
    }

    pub fn is_skip_free(&self) -> bool {
        self.inc.iter().all(|&x| x >= -1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum BundleError {
    #[error("bundle needs d >= 1 and d*d paths")]
    Shape,
    #[error("path x^({i},{j}) has length {got}, expected n_{i} = {expected}")]
    Length { i: usize, j: usize, got: usize, expected: usize },
    #[error("type {i} has length 0")]
    EmptyType { i: usize },
    #[error("off-diagonal path x^({i},{j}) decreases at step {step}")]
    Decreasing { i: usize, j: usize, step: usize },
    #[error("diagonal path x^({i},{i}) jumps down by more than one at step {step}")]
    SkipDown { i: usize, step: usize },
}

/// Element of `S_d`: paths `x^{i,j}` of length `n_i`, non-decreasing off the
/// diagonal and downward skip-free on it. Indices in error messages are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PathBundle {
    d: usize,
    n: Vec<usize>,
    inc: Vec<Vec<i64>>,
    cum: Vec<Vec<i64>>,
}

impl PathBundle {
    /// `inc[i][j]` holds the increments of `x^{i,j}`.
    pub fn new(inc: Vec<Vec<Vec<i64>>>) -> Result<Self, BundleError> {
        let d = inc.len();
        if d == 0 || inc.iter().any(|row| row.len() != d) {
            return Err(BundleError::Shape);
        }
        let n: Vec<usize> = (0..d).map(|i| inc[i][i].len()).collect();
        for i in 0..d {
            if n[i] == 0 {
                return Err(BundleError::EmptyType { i: i + 1 });
            }
            for j in 0..d {
                let p = &inc[i][j];
                if p.len() != n[i] {
                    return Err(BundleError::Length { i: i + 1, j: j + 1, got: p.len(), expected: n[i] });
                }
                for (step, &x) in p.iter().enumerate() {
                    if i == j && x < -1 {
                        return Err(BundleError::SkipDown { i: i + 1, step: step + 1 });
                    }
                    if i != j && x < 0 {
                        return Err(BundleError::Decreasing { i: i + 1, j: j + 1, step: step + 1 });
                    }
                }
            }
        }
        let flat: Vec<Vec<i64>> = inc.into_iter().flatten().collect();
        let cum = flat
            .iter()
            .map(|p| {
                let mut c = Vec::with_capacity(p.len() + 1);
                c.push(0);
                let mut acc = 0;
                for &x in p {
                    acc += x;
                    c.push(acc);
                }
                c
            })
            .collect();
        Ok(PathBundle { d, n, inc: flat, cum })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn lengths(&self) -> &[usize] {
        &self.n
    }

    pub fn increments(&self, i: usize, j: usize) -> &[i64] {
        &self.inc[i * self.d + j]
    }

    /// `x^{i,j}(m)` for `0 ≤ m ≤ n_i`.
    pub fn value(&self, i: usize, j: usize, m: usize) -> i64 {
        self.cum[i * self.d + j][m]
    }

    /// All values `x^{i,j}(0..=n_i)`.
    pub fn values(&self, i: usize, j: usize) -> &[i64] {
        &self.cum[i * self.d + j]
    }

    pub fn path(&self, i: usize, j: usize) -> Path {
        Path::from_increments(self.increments(i, j).to_vec())
    }

    /// Terminal matrix `K = (x^{i,j}(n_i))`.
    pub fn terminal(&self) -> Vec<Vec<i64>> {
        (0..self.d).map(|i| (0..self.d).map(|j| self.value(i, j, self.n[i])).collect()).collect()
    }

    /// Increments as nested vectors `[i][j][step]`.
    pub fn to_nested(&self) -> Vec<Vec<Vec<i64>>> {
        (0..self.d).map(|i| (0..self.d).map(|j| self.increments(i, j).to_vec()).collect()).collect()
    }
}
