use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::exact::{binomial, factorial, fmt_rational, parse_rational, ratio_to_f64, Weight};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum OffspringError {
    #[error("parameter {0} must lie strictly between 0 and 1")]
    BadProbability(String),
    #[error("Poisson mean {0} must be positive")]
    BadMean(String),
    #[error("tabulated pmf must be non-empty, non-negative and sum to 1 (sum is {0})")]
    BadTable(String),
    #[error("expected {expected} marginals, got {got}")]
    Shape { expected: usize, got: usize },
    #[error("malformed offspring spec: {0}")]
    Parse(String),
}

/// Law of the number of children of one type.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Marginal {
    /// `ν(k) = p (1-p)^k`.
    Geometric(BigRational),
    /// `ν(k) = e^{-μ} μ^k / k!`.
    Poisson(BigRational),
    /// Zero or two children: `ν(2) = p`, `ν(0) = 1 - p`.
    Bernoulli(BigRational),
    /// Finite table `ν(0), ν(1), …`.
    Tabulated(Vec<BigRational>),
}

impl Marginal {
    pub fn geometric(p: BigRational) -> Result<Self, OffspringError> {
        let m = Marginal::Geometric(p);
        m.validate()?;
        Ok(m)
    }

    pub fn poisson(mu: BigRational) -> Result<Self, OffspringError> {
        let m = Marginal::Poisson(mu);
        m.validate()?;
        Ok(m)
    }

    pub fn bernoulli(p: BigRational) -> Result<Self, OffspringError> {
        let m = Marginal::Bernoulli(p);
        m.validate()?;
        Ok(m)
    }

    pub fn tabulated(mut pmf: Vec<BigRational>) -> Result<Self, OffspringError> {
        while pmf.len() > 1 && pmf.last().is_some_and(|v| v.is_zero()) {
            pmf.pop();
        }
        let m = Marginal::Tabulated(pmf);
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<(), OffspringError> {
        let open_unit = |p: &BigRational| p.is_positive() && p < &BigRational::one();
        match self {
            Marginal::Geometric(p) | Marginal::Bernoulli(p) => {
                if !open_unit(p) {
                    return Err(OffspringError::BadProbability(fmt_rational(p)));
                }
            }
            Marginal::Poisson(mu) => {
                if !mu.is_positive() {
                    return Err(OffspringError::BadMean(fmt_rational(mu)));
                }
            }
            Marginal::Tabulated(pmf) => {
                let sum: BigRational = pmf.iter().sum();
                if pmf.is_empty() || pmf.iter().any(|v| v.is_negative()) || !sum.is_one() {
                    return Err(OffspringError::BadTable(fmt_rational(&sum)));
                }
            }
        }
        Ok(())
    }

    pub fn family(&self) -> &'static str {
        match self {
            Marginal::Geometric(_) => "geometric",
            Marginal::Poisson(_) => "poisson",
            Marginal::Bernoulli(_) => "bernoulli",
            Marginal::Tabulated(_) => "tabulated",
        }
    }

    pub fn mean(&self) -> BigRational {
        match self {
            Marginal::Geometric(p) => (BigRational::one() - p) / p,
            Marginal::Poisson(mu) => mu.clone(),
            Marginal::Bernoulli(p) => p * BigRational::from_integer(2.into()),
            Marginal::Tabulated(pmf) => pmf
                .iter()
                .enumerate()
                .map(|(k, v)| v * BigRational::from_integer(k.into()))
                .sum(),
        }
    }

    /// Largest value with positive mass, `None` for unbounded support.
    pub fn support_max(&self) -> Option<usize> {
        match self {
            Marginal::Geometric(_) | Marginal::Poisson(_) => None,
            Marginal::Bernoulli(_) => Some(2),
            Marginal::Tabulated(pmf) => pmf.iter().rposition(|v| !v.is_zero()),
        }
    }

    /// `ν(k)` in the requested grade.
    pub fn pmf<W: Weight>(&self, k: usize) -> W {
        match self {
            Marginal::Geometric(p) => {
                let q = BigRational::one() - p;
                W::from_ratio(p).mul(&W::from_ratio(&q).pow(k as u64))
            }
            Marginal::Poisson(mu) => {
                let f = BigRational::from_integer(factorial(k as u64));
                W::exp_neg(mu).mul(&W::from_ratio(mu).pow(k as u64)).mul(&W::from_ratio(&(BigRational::one() / f)))
            }
            Marginal::Bernoulli(p) => match k {
                0 => W::from_ratio(&(BigRational::one() - p)),
                2 => W::from_ratio(p),
                _ => W::zero(),
            },
            Marginal::Tabulated(pmf) => pmf.get(k).map(W::from_ratio).unwrap_or_else(W::zero),
        }
    }

    pub fn pmf_f64(&self, k: usize) -> f64 {
        match self {
            // Direct evaluation avoids building huge factorials.
            Marginal::Poisson(mu) => {
                let mu = ratio_to_f64(mu);
                let mut v = (-mu).exp();
                for i in 1..=k {
                    v *= mu / i as f64;
                }
                v
            }
            _ => self.pmf::<f64>(k),
        }
    }

    /// `ν(k)` as a rational when the family is rational-valued.
    pub fn pmf_rational(&self, k: usize) -> Option<BigRational> {
        match self {
            Marginal::Poisson(_) => None,
            Marginal::Geometric(p) => Some(p * num_traits::pow(BigRational::one() - p, k)),
            Marginal::Bernoulli(p) => Some(match k {
                0 => BigRational::one() - p,
                2 => p.clone(),
                _ => BigRational::zero(),
            }),
            Marginal::Tabulated(pmf) => Some(pmf.get(k).cloned().unwrap_or_else(BigRational::zero)),
        }
    }

    /// `P(X ≥ k)` in floating point, summed from above where that is more accurate.
    pub fn tail_f64(&self, k: usize) -> f64 {
        match self {
            Marginal::Geometric(p) => (1.0 - ratio_to_f64(p)).powi(k as i32),
            Marginal::Bernoulli(p) => match k {
                0 => 1.0,
                1 | 2 => ratio_to_f64(p),
                _ => 0.0,
            },
            Marginal::Tabulated(pmf) => pmf.iter().skip(k).map(ratio_to_f64).sum(),
            Marginal::Poisson(mu) => {
                let m = ratio_to_f64(mu);
                if (k as f64) <= m {
                    let below: f64 = (0..k).map(|i| self.pmf_f64(i)).sum();
                    (1.0 - below).max(0.0)
                } else {
                    let mut term = self.pmf_f64(k);
                    let mut sum = 0.0;
                    let mut i = k;
                    while term > 0.0 && term > sum * 1e-17 {
                        sum += term;
                        i += 1;
                        term *= m / i as f64;
                    }
                    sum
                }
            }
        }
    }

    /// `P(X_n = t)` for the sum `X_n` of `n` independent copies.
    pub fn fold_pmf<W: Weight>(&self, n: usize, t: usize) -> W {
        if n == 0 {
            return if t == 0 { W::one() } else { W::zero() };
        }
        match self {
            Marginal::Geometric(p) => {
                let q = BigRational::one() - p;
                W::from_int(&binomial((n + t - 1) as u64, t as u64))
                    .mul(&W::from_ratio(p).pow(n as u64))
                    .mul(&W::from_ratio(&q).pow(t as u64))
            }
            Marginal::Poisson(mu) => {
                let nmu = mu * BigRational::from_integer(n.into());
                let f = BigRational::from_integer(factorial(t as u64));
                W::exp_neg(&nmu).mul(&W::from_ratio(&nmu).pow(t as u64)).mul(&W::from_ratio(&(BigRational::one() / f)))
            }
            Marginal::Bernoulli(p) => {
                if t % 2 == 1 || t / 2 > n {
                    return W::zero();
                }
                let h = t / 2;
                let q = BigRational::one() - p;
                W::from_int(&binomial(n as u64, h as u64))
                    .mul(&W::from_ratio(p).pow(h as u64))
                    .mul(&W::from_ratio(&q).pow((n - h) as u64))
            }
            Marginal::Tabulated(_) => self.fold_pmf_prefix::<W>(n, t).pop().unwrap(),
        }
    }

    /// `P(X_n = t)` for `t = 0..=tmax`.
    pub fn fold_pmf_prefix<W: Weight>(&self, n: usize, tmax: usize) -> Vec<W> {
        match self {
            Marginal::Tabulated(pmf) => {
                let base: Vec<W> = (0..=tmax).map(|k| pmf.get(k).map(W::from_ratio).unwrap_or_else(W::zero)).collect();
                let mut acc: Vec<W> = (0..=tmax).map(|t| if t == 0 { W::one() } else { W::zero() }).collect();
                // Square-and-multiply over truncated convolutions.
                let mut power = base;
                let mut e = n;
                while e > 0 {
                    if e & 1 == 1 {
                        acc = convolve(&acc, &power, tmax);
                    }
                    e >>= 1;
                    if e > 0 {
                        power = convolve(&power, &power, tmax);
                    }
                }
                acc
            }
            _ => (0..=tmax).map(|t| self.fold_pmf::<W>(n, t)).collect(),
        }
    }
}

/// Convolution of two mass vectors, truncated to `0..=tmax`.
pub(crate) fn convolve<W: Weight>(a: &[W], b: &[W], tmax: usize) -> Vec<W> {
    let mut out = vec![W::zero(); tmax + 1];
    for (i, x) in a.iter().enumerate().take(tmax + 1) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(tmax + 1 - i) {
            if y.is_zero() {
                continue;
            }
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    out
}

impl fmt::Display for Marginal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Marginal::Geometric(p) => write!(f, "geometric({})", fmt_rational(p)),
            Marginal::Poisson(mu) => write!(f, "poisson({})", fmt_rational(mu)),
            Marginal::Bernoulli(p) => write!(f, "bernoulli({})", fmt_rational(p)),
            Marginal::Tabulated(pmf) => {
                let parts: Vec<String> = pmf.iter().map(fmt_rational).collect();
                write!(f, "tabulated({})", parts.join(","))
            }
        }
    }
}

/// Product offspring law: a type-`i` vertex has independent numbers of
/// children of each type `j`, distributed as `ν_{i,j}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OffspringSpec {
    d: usize,
    marginals: Vec<Marginal>,
}

#[derive(Serialize, Deserialize)]
struct MarginalFile {
    family: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mu: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pmf: Option<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
struct SpecFile {
    d: usize,
    marginals: BTreeMap<String, MarginalFile>,
}

impl OffspringSpec {
    /// `marginals[i][j]` is `ν_{i,j}`.
    pub fn new(marginals: Vec<Vec<Marginal>>) -> Result<Self, OffspringError> {
        let d = marginals.len();
        if d == 0 {
            return Err(OffspringError::Shape { expected: 1, got: 0 });
        }
        if let Some(row) = marginals.iter().find(|row| row.len() != d) {
            return Err(OffspringError::Shape { expected: d, got: row.len() });
        }
        let marginals: Vec<Marginal> = marginals.into_iter().flatten().collect();
        for m in &marginals {
            m.validate()?;
        }
        Ok(OffspringSpec { d, marginals })
    }

    /// The same marginal for every pair of types.
    pub fn uniform(d: usize, marginal: Marginal) -> Result<Self, OffspringError> {
        Self::new(vec![vec![marginal; d]; d])
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn marginal(&self, i: usize, j: usize) -> &Marginal {
        &self.marginals[i * self.d + j]
    }

    pub fn mean_matrix(&self) -> Vec<Vec<BigRational>> {
        (0..self.d).map(|i| (0..self.d).map(|j| self.marginal(i, j).mean()).collect()).collect()
    }

    /// All marginals coincide and belong to a named family. H2 is an identity
    /// for these, so the population-by-types law applies without further checks.
    pub fn is_homogeneous_named(&self) -> bool {
        let first = &self.marginals[0];
        !matches!(first, Marginal::Tabulated(_)) && self.marginals.iter().all(|m| m == first)
    }

    /// Type-`j` values of every parent type are identically distributed.
    pub fn has_identical_columns(&self) -> bool {
        (0..self.d).all(|j| (0..self.d).all(|i| self.marginal(i, j) == self.marginal(0, j)))
    }

    /// Log-free product `∏_j ν_{i,j}(z_j)`.
    pub fn offspring_pmf<W: Weight>(&self, i: usize, z: &[usize]) -> W {
        z.iter()
            .enumerate()
            .fold(W::one(), |acc, (j, &k)| acc.mul(&self.marginal(i, j).pmf::<W>(k)))
    }

    pub fn to_json(&self) -> String {
        let mut marginals = BTreeMap::new();
        for i in 0..self.d {
            for j in 0..self.d {
                let m = self.marginal(i, j);
                let mut file = MarginalFile { family: m.family().into(), p: None, mu: None, pmf: None };
                match m {
                    Marginal::Geometric(p) | Marginal::Bernoulli(p) => file.p = Some(fmt_rational(p)),
                    Marginal::Poisson(mu) => file.mu = Some(fmt_rational(mu)),
                    Marginal::Tabulated(pmf) => file.pmf = Some(pmf.iter().map(fmt_rational).collect()),
                }
                marginals.insert(format!("{},{}", i + 1, j + 1), file);
            }
        }
        serde_json::to_string_pretty(&SpecFile { d: self.d, marginals }).expect("specs always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, OffspringError> {
        let file: SpecFile = serde_json::from_str(text).map_err(|e| OffspringError::Parse(e.to_string()))?;
        let d = file.d;
        let mut grid: Vec<Vec<Option<Marginal>>> = vec![vec![None; d]; d];
        for (key, m) in file.marginals {
            let (i, j) = key
                .split_once(',')
                .and_then(|(a, b)| Some((a.trim().parse::<usize>().ok()?, b.trim().parse::<usize>().ok()?)))
                .filter(|&(i, j)| (1..=d).contains(&i) && (1..=d).contains(&j))
                .ok_or_else(|| OffspringError::Parse(format!("bad marginal key {:?}", key)))?;
            grid[i - 1][j - 1] = Some(marginal_from_file(&m)?);
        }
        let rows = grid
            .into_iter()
            .enumerate()
            .map(|(i, row)| {
                row.into_iter()
                    .enumerate()
                    .map(|(j, m)| m.ok_or_else(|| OffspringError::Parse(format!("missing marginal {},{}", i + 1, j + 1))))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(rows)
    }
}

fn marginal_from_file(m: &MarginalFile) -> Result<Marginal, OffspringError> {
    let num = |v: &Option<String>, name: &str| -> Result<BigRational, OffspringError> {
        v.as_deref()
            .and_then(parse_rational)
            .ok_or_else(|| OffspringError::Parse(format!("{} needs a numeric {}", m.family, name)))
    };
    match m.family.as_str() {
        "geometric" => Marginal::geometric(num(&m.p, "p")?),
        "poisson" => Marginal::poisson(num(&m.mu, "mu")?),
        "bernoulli" => Marginal::bernoulli(num(&m.p, "p")?),
        "tabulated" => {
            let pmf = m
                .pmf
                .as_ref()
                .ok_or_else(|| OffspringError::Parse("tabulated needs pmf".into()))?
                .iter()
                .map(|s| parse_rational(s).ok_or_else(|| OffspringError::Parse(format!("bad pmf entry {:?}", s))))
                .collect::<Result<Vec<_>, _>>()?;
            Marginal::tabulated(pmf)
        }
        other => Err(OffspringError::Parse(format!("unknown family {:?}", other))),
    }
}

impl fmt::Display for OffspringSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.d {
            for j in 0..self.d {
                if i + j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "ν{},{}={}", i + 1, j + 1, self.marginal(i, j))?;
            }
        }
        Ok(())
    }
}
