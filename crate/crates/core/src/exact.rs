//! Exact arithmetic used by the probability laws.
//!
//! Poisson masses are not rational, so exact values are kept as finite sums
//! `Σ c_a · e^{-a}` with rational coefficients and rational exponents. Every
//! law in this crate stays inside that ring.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact value `Σ coeff · exp(-exponent)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Exact {
    terms: BTreeMap<BigRational, BigRational>,
}

impl Exact {
    pub fn zero() -> Self {
        Exact { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::rational(BigRational::one())
    }

    pub fn rational(q: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(BigRational::zero(), q);
        }
        Exact { terms }
    }

    pub fn integer(v: impl Into<BigInt>) -> Self {
        Self::rational(BigRational::from_integer(v.into()))
    }

    /// `e^{-a}`.
    pub fn exp_neg(a: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(a, BigRational::one());
        Exact { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value as a plain rational, if no exponential factor survives.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => {
                let (a, c) = self.terms.iter().next().unwrap();
                a.is_zero().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BigRational, &BigRational)> {
        self.terms.iter()
    }

    fn insert(&mut self, a: BigRational, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(a.clone()).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&a);
        }
    }

    pub fn add(&self, other: &Exact) -> Exact {
        let mut out = self.clone();
        for (a, c) in &other.terms {
            out.insert(a.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Exact {
        Exact {
            terms: self.terms.iter().map(|(a, c)| (a.clone(), -c.clone())).collect(),
        }
    }

    pub fn sub(&self, other: &Exact) -> Exact {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Exact) -> Exact {
        let mut out = Exact::zero();
        for (a, c) in &self.terms {
            for (b, e) in &other.terms {
                out.insert(a + b, c * e);
            }
        }
        out
    }

    pub fn scale(&self, q: &BigRational) -> Exact {
        if q.is_zero() {
            return Exact::zero();
        }
        Exact {
            terms: self.terms.iter().map(|(a, c)| (a.clone(), c * q)).collect(),
        }
    }

    /// Quotient by a single-term value `c e^{-a}`; `None` for other divisors.
    pub fn div(&self, other: &Exact) -> Option<Exact> {
        if other.terms.len() != 1 {
            return None;
        }
        let (b, e) = other.terms.iter().next().unwrap();
        Some(Exact {
            terms: self.terms.iter().map(|(a, c)| (a - b, c / e)).collect(),
        })
    }

    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(a, c)| ratio_to_f64(c) * (-ratio_to_f64(a)).exp())
            .sum()
    }
}

impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (a, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if a.is_zero() {
                write!(f, "{}", c)?;
            } else {
                write!(f, "{}*exp(-{})", c, a)?;
            }
        }
        Ok(())
    }
}

pub fn ratio_to_f64(q: &BigRational) -> f64 {
    if let Some(v) = q.to_f64() {
        return v;
    }
    // Fall back to a manual quotient for values outside the direct conversion.
    let num = q.numer().to_f64().unwrap_or(f64::INFINITY);
    let den = q.denom().to_f64().unwrap_or(f64::INFINITY);
    num / den
}

/// Numeric domain shared by the exact and the float grade of every law.
pub trait Weight: Clone + fmt::Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_ratio(q: &BigRational) -> Self;
    fn exp_neg(a: &BigRational) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn div(&self, other: &Self) -> Option<Self>;
    fn is_zero(&self) -> bool;
    fn to_f64(&self) -> f64;
    /// Equality up to the grade's precision.
    fn same(&self, other: &Self) -> bool;

    fn from_int(v: &BigInt) -> Self {
        Self::from_ratio(&BigRational::from_integer(v.clone()))
    }

    fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }
}

impl Weight for Exact {
    fn zero() -> Self {
        Exact::zero()
    }
    fn one() -> Self {
        Exact::one()
    }
    fn from_ratio(q: &BigRational) -> Self {
        Exact::rational(q.clone())
    }
    fn exp_neg(a: &BigRational) -> Self {
        Exact::exp_neg(a.clone())
    }
    fn add(&self, other: &Self) -> Self {
        Exact::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        Exact::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        Exact::mul(self, other)
    }
    fn div(&self, other: &Self) -> Option<Self> {
        Exact::div(self, other)
    }
    fn is_zero(&self) -> bool {
        Exact::is_zero(self)
    }
    fn to_f64(&self) -> f64 {
        Exact::to_f64(self)
    }
    fn same(&self, other: &Self) -> bool {
        self == other
    }
}

impl Weight for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_ratio(q: &BigRational) -> Self {
        ratio_to_f64(q)
    }
    fn exp_neg(a: &BigRational) -> Self {
        (-ratio_to_f64(a)).exp()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Option<Self> {
        (*other != 0.0).then(|| self / other)
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn same(&self, other: &Self) -> bool {
        (self - other).abs() <= 1e-12 * self.abs().max(other.abs()).max(1e-300)
    }
    fn pow(&self, e: u64) -> Self {
        if e <= i32::MAX as u64 {
            self.powi(e as i32)
        } else {
            self.powf(e as f64)
        }
    }
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `(Σ parts)! / ∏ parts!`
pub fn multinomial(parts: &[usize]) -> BigInt {
    let mut acc = BigInt::one();
    let mut total = 0u64;
    for &p in parts {
        total += p as u64;
        acc *= binomial(total, p as u64);
    }
    acc
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> BigRational {
    BigRational::new(num.into(), den.into())
}

/// Exact integer quotient, `None` when `den` does not divide `num`.
pub fn exact_div(num: &BigInt, den: &BigInt) -> Option<BigInt> {
    if den.is_zero() {
        return None;
    }
    let (q, r) = num.div_rem(den);
    r.is_zero().then_some(q)
}

/// Parse `"0.25"`, `"1/4"`, `"3"` or `"2.5e-1"` into an exact rational.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let s = text.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let negative = mantissa.starts_with('-');
    let body = mantissa.trim_start_matches(['-', '+']);
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{}{}", int_part, frac_part).parse().ok()?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10u32);
    let mut q = if scale >= 0 {
        BigRational::from_integer(digits * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(digits, num_traits::pow(ten, (-scale) as usize))
    };
    if negative {
        q = -q;
    }
    Some(q)
}

/// Render a rational as `p/q` (or `p` for integers).
pub fn fmt_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn is_probability(q: &BigRational) -> bool {
    !q.is_negative() && q <= &BigRational::one()
}
