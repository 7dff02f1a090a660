use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Pow;

use crate::exact::{binomial, exact_div, multinomial};
use crate::model::MultitypeDegreeSequence;

use super::{root_fraction, LawError};

/// Number of forests with degree sequence `ds`:
/// `(det(−K) / ∏ n_i) ∏_i ∏_j C(n_i; S_{i,j})`.
pub fn count_forests_gds(ds: &MultitypeDegreeSequence) -> Result<BigInt, LawError> {
    let summary = ds.validate().map_err(|e| LawError::Precondition(e.to_string()))?;
    let mut num = summary.det.clone();
    for i in 0..ds.d() {
        for j in 0..ds.d() {
            num *= multinomial(ds.table(i, j));
        }
    }
    let den: BigInt = summary.n.iter().map(|&v| BigInt::from(v)).product();
    exact_div(&num, &den).ok_or_else(|| LawError::Internal(format!("{} is not divisible by {}", num, den)))
}

fn check(r: &[usize], n: &[usize]) -> Result<(), LawError> {
    if r.len() != n.len() || r.is_empty() {
        return Err(LawError::Precondition(format!(
            "r and n need the same positive length, got {} and {}",
            r.len(),
            n.len()
        )));
    }
    for i in 0..r.len() {
        if r[i] == 0 || r[i] >= n[i] {
            return Err(LawError::Precondition(format!(
                "type {}: need 1 ≤ r_i < n_i, got r_i = {}, n_i = {}",
                i + 1,
                r[i],
                n[i]
            )));
        }
    }
    Ok(())
}

fn integral(q: BigRational) -> Result<BigInt, LawError> {
    if q.is_integer() {
        Ok(q.to_integer())
    } else {
        Err(LawError::Internal(format!("count evaluated to the non-integer {}", q)))
    }
}

/// Plane `d`-type forests with `r_i` roots and `n_i` vertices of type `i`:
/// `(r/n) ∏_i C(n + n_i − r_i − 1, n_i − r_i)`.
pub fn count_plane(r: &[usize], n: &[usize]) -> Result<BigInt, LawError> {
    check(r, n)?;
    let total: usize = n.iter().sum();
    let mut q = root_fraction(r, n);
    for i in 0..r.len() {
        let t = (n[i] - r[i]) as u64;
        q *= BigRational::from_integer(binomial(total as u64 + t - 1, t));
    }
    integral(q)
}

/// Labeled `d`-type forests, with roots labeled `1..=r` in type blocks:
/// `(r/n) n^{n−r}`.
pub fn count_labeled(r: &[usize], n: &[usize]) -> Result<BigInt, LawError> {
    check(r, n)?;
    let rt: usize = r.iter().sum();
    let total: usize = n.iter().sum();
    let q = root_fraction(r, n) * BigRational::from_integer(Pow::pow(BigInt::from(total), (total - rt) as u32));
    integral(q)
}

/// Binary `d`-type forests (every vertex has 0 or 2 children of each type):
/// `(r/n) ∏_i C(n, (n_i − r_i)/2)`.
pub fn count_binary(r: &[usize], n: &[usize]) -> Result<BigInt, LawError> {
    check(r, n)?;
    if let Some(i) = (0..r.len()).find(|&i| (n[i] - r[i]) % 2 == 1) {
        return Err(LawError::Precondition(format!(
            "type {}: n_i − r_i = {} is odd, no binary forest exists",
            i + 1,
            n[i] - r[i]
        )));
    }
    let total: usize = n.iter().sum();
    let mut q = root_fraction(r, n);
    for i in 0..r.len() {
        q *= BigRational::from_integer(binomial(total as u64, ((n[i] - r[i]) / 2) as u64));
    }
    integral(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_examples() {
        assert_eq!(count_plane(&[1, 1], &[2, 2]).unwrap(), BigInt::from(8));
        assert!(count_plane(&[1, 0], &[2, 2]).is_err());
        assert_eq!(count_labeled(&[1], &[3]).unwrap(), BigInt::from(3));
        assert_eq!(count_binary(&[1], &[3]).unwrap(), BigInt::from(1));
        assert!(count_binary(&[1], &[4]).is_err());
    }

    #[test]
    fn gds_examples() {
        let ten = MultitypeDegreeSequence::new(
            vec![1, 0],
            vec![vec![vec![4, 1, 1], vec![3, 3]], vec![vec![3, 0, 1], vec![3, 1]]],
        )
        .unwrap();
        assert_eq!(count_forests_gds(&ten).unwrap(), BigInt::from(1200));
        let unitype = MultitypeDegreeSequence::new(vec![1], vec![vec![vec![2, 0, 1]]]).unwrap();
        assert_eq!(count_forests_gds(&unitype).unwrap(), BigInt::from(1));
    }
}
