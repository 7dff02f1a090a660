use num_traits::Zero;
use rand::Rng;
use rand_distr::{Distribution, Geometric, Poisson};
use statrs::function::gamma::ln_gamma;

use crate::model::Marginal;

use super::SamplingError;

/// `Bin(n, p)` by inversion. Small means walk the pmf up from 0; otherwise
/// the walk starts at the mode and alternates outwards, which avoids the
/// underflow of `(1 − p)^n`.
pub fn binomial<R: Rng + ?Sized>(n: u64, p: f64, rng: &mut R) -> u64 {
    if n == 0 || p <= 0.0 {
        return 0;
    }
    if p >= 1.0 {
        return n;
    }
    if p > 0.5 {
        return n - binomial(n, 1.0 - p, rng);
    }
    let q = 1.0 - p;
    let ratio = p / q;
    let u: f64 = rng.gen();
    let start = q.powf(n as f64);
    if (n as f64) * p < 30.0 && start > 1e-250 {
        let mut f = start;
        let mut acc = f;
        let mut k = 0u64;
        while u >= acc && k < n {
            f *= ratio * (n - k) as f64 / (k + 1) as f64;
            k += 1;
            acc += f;
        }
        return k;
    }
    let mode = (((n + 1) as f64) * p).floor().min(n as f64) as u64;
    let ln_f = ln_gamma((n + 1) as f64) - ln_gamma((mode + 1) as f64) - ln_gamma((n - mode + 1) as f64)
        + mode as f64 * p.ln()
        + (n - mode) as f64 * q.ln();
    let f_mode = ln_f.exp();
    let mut acc = f_mode;
    if u < acc {
        return mode;
    }
    let (mut lo, mut f_lo) = (mode, f_mode);
    let (mut hi, mut f_hi) = (mode, f_mode);
    loop {
        let mut moved = false;
        if lo > 0 {
            f_lo *= lo as f64 / ((n - lo + 1) as f64 * ratio);
            lo -= 1;
            acc += f_lo;
            moved = true;
            if u < acc {
                return lo;
            }
        }
        if hi < n {
            f_hi *= ratio * (n - hi) as f64 / (hi + 1) as f64;
            hi += 1;
            acc += f_hi;
            moved = true;
            if u < acc {
                return hi;
            }
        }
        if !moved {
            // Rounding left `u` above the accumulated mass.
            return mode;
        }
    }
}

/// Cached `ν_k / P(X ≥ k)` for the successive-binomial multinomial, extended
/// on demand. The last support point stores 1.
pub(crate) struct Hazard<'a> {
    pmf: &'a Marginal,
    h: Vec<f64>,
    exhausted: bool,
}

impl<'a> Hazard<'a> {
    pub(crate) fn new(pmf: &'a Marginal) -> Self {
        Hazard { pmf, h: Vec::new(), exhausted: false }
    }

    /// `None` once there is no mass at or beyond `k`.
    fn get(&mut self, k: usize) -> Option<f64> {
        while self.h.len() <= k && !self.exhausted {
            let j = self.h.len();
            let tail = self.pmf.tail_f64(j);
            if tail <= 0.0 {
                self.exhausted = true;
                break;
            }
            if self.pmf.support_max().is_some_and(|m| j >= m) {
                self.h.push(1.0);
                self.exhausted = true;
            } else {
                self.h.push((self.pmf.pmf_f64(j) / tail).min(1.0));
            }
        }
        self.h.get(k).copied()
    }

    pub(crate) fn sample<R: Rng + ?Sized>(&mut self, n: usize, rng: &mut R) -> Result<Vec<usize>, SamplingError> {
        let mut counts = Vec::new();
        let mut left = n as u64;
        let mut k = 0usize;
        while left > 0 {
            let c = match self.get(k) {
                Some(h) if h >= 1.0 => left,
                Some(h) => binomial(left, h, rng),
                None => {
                    return Err(SamplingError::Invalid(format!(
                        "offspring law {} has no mass beyond {} but {} draws remain",
                        self.pmf, k, left
                    )))
                }
            };
            counts.push(c as usize);
            left -= c;
            k += 1;
        }
        Ok(counts)
    }
}

/// Multinomial `(n; ν_0, ν_1, …)` by successive binomials:
/// `N_k ~ Bin(n − Σ_{l<k} N_l, ν_k / P(X ≥ k))`. The result is trimmed after
/// its last non-zero entry.
pub fn sample_multinomial_sequential<R: Rng + ?Sized>(
    n: usize,
    pmf: &Marginal,
    rng: &mut R,
) -> Result<Vec<usize>, SamplingError> {
    Hazard::new(pmf).sample(n, rng)
}

/// One draw from `ν`.
pub fn sample_offspring<R: Rng + ?Sized>(m: &Marginal, rng: &mut R) -> usize {
    match m {
        Marginal::Geometric(p) => {
            let p = crate::exact::ratio_to_f64(p);
            if p >= 1.0 {
                return 0;
            }
            Geometric::new(p).expect("validated parameter").sample(rng) as usize
        }
        Marginal::Poisson(mu) => {
            let mu = crate::exact::ratio_to_f64(mu);
            if mu <= 0.0 {
                return 0;
            }
            let v: f64 = Poisson::new(mu).expect("validated parameter").sample(rng);
            v as usize
        }
        Marginal::Bernoulli(p) => {
            if rng.gen::<f64>() < crate::exact::ratio_to_f64(p) {
                2
            } else {
                0
            }
        }
        Marginal::Tabulated(pmf) => {
            let u: f64 = rng.gen();
            let mut acc = 0.0;
            for (k, q) in pmf.iter().enumerate() {
                acc += crate::exact::ratio_to_f64(q);
                if u < acc {
                    return k;
                }
            }
            // Rounding: fall back to the last support point with mass.
            pmf.iter().rposition(|q| !q.is_zero()).unwrap_or(0)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;
    use crate::sampling::RngHandle;

    #[test]
    fn binomial_edges_and_mean() {
        let mut rng = RngHandle::new(1);
        assert_eq!(binomial(0, 0.3, &mut rng), 0);
        assert_eq!(binomial(5, 1.0, &mut rng), 5);
        for &(n, p) in &[(10u64, 0.5), (1000, 0.3), (100_000, 0.01), (2_000_000, 0.4)] {
            let draws = 2000;
            let mean: f64 = (0..draws).map(|_| binomial(n, p, &mut rng) as f64).sum::<f64>() / draws as f64;
            let sd = ((n as f64) * p * (1.0 - p) / draws as f64).sqrt();
            assert!((mean - n as f64 * p).abs() < 5.0 * sd, "n={} p={} mean={}", n, p, mean);
        }
    }

    #[test]
    fn multinomial_conserves() {
        let mut rng = RngHandle::new(2);
        let geo = Marginal::geometric(ratio(1, 2)).unwrap();
        let tab = Marginal::tabulated(vec![ratio(1, 3), ratio(0, 1), ratio(2, 3)]).unwrap();
        for _ in 0..200 {
            let c = sample_multinomial_sequential(17, &geo, &mut rng).unwrap();
            assert_eq!(c.iter().sum::<usize>(), 17);
            let t = sample_multinomial_sequential(9, &tab, &mut rng).unwrap();
            assert_eq!(t.iter().sum::<usize>(), 9);
            assert!(t.len() <= 3);
            assert_eq!(t.get(1).copied().unwrap_or(0), 0);
        }
    }

    #[test]
    fn bernoulli_support() {
        let mut rng = RngHandle::new(3);
        let b = Marginal::bernoulli(ratio(1, 2)).unwrap();
        assert!((0..100).all(|_| matches!(sample_offspring(&b, &mut rng), 0 | 2)));
    }
}
