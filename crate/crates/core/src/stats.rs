//! Sample moments and the goodness-of-fit test used to compare stochastic
//! ensembles with the rate equations.

use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Running mean and variance (Welford).
#[derive(Debug, Clone, Copy, Default)]
pub struct Moments {
    n: usize,
    mean: f64,
    m2: f64,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn count(&self) -> usize {
        self.n
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Unbiased sample variance; zero for fewer than two samples.
    pub fn variance(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            (self.m2 / (self.n - 1) as f64).max(0.0)
        }
    }
}

/// Pearson chi-square statistic, degrees of freedom and p-value of observed
/// counts against expected probabilities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquareTest {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

/// Bins whose expected count is below `min_expected` are pooled into one.
pub fn chi_square_test(
    observed: &[u64],
    expected_prob: &[f64],
    min_expected: f64,
) -> ChiSquareTest {
    assert_eq!(observed.len(), expected_prob.len());
    let total: u64 = observed.iter().sum();
    let n = total as f64;
    let mut bins: Vec<(f64, f64)> = Vec::new();
    let (mut pooled_obs, mut pooled_exp) = (0.0, 0.0);
    for (&o, &p) in observed.iter().zip(expected_prob) {
        let e = p * n;
        if e >= min_expected {
            bins.push((o as f64, e));
        } else {
            pooled_obs += o as f64;
            pooled_exp += e;
        }
    }
    if pooled_exp > 0.0 || pooled_obs > 0.0 {
        if pooled_exp >= min_expected || bins.is_empty() {
            bins.push((pooled_obs, pooled_exp));
        } else if let Some(last) = bins.iter_mut().min_by(|a, b| a.1.total_cmp(&b.1)) {
            last.0 += pooled_obs;
            last.1 += pooled_exp;
        }
    }
    let statistic: f64 = bins
        .iter()
        .map(|&(o, e)| {
            if e > 0.0 {
                (o - e).powi(2) / e
            } else if o > 0.0 {
                f64::INFINITY
            } else {
                0.0
            }
        })
        .sum();
    let dof = bins.len().saturating_sub(1);
    let p_value = if dof == 0 {
        if statistic == 0.0 {
            1.0
        } else {
            0.0
        }
    } else if statistic.is_infinite() {
        0.0
    } else {
        let dist = ChiSquared::new(dof as f64).expect("positive degrees of freedom");
        1.0 - dist.cdf(statistic)
    };
    ChiSquareTest {
        statistic,
        dof,
        p_value,
    }
}
