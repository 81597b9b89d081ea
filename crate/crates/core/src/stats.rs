//! Goodness-of-fit helpers for comparing simulated frequencies with exact
//! distributions.

use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Result of a Pearson chi-square goodness-of-fit test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

/// Pearson test of `observed` counts against `expected` probabilities.
///
/// Bins with expected count below `min_expected` are pooled into one bin
/// (dropped if the pool itself stays below the minimum and is empty).
/// Observations in zero-probability bins give p = 0.
pub fn chi_square(observed: &[u64], expected_probs: &[f64], min_expected: f64) -> ChiSquare {
    assert_eq!(observed.len(), expected_probs.len());
    let total: u64 = observed.iter().sum();
    let total_f = total as f64;
    let mut bins: Vec<(f64, f64)> = Vec::new();
    let (mut pool_obs, mut pool_exp) = (0.0, 0.0);
    for (&o, &p) in observed.iter().zip(expected_probs) {
        if p <= 0.0 {
            if o > 0 {
                return ChiSquare { statistic: f64::INFINITY, dof: 0, p_value: 0.0 };
            }
            continue;
        }
        let e = p * total_f;
        if e < min_expected {
            pool_obs += o as f64;
            pool_exp += e;
        } else {
            bins.push((o as f64, e));
        }
    }
    if pool_exp > 0.0 {
        if pool_exp >= min_expected || bins.is_empty() {
            bins.push((pool_obs, pool_exp));
        } else if let Some(last) = bins.last_mut() {
            last.0 += pool_obs;
            last.1 += pool_exp;
        }
    }
    let statistic: f64 = bins.iter().map(|(o, e)| (o - e) * (o - e) / e).sum();
    let dof = bins.len().saturating_sub(1);
    let p_value = if dof == 0 {
        1.0
    } else {
        1.0 - ChiSquared::new(dof as f64).expect("positive dof").cdf(statistic)
    };
    ChiSquare { statistic, dof, p_value }
}

/// |observed rate - p| in units of the binomial standard deviation.
pub fn binomial_z(successes: u64, trials: u64, p: f64) -> f64 {
    let n = trials as f64;
    let sd = (p * (1.0 - p) / n).sqrt();
    let rate = successes as f64 / n;
    if sd == 0.0 {
        return if (rate - p).abs() < 1e-12 { 0.0 } else { f64::INFINITY };
    }
    (rate - p).abs() / sd
}
