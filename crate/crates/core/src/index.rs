//! Exact evaluation of inequality indices on fully observed samples.

use crate::error::{Error, Result};
use crate::types::SortedSample;

/// Gini coefficient in sorted form, `sum_i (2i - n - 1) y_i / (n^2 ybar)` with
/// 1-based `i`. Ranges over `[0, 1 - 1/n]` for non-negative data.
pub fn gini(sample: &SortedSample) -> Result<f64> {
    let y = sample.values();
    let n = y.len() as f64;
    let mean = sample.mean();
    if mean <= 0.0 {
        return Err(Error::NonPositiveMean);
    }
    let num: f64 = y
        .iter()
        .enumerate()
        .map(|(i, &v)| (2.0 * (i as f64 + 1.0) - n - 1.0) * v)
        .sum();
    Ok(num / (n * n * mean))
}

/// Gini coefficient of `values` carrying (possibly unnormalised) `weights`.
///
/// Weights may be signed as long as their total and the weighted mean are
/// positive; the value then extends the pairwise-difference formula
/// `sum_ij w_i w_j |y_i - y_j| / (2 W^2 mu)` algebraically.
pub fn weighted_gini(values: &[f64], weights: &[f64]) -> Result<f64> {
    if values.len() != weights.len() || values.is_empty() {
        return Err(Error::InvalidInput("values and weights must be non-empty and aligned".into()));
    }
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return Err(Error::InvalidInput("total weight must be positive".into()));
    }
    let mut cum = 0.0;
    let mut num = 0.0;
    let mut mean = 0.0;
    for &i in &order {
        let p = weights[i] / total;
        let prev = cum;
        cum += p;
        num += p * values[i] * (cum + prev - 1.0);
        mean += p * values[i];
    }
    if mean <= 0.0 {
        return Err(Error::NonPositiveMean);
    }
    Ok(num / mean)
}

/// Linear-fractional coefficients `(r1, r2)` of the Gini coefficient for a
/// sorted vector whose positions carry `weights` (summing to one):
/// `r1_i = w_i (C_i + C_{i-1} - 1)`, `r2_i = w_i`, with `C` the cumulative weight.
pub fn gini_coefficients(weights: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let total: f64 = weights.iter().sum();
    let mut cum = 0.0;
    let r1 = weights
        .iter()
        .map(|&w| {
            let p = w / total;
            let prev = cum;
            cum += p;
            p * (cum + prev - 1.0)
        })
        .collect();
    let r2 = weights.iter().map(|&w| w / total).collect();
    (r1, r2)
}

/// 1-based order-statistic position `floor(tau * n)`.
///
/// A 1e-9 guard absorbs binary representation error in `tau * n`
/// (e.g. `0.57 * 100`).
pub fn quantile_position(tau: f64, n: usize) -> usize {
    (tau * n as f64 + 1e-9).floor() as usize
}

/// `num / den` with the conventions used for quantile ratios: `x/0 = +inf`
/// for positive `x` and `0/0 = 1`.
pub fn safe_ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        if num == 0.0 {
            1.0
        } else if num > 0.0 {
            f64::INFINITY
        } else {
            f64::NEG_INFINITY
        }
    } else {
        num / den
    }
}

/// Sample quantile ratio `y_{floor(tau2 n)} / y_{floor(tau1 n)}`.
pub fn quantile_ratio(sample: &SortedSample, tau1: f64, tau2: f64) -> Result<f64> {
    let n = sample.len();
    let k1 = quantile_position(tau1, n);
    let k2 = quantile_position(tau2, n);
    if k1 < 1 || k1 > n {
        return Err(Error::IndexOutOfRange { position: k1, n });
    }
    if k2 < 1 || k2 > n {
        return Err(Error::IndexOutOfRange { position: k2, n });
    }
    let y = sample.values();
    Ok(safe_ratio(y[k2 - 1], y[k1 - 1]))
}

/// Hoover index `sum_i |y_i - ybar| / (2 n ybar)`.
pub fn hoover(sample: &SortedSample) -> Result<f64> {
    let mean = sample.mean();
    if mean <= 0.0 {
        return Err(Error::NonPositiveMean);
    }
    let n = sample.len() as f64;
    let dev: f64 = sample.values().iter().map(|&v| (v - mean).abs()).sum();
    Ok(dev / (2.0 * n * mean))
}
