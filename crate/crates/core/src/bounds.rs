//! Result type shared by every bounds routine.

use crate::types::IndexSpec;

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Diagnostics {
    pub method: String,
    /// Solver iterations summed over both directions.
    pub iterations: usize,
    /// False when an endpoint comes from a heuristic search.
    pub exact: bool,
    /// Distinct values in the reported `(argmin, argmax)` completions.
    pub distinct_values: Option<(usize, usize)>,
    pub distinct_value_limit: Option<usize>,
    /// Per-group lower-endpoint fractions behind the minimum and maximum.
    pub corner_min: Option<Vec<f64>>,
    pub corner_max: Option<Vec<f64>>,
    /// Largest disagreement with an independent path, when one was run.
    pub agreement_gap: Option<f64>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundsResult {
    pub index: IndexSpec,
    pub lower: f64,
    pub upper: f64,
    /// Sorted completion attaining `lower`.
    pub argmin: Vec<f64>,
    /// Sorted completion attaining `upper`.
    pub argmax: Vec<f64>,
    pub diagnostics: Diagnostics,
}

impl BoundsResult {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, value: f64, tol: f64) -> bool {
        value >= self.lower - tol && value <= self.upper + tol
    }
}

/// Number of distinct values after merging neighbours within
/// `1e-7 * (1 + |v|)`.
pub fn count_distinct(values: &[f64]) -> usize {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mut count = 0;
    let mut last: Option<f64> = None;
    for x in v {
        match last {
            Some(l) if (x - l).abs() <= 1e-7 * (1.0 + l.abs()) => {}
            _ => {
                count += 1;
                last = Some(x);
            }
        }
    }
    count
}
