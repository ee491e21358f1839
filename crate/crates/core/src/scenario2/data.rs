//! Aggregated interval micro data.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::types::IntervalObservation;

/// Identical intervals carrying a combined weight and unit count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalGroup {
    pub lower: f64,
    pub upper: f64,
    pub weight: f64,
    pub units: usize,
}

/// Identical point values carrying a combined weight and unit count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointGroup {
    pub value: f64,
    pub weight: f64,
    pub units: usize,
}

/// Point and interval observations with duplicates merged.
///
/// Weights default to unit counts; resampling schemes may replace them by
/// arbitrary (even signed) reals while the unit counts stay fixed.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario2Data {
    pub points: Vec<PointGroup>,
    pub intervals: Vec<IntervalGroup>,
}

impl Scenario2Data {
    pub fn from_observations(data: &[IntervalObservation]) -> Result<Self> {
        Self::from_weighted(data, &vec![1.0; data.len()])
    }

    /// Merges duplicates, summing `weights`. Observations with zero weight
    /// are kept so that the lattice does not depend on the weights.
    pub fn from_weighted(data: &[IntervalObservation], weights: &[f64]) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::InvalidInput("no observations".into()));
        }
        if data.len() != weights.len() || weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::InvalidInput("weights must be finite and aligned with observations".into()));
        }
        let mut points: BTreeMap<u64, (f64, f64, usize)> = BTreeMap::new();
        let mut intervals: BTreeMap<(u64, u64), (f64, f64, f64, usize)> = BTreeMap::new();
        let key = |v: f64| {
            // order-preserving map of finite floats onto u64
            let b = v.to_bits();
            if b >> 63 == 1 { !b } else { b | 1 << 63 }
        };
        for (o, &w) in data.iter().zip(weights) {
            if o.is_point() {
                let e = points.entry(key(o.lower())).or_insert((o.lower(), 0.0, 0));
                e.1 += w;
                e.2 += 1;
            } else {
                let e = intervals.entry((key(o.lower()), key(o.upper()))).or_insert((o.lower(), o.upper(), 0.0, 0));
                e.2 += w;
                e.3 += 1;
            }
        }
        Ok(Self {
            points: points.into_values().map(|(value, weight, units)| PointGroup { value, weight, units }).collect(),
            intervals: intervals
                .into_values()
                .map(|(lower, upper, weight, units)| IntervalGroup { lower, upper, weight, units })
                .collect(),
        })
    }

    pub fn units(&self) -> usize {
        self.points.iter().map(|p| p.units).sum::<usize>() + self.intervals.iter().map(|q| q.units).sum::<usize>()
    }

    pub fn total_weight(&self) -> f64 {
        self.points.iter().map(|p| p.weight).sum::<f64>() + self.intervals.iter().map(|q| q.weight).sum::<f64>()
    }

    pub fn has_intervals(&self) -> bool {
        !self.intervals.is_empty()
    }

    /// Sorted unit-level completion given `(value, units)` atoms for the intervals.
    pub fn completion(&self, interval_atoms: &[(f64, usize)]) -> Vec<f64> {
        let mut y: Vec<f64> = self
            .points
            .iter()
            .flat_map(|p| std::iter::repeat(p.value).take(p.units))
            .chain(interval_atoms.iter().flat_map(|&(v, k)| std::iter::repeat(v).take(k)))
            .collect();
        y.sort_by(f64::total_cmp);
        y
    }
}
