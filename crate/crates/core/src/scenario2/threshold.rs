//! Threshold allocations for the Gini bounds of interval micro data.
//!
//! For a pivot `u0` on the lattice, the minimising completion pulls every
//! interval toward `u0` (its nearer end, or `u0` itself when it straddles),
//! while the maximising completion pushes intervals away from `u0`, leaving
//! only the straddling intervals' ends to be chosen.

use super::data::{IntervalGroup, Scenario2Data};
use super::lattice::EndpointLattice;
use crate::bounds::{BoundsResult, Diagnostics};
use crate::error::{Error, Result};
use crate::index::weighted_gini;
use crate::types::{IndexSpec, IntervalObservation};

pub const DEFAULT_ENUMERATION_BUDGET: usize = 20;

/// Extremal completion found by a threshold search.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdOutcome {
    pub value: f64,
    pub pivot: f64,
    /// `(value, units)` atoms assigned to the interval groups.
    pub atoms: Vec<(f64, usize)>,
    /// Whether every straddling assignment was enumerated.
    pub exact: bool,
    pub evaluations: usize,
}

/// Gini of the points plus weighted interval atoms `(value, weight)`.
fn evaluate(data: &Scenario2Data, atoms: &[(f64, f64)]) -> Option<f64> {
    let mut values: Vec<f64> = data.points.iter().map(|p| p.value).collect();
    let mut weights: Vec<f64> = data.points.iter().map(|p| p.weight).collect();
    for &(v, w) in atoms {
        values.push(v);
        weights.push(w);
    }
    weighted_gini(&values, &weights).ok().filter(|g| g.is_finite())
}

fn all_zero(data: &Scenario2Data) -> bool {
    data.points.iter().all(|p| p.value == 0.0) && data.intervals.iter().all(|q| q.lower == 0.0 && q.upper == 0.0)
}

pub fn gini_min_threshold(data: &Scenario2Data) -> Result<ThresholdOutcome> {
    let lattice = EndpointLattice::from_data(data);
    let pivots = if lattice.u.is_empty() { vec![0.0] } else { lattice.u.clone() };
    let mut best: Option<ThresholdOutcome> = None;
    let mut evaluations = 0;
    for &u0 in &pivots {
        let assigned: Vec<f64> = data.intervals.iter().map(|q| u0.clamp(q.lower, q.upper)).collect();
        let atoms: Vec<(f64, f64)> = assigned.iter().zip(&data.intervals).map(|(&v, q)| (v, q.weight)).collect();
        evaluations += 1;
        if let Some(g) = evaluate(data, &atoms) {
            if best.as_ref().is_none_or(|b| g < b.value) {
                best = Some(ThresholdOutcome {
                    value: g,
                    pivot: u0,
                    atoms: assigned.iter().zip(&data.intervals).map(|(&v, q)| (v, q.units)).collect(),
                    exact: true,
                    evaluations: 0,
                });
            }
        }
    }
    match best {
        Some(mut b) => {
            b.evaluations = evaluations;
            Ok(b)
        }
        None if all_zero(data) => {
            log::warn!("all observations are zero; reporting a Gini of 0");
            Ok(ThresholdOutcome {
                value: 0.0,
                pivot: 0.0,
                atoms: data.intervals.iter().map(|q| (0.0, q.units)).collect(),
                exact: true,
                evaluations,
            })
        }
        None => Err(Error::NonPositiveMean),
    }
}

/// Interval atoms when `k[j]` units of straddler `j` sit at the lower end.
fn split_atoms(fixed: &[(f64, f64)], straddlers: &[&IntervalGroup], k: &[usize]) -> Vec<(f64, f64)> {
    let mut atoms = fixed.to_vec();
    for (q, &kj) in straddlers.iter().zip(k) {
        let f = kj as f64 / q.units as f64;
        atoms.push((q.lower, q.weight * f));
        atoms.push((q.upper, q.weight * (1.0 - f)));
    }
    atoms
}

struct PivotSearch<'a> {
    data: &'a Scenario2Data,
    fixed: Vec<(f64, f64)>,
    straddlers: Vec<&'a IntervalGroup>,
    evaluations: usize,
}

impl PivotSearch<'_> {
    fn value(&mut self, k: &[usize]) -> Option<f64> {
        self.evaluations += 1;
        evaluate(self.data, &split_atoms(&self.fixed, &self.straddlers, k))
    }

    fn exhaustive(&mut self) -> Option<(Vec<usize>, f64)> {
        let m: Vec<usize> = self.straddlers.iter().map(|q| q.units).collect();
        let mut k = vec![0usize; m.len()];
        let mut best: Option<(Vec<usize>, f64)> = None;
        loop {
            if let Some(v) = self.value(&k) {
                if best.as_ref().is_none_or(|b| v > b.1) {
                    best = Some((k.clone(), v));
                }
            }
            let mut j = 0;
            loop {
                if j == m.len() {
                    return best;
                }
                k[j] += 1;
                if k[j] <= m[j] {
                    break;
                }
                k[j] = 0;
                j += 1;
            }
        }
    }

    /// Steepest ascent over unit moves and full flips of single groups.
    fn climb(&mut self, mut k: Vec<usize>) -> Option<(Vec<usize>, f64)> {
        let mut cur = self.value(&k)?;
        loop {
            let mut best: Option<(Vec<usize>, f64)> = None;
            for j in 0..k.len() {
                let m = self.straddlers[j].units;
                let mut targets = vec![0, m];
                if k[j] > 0 {
                    targets.push(k[j] - 1);
                }
                if k[j] < m {
                    targets.push(k[j] + 1);
                }
                for t in targets {
                    if t == k[j] {
                        continue;
                    }
                    let mut cand = k.clone();
                    cand[j] = t;
                    if let Some(v) = self.value(&cand) {
                        if v > cur + 1e-15 && best.as_ref().is_none_or(|b| v > b.1) {
                            best = Some((cand, v));
                        }
                    }
                }
            }
            match best {
                Some((kk, v)) => {
                    k = kk;
                    cur = v;
                }
                None => return Some((k, cur)),
            }
        }
    }
}

pub fn gini_max_threshold(data: &Scenario2Data, enumeration_budget: usize) -> Result<ThresholdOutcome> {
    let lattice = EndpointLattice::from_data(data);
    let pivots = if lattice.u.is_empty() { vec![0.0] } else { lattice.u.clone() };
    let mut best: Option<ThresholdOutcome> = None;
    let mut exact = true;
    let mut evaluations = 0;
    for &u0 in &pivots {
        let mut fixed = Vec::new();
        let mut fixed_atoms = Vec::new();
        let mut straddlers = Vec::new();
        for q in &data.intervals {
            if q.upper < u0 {
                fixed.push((q.lower, q.weight));
                fixed_atoms.push((q.lower, q.units));
            } else if q.lower > u0 {
                fixed.push((q.upper, q.weight));
                fixed_atoms.push((q.upper, q.units));
            } else {
                straddlers.push(q);
            }
        }
        let log_size: f64 = straddlers.iter().map(|q| ((q.units + 1) as f64).log2()).sum();
        let mut search = PivotSearch { data, fixed, straddlers, evaluations: 0 };
        let found = if log_size <= enumeration_budget as f64 {
            search.exhaustive()
        } else {
            exact = false;
            let lows: Vec<usize> = search.straddlers.iter().map(|q| q.units).collect();
            let highs = vec![0; lows.len()];
            let a = search.climb(lows);
            let b = search.climb(highs);
            match (a, b) {
                (Some(a), Some(b)) => Some(if b.1 > a.1 { b } else { a }),
                (a, b) => a.or(b),
            }
        };
        evaluations += search.evaluations;
        if let Some((k, v)) = found {
            if best.as_ref().is_none_or(|b| v > b.value) {
                let mut atoms = fixed_atoms;
                for (q, &kj) in search.straddlers.iter().zip(&k) {
                    atoms.push((q.lower, kj));
                    atoms.push((q.upper, q.units - kj));
                }
                best = Some(ThresholdOutcome { value: v, pivot: u0, atoms, exact: true, evaluations: 0 });
            }
        }
    }
    match best {
        Some(mut b) => {
            b.exact = exact;
            b.evaluations = evaluations;
            Ok(b)
        }
        None if all_zero(data) => {
            log::warn!("all observations are zero; reporting a Gini of 0");
            Ok(ThresholdOutcome {
                value: 0.0,
                pivot: 0.0,
                atoms: data.intervals.iter().map(|q| (0.0, q.units)).collect(),
                exact: true,
                evaluations,
            })
        }
        None => Err(Error::NonPositiveMean),
    }
}

/// Sharp Gini bounds from the two threshold searches.
pub fn gini_bounds_2_data(data: &Scenario2Data, enumeration_budget: usize) -> Result<BoundsResult> {
    let mn = gini_min_threshold(data)?;
    let mx = gini_max_threshold(data, enumeration_budget)?;
    let mut warnings = Vec::new();
    if !mx.exact {
        warnings.push("upper bound from greedy search over straddling intervals".into());
    }
    Ok(BoundsResult {
        index: IndexSpec::Gini,
        lower: mn.value,
        upper: mx.value,
        argmin: data.completion(&mn.atoms),
        argmax: data.completion(&mx.atoms),
        diagnostics: Diagnostics {
            method: "threshold".into(),
            iterations: mn.evaluations + mx.evaluations,
            exact: mx.exact,
            warnings,
            ..Default::default()
        },
    })
}

pub fn gini_bounds_2(data: &[IntervalObservation]) -> Result<BoundsResult> {
    gini_bounds_2_data(&Scenario2Data::from_observations(data)?, DEFAULT_ENUMERATION_BUDGET)
}
