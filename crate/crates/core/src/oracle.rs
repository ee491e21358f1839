//! Brute-force bounds for small instances.
//!
//! Every unknown value is enumerated over its endpoints, an interior grid and
//! (for micro data) the lattice points it covers. Identical unknowns are
//! enumerated as multisets. With constraints, assignments are filtered, and
//! every run of tied values inside a group is additionally solved against each
//! constraint row taken as active.

use rayon::prelude::*;

use crate::bounds::{BoundsResult, Diagnostics};
use crate::error::{Error, Result};
use crate::index::{gini, hoover, quantile_ratio};
use crate::scenario1::{linearize, LinearRow};
use crate::types::{ConstraintSet, GroupedTable, IndexSpec, IntervalObservation, SortedSample};

const FEASIBILITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleConfig {
    pub max_n: usize,
    pub interior_grid_steps: usize,
    pub index: IndexSpec,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self { max_n: 8, interior_grid_steps: 8, index: IndexSpec::Gini }
    }
}

pub const ORACLE_MAX_N: usize = 10;

#[derive(Debug, Clone, Copy)]
pub enum OracleInput<'a> {
    Table { table: &'a GroupedTable, constraints: &'a ConstraintSet },
    Micro(&'a [IntervalObservation]),
}

/// `count` exchangeable unknowns sharing one candidate list.
struct Slot {
    candidates: Vec<f64>,
    count: usize,
}

fn candidates(lower: f64, upper: f64, steps: usize, extra: &[f64]) -> Vec<f64> {
    let mut c: Vec<f64> = (0..=steps).map(|s| lower + (upper - lower) * s as f64 / steps as f64).collect();
    c.push(upper);
    c.extend(extra.iter().copied().filter(|&v| lower <= v && v <= upper));
    c.sort_by(f64::total_cmp);
    c.dedup();
    c
}

/// All non-decreasing index sequences of length `count` into `len` values.
fn multisets(len: usize, count: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0usize; count];
    loop {
        out.push(cur.clone());
        let mut i = count;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] + 1 < len {
                let v = cur[i] + 1;
                for c in cur[i..].iter_mut() {
                    *c = v;
                }
                break;
            }
        }
    }
}

fn evaluate(index: &IndexSpec, y: &[f64]) -> Option<f64> {
    let s = SortedSample::new(y.to_vec()).ok()?;
    let v = match *index {
        IndexSpec::Gini => gini(&s),
        IndexSpec::QuantileRatio { tau1, tau2 } => quantile_ratio(&s, tau1, tau2),
        IndexSpec::Hoover => hoover(&s),
    }
    .ok()?;
    (!v.is_nan()).then_some(v)
}

/// Best value with its enumeration code; ties go to the smaller code so the
/// result does not depend on how the work is split across threads.
type Best = Option<(f64, usize, Vec<f64>)>;

fn better(candidate: (f64, usize), current: &Best, smaller: bool) -> bool {
    match current {
        None => true,
        Some((v, c, _)) => {
            let strictly = if smaller { candidate.0 < *v } else { candidate.0 > *v };
            strictly || (candidate.0 == *v && candidate.1 < *c)
        }
    }
}

#[derive(Default)]
struct Extremes {
    lower: Best,
    upper: Best,
    evaluated: usize,
}

impl Extremes {
    fn offer(&mut self, v: f64, code: usize, y: &[f64]) {
        self.evaluated += 1;
        if better((v, code), &self.lower, true) {
            self.lower = Some((v, code, y.to_vec()));
        }
        if better((v, code), &self.upper, false) {
            self.upper = Some((v, code, y.to_vec()));
        }
    }

    fn merge(mut self, other: Self) -> Self {
        if let Some((v, c, y)) = other.lower {
            if better((v, c), &self.lower, true) {
                self.lower = Some((v, c, y));
            }
        }
        if let Some((v, c, y)) = other.upper {
            if better((v, c), &self.upper, false) {
                self.upper = Some((v, c, y));
            }
        }
        self.evaluated += other.evaluated;
        self
    }
}

/// Constraint rows on the group-ordered vector, equalities flagged.
struct Rows {
    rows: Vec<(LinearRow, bool)>,
}

impl Rows {
    fn feasible(&self, y: &[f64]) -> bool {
        self.rows.iter().all(|(r, eq)| {
            let lhs: f64 = r.coefficients.iter().zip(y).map(|(a, b)| a * b).sum();
            let tol = FEASIBILITY_TOL * (1.0 + r.rhs.abs());
            if *eq { (lhs - r.rhs).abs() <= tol } else { lhs <= r.rhs + tol }
        })
    }
}

pub fn brute_force_bounds(input: OracleInput<'_>, config: &OracleConfig) -> Result<BoundsResult> {
    if config.max_n > ORACLE_MAX_N {
        return Err(Error::InvalidInput(format!("oracle max_n is capped at {ORACLE_MAX_N}")));
    }
    config.index.validate()?;
    let steps = config.interior_grid_steps.max(1);
    let mut fixed = Vec::new();
    let mut slots = Vec::new();
    // group ranges inside the concatenated vector, for tied-run refinement
    let mut ranges = Vec::new();
    let mut rows = Rows { rows: Vec::new() };
    match input {
        OracleInput::Table { table, constraints } => {
            if table.n() > config.max_n {
                return Err(Error::TooLarge { n: table.n(), max_n: config.max_n });
            }
            for (&(lo, hi), &c) in table.brackets().iter().zip(table.counts()) {
                if c > 0 {
                    slots.push(Slot { candidates: candidates(lo, hi, steps, &[]), count: c as usize });
                }
            }
            ranges = table.group_ranges().into_iter().filter(|r| !r.is_empty()).collect();
            for r in &constraints.equality_rows {
                rows.rows.push((linearize(r, table)?, true));
            }
            for r in &constraints.inequality_rows {
                rows.rows.push((linearize(r, table)?, false));
            }
        }
        OracleInput::Micro(data) => {
            if data.is_empty() {
                return Err(Error::InvalidInput("no observations".into()));
            }
            if data.len() > config.max_n {
                return Err(Error::TooLarge { n: data.len(), max_n: config.max_n });
            }
            let mut lattice: Vec<f64> = data.iter().flat_map(|o| [o.lower(), o.upper()]).collect();
            lattice.sort_by(f64::total_cmp);
            lattice.dedup();
            let mut intervals: Vec<(f64, f64)> = Vec::new();
            for o in data {
                if o.is_point() {
                    fixed.push(o.lower());
                } else {
                    intervals.push((o.lower(), o.upper()));
                }
            }
            intervals.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
            for chunk in intervals.chunk_by(|a, b| a == b) {
                let (lo, hi) = chunk[0];
                slots.push(Slot { candidates: candidates(lo, hi, steps, &lattice), count: chunk.len() });
            }
        }
    }

    let per_slot: Vec<Vec<Vec<usize>>> = slots.iter().map(|s| multisets(s.candidates.len(), s.count)).collect();
    let sizes: Vec<usize> = per_slot.iter().map(Vec::len).collect();
    let total: usize = sizes.iter().product();
    let constrained = !rows.rows.is_empty();

    let extremes = (0..total)
        .into_par_iter()
        .fold(Extremes::default, |mut acc, index| {
            let mut code = index;
            let mut y = Vec::with_capacity(fixed.len() + slots.iter().map(|s| s.count).sum::<usize>());
            for (s, choices) in slots.iter().zip(&per_slot) {
                let pick = &choices[code % choices.len()];
                code /= choices.len();
                y.extend(pick.iter().map(|&i| s.candidates[i]));
            }
            if !constrained {
                y.extend(&fixed);
                if let Some(v) = evaluate(&config.index, &y) {
                    acc.offer(v, index, &y);
                }
                return acc;
            }
            if rows.feasible(&y) {
                if let Some(v) = evaluate(&config.index, &y) {
                    acc.offer(v, index, &y);
                }
            }
            refine(&y, index, &ranges, &slots, &rows, &config.index, &mut acc);
            acc
        })
        .reduce(Extremes::default, Extremes::merge);

    let (Some((lower, _, mut argmin)), Some((upper, _, mut argmax))) = (extremes.lower, extremes.upper) else {
        return Err(Error::NoFeasibleAssignment);
    };
    argmin.sort_by(f64::total_cmp);
    argmax.sort_by(f64::total_cmp);
    Ok(BoundsResult {
        index: config.index,
        lower,
        upper,
        argmin,
        argmax,
        diagnostics: Diagnostics {
            method: "brute-force".into(),
            iterations: extremes.evaluated,
            exact: false,
            ..Default::default()
        },
    })
}

/// Sets each run of positions inside one group to a common value solving one
/// row with equality, then re-checks every row.
fn refine(
    y: &[f64],
    code: usize,
    ranges: &[std::ops::Range<usize>],
    slots: &[Slot],
    rows: &Rows,
    index: &IndexSpec,
    acc: &mut Extremes,
) {
    for (range, slot) in ranges.iter().zip(slots) {
        let (lo, hi) = (slot.candidates[0], *slot.candidates.last().expect("non-empty candidates"));
        for a in range.clone() {
            for b in a..range.end {
                for (row, _) in &rows.rows {
                    let coef: f64 = row.coefficients[a..=b].iter().sum();
                    if coef.abs() <= 1e-12 {
                        continue;
                    }
                    let rest: f64 = row
                        .coefficients
                        .iter()
                        .zip(y)
                        .enumerate()
                        .filter(|(i, _)| *i < a || *i > b)
                        .map(|(_, (c, v))| c * v)
                        .sum();
                    let v = (row.rhs - rest) / coef;
                    if !(lo - 1e-12..=hi + 1e-12).contains(&v) {
                        continue;
                    }
                    let mut cand = y.to_vec();
                    for c in cand[a..=b].iter_mut() {
                        *c = v.clamp(lo, hi);
                    }
                    cand[range.clone()].sort_by(f64::total_cmp);
                    if rows.feasible(&cand) {
                        if let Some(val) = evaluate(index, &cand) {
                            acc.offer(val, code, &cand);
                        }
                    }
                }
            }
        }
    }
}
