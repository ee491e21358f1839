//! Domain data model: interval observations, grouped tables, sorted samples,
//! index specifications and linear side constraints.

use std::ops::Range;

use crate::error::{Error, Result};

/// One unit's admissible range `[lower, upper]`. A point datum has `lower == upper`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalObservation {
    lower: f64,
    upper: f64,
}

impl IntervalObservation {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        if !lower.is_finite() || !upper.is_finite() {
            return Err(Error::InvalidInput(format!(
                "interval endpoints must be finite, got [{lower}, {upper}]"
            )));
        }
        if lower > upper {
            return Err(Error::InvalidInput(format!(
                "interval lower {lower} exceeds upper {upper}"
            )));
        }
        Ok(Self { lower, upper })
    }

    pub fn point(value: f64) -> Result<Self> {
        Self::new(value, value)
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn is_point(&self) -> bool {
        self.lower == self.upper
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }

    pub fn contains(&self, value: f64) -> bool {
        self.lower <= value && value <= self.upper
    }
}

/// Ordered, non-overlapping brackets with a unit count per bracket.
///
/// Consecutive brackets may touch (`upper_d == lower_{d+1}`) but never
/// overlap. File ingestion applies the stricter `upper_d < lower_{d+1}` rule.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupedTable {
    brackets: Vec<(f64, f64)>,
    counts: Vec<u64>,
}

impl GroupedTable {
    pub fn new(brackets: Vec<(f64, f64)>, counts: Vec<u64>) -> Result<Self> {
        if brackets.len() != counts.len() {
            return Err(Error::InvalidInput(format!(
                "{} brackets but {} counts",
                brackets.len(),
                counts.len()
            )));
        }
        if brackets.len() < 2 {
            return Err(Error::InvalidInput("a grouped table needs at least two brackets".into()));
        }
        for (d, &(lo, hi)) in brackets.iter().enumerate() {
            if !lo.is_finite() || !hi.is_finite() || lo > hi {
                return Err(Error::InvalidInput(format!("bracket {} is [{lo}, {hi}]", d + 1)));
            }
            if d > 0 && brackets[d - 1].1 > lo {
                return Err(Error::InvalidInput(format!(
                    "brackets {} and {} overlap",
                    d,
                    d + 1
                )));
            }
        }
        if counts.iter().sum::<u64>() == 0 {
            return Err(Error::InvalidInput("total count must be positive".into()));
        }
        Ok(Self { brackets, counts })
    }

    pub fn brackets(&self) -> &[(f64, f64)] {
        &self.brackets
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn num_groups(&self) -> usize {
        self.brackets.len()
    }

    pub fn n(&self) -> usize {
        self.counts.iter().sum::<u64>() as usize
    }

    pub fn shares(&self) -> Vec<f64> {
        let n = self.n() as f64;
        self.counts.iter().map(|&c| c as f64 / n).collect()
    }

    /// Sorted positions occupied by each group.
    pub fn group_ranges(&self) -> Vec<Range<usize>> {
        let mut start = 0;
        self.counts
            .iter()
            .map(|&c| {
                let r = start..start + c as usize;
                start = r.end;
                r
            })
            .collect()
    }

    /// Per-position lower and upper bounds of the sorted latent vector.
    pub fn expanded_bounds(&self) -> (Vec<f64>, Vec<f64>) {
        let mut lower = Vec::with_capacity(self.n());
        let mut upper = Vec::with_capacity(self.n());
        for (&(lo, hi), &c) in self.brackets.iter().zip(&self.counts) {
            lower.extend(std::iter::repeat(lo).take(c as usize));
            upper.extend(std::iter::repeat(hi).take(c as usize));
        }
        (lower, upper)
    }

    /// The same table with every count multiplied by `k`.
    pub fn replicated(&self, k: u64) -> Self {
        Self {
            brackets: self.brackets.clone(),
            counts: self.counts.iter().map(|&c| c * k).collect(),
        }
    }

    /// Splits the bracket containing `at` into `[lower, at]` and `(at, upper]`,
    /// reallocating its count as `(below, above)`.
    pub fn split_at(&self, at: f64, below: u64, above: u64) -> Result<Self> {
        let d = self
            .brackets
            .iter()
            .position(|&(lo, hi)| lo <= at && at < hi)
            .ok_or_else(|| Error::InvalidInput(format!("{at} is not strictly inside any bracket")))?;
        if below + above != self.counts[d] {
            return Err(Error::InvalidInput(format!(
                "sub-counts {below} + {above} do not sum to bracket count {}",
                self.counts[d]
            )));
        }
        let (lo, hi) = self.brackets[d];
        let mut brackets = self.brackets.clone();
        let mut counts = self.counts.clone();
        brackets.splice(d..=d, [(lo, at), (at.next_up(), hi)]);
        counts.splice(d..=d, [below, above]);
        Self::new(brackets, counts)
    }
}

/// Non-decreasing sequence of amounts.
#[derive(Debug, Clone, PartialEq)]
pub struct SortedSample {
    values: Vec<f64>,
}

impl SortedSample {
    /// Sorts `values`; fails on an empty or non-finite input.
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidInput("empty sample".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("sample contains a non-finite value".into()));
        }
        values.sort_by(f64::total_cmp);
        Ok(Self { values })
    }

    /// Wraps an already sorted vector, checking the order.
    pub fn from_sorted(values: Vec<f64>) -> Result<Self> {
        if values.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidInput("values are not sorted".into()));
        }
        Self::new(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }
}

/// Which inequality index to evaluate or bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IndexSpec {
    Gini,
    QuantileRatio { tau1: f64, tau2: f64 },
    Hoover,
}

impl IndexSpec {
    pub fn validate(&self) -> Result<()> {
        if let IndexSpec::QuantileRatio { tau1, tau2 } = *self {
            if !(0.0 < tau1 && tau1 < tau2 && tau2 < 1.0) {
                return Err(Error::InvalidInput(format!(
                    "quantile levels need 0 < tau1 < tau2 < 1, got {tau1}, {tau2}"
                )));
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &'static str {
        match self {
            IndexSpec::Gini => "gini",
            IndexSpec::QuantileRatio { .. } => "qratio",
            IndexSpec::Hoover => "hoover",
        }
    }
}

/// One linear restriction on the sorted latent vector, before it is laid out
/// against a concrete table. Group indices are zero-based.
#[derive(Debug, Clone, PartialEq)]
pub enum ConstraintRow {
    /// Overall mean relation `value`.
    TotalMean(f64),
    /// Mean over the positions of `group` relation `value`.
    GroupMean { group: usize, value: f64 },
    /// Lorenz ordinate `share` at the end of group `h` (zero-based, inclusive):
    /// `sum_{j<=h} s_j ybar_j - share * ybar = 0`.
    LorenzPoint { h: usize, share: f64 },
    /// Explicit coefficients per sorted position.
    RawRow { coefficients: Vec<f64>, rhs: f64 },
    /// The row multiplied by -1 (turns a `>=` restriction into `<=` form).
    Negated(Box<ConstraintRow>),
}

impl ConstraintRow {
    pub fn negated(self) -> Self {
        match self {
            ConstraintRow::Negated(inner) => *inner,
            other => ConstraintRow::Negated(Box::new(other)),
        }
    }

    /// The estimated right-hand-side value carried by the row, if any.
    pub fn value(&self) -> f64 {
        match self {
            ConstraintRow::TotalMean(v) => *v,
            ConstraintRow::GroupMean { value, .. } => *value,
            ConstraintRow::LorenzPoint { share, .. } => *share,
            ConstraintRow::RawRow { rhs, .. } => *rhs,
            ConstraintRow::Negated(inner) => inner.value(),
        }
    }

    /// Same row with its estimated value replaced.
    pub fn with_value(&self, v: f64) -> Self {
        match self {
            ConstraintRow::TotalMean(_) => ConstraintRow::TotalMean(v),
            ConstraintRow::GroupMean { group, .. } => ConstraintRow::GroupMean { group: *group, value: v },
            ConstraintRow::LorenzPoint { h, .. } => ConstraintRow::LorenzPoint { h: *h, share: v },
            ConstraintRow::RawRow { coefficients, .. } => ConstraintRow::RawRow {
                coefficients: coefficients.clone(),
                rhs: v,
            },
            ConstraintRow::Negated(inner) => ConstraintRow::Negated(Box::new(inner.with_value(v))),
        }
    }

    fn same_shape(&self, other: &Self) -> bool {
        match (self, other) {
            (ConstraintRow::TotalMean(_), ConstraintRow::TotalMean(_)) => true,
            (ConstraintRow::GroupMean { group: a, .. }, ConstraintRow::GroupMean { group: b, .. }) => a == b,
            (ConstraintRow::LorenzPoint { h: a, .. }, ConstraintRow::LorenzPoint { h: b, .. }) => a == b,
            (
                ConstraintRow::RawRow { coefficients: a, .. },
                ConstraintRow::RawRow { coefficients: b, .. },
            ) => a.len() == b.len(),
            (ConstraintRow::Negated(a), ConstraintRow::Negated(b)) => a.same_shape(b),
            _ => false,
        }
    }
}

/// Equality rows and `<=` inequality rows.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConstraintSet {
    pub equality_rows: Vec<ConstraintRow>,
    pub inequality_rows: Vec<ConstraintRow>,
}

impl ConstraintSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_equality(mut self, row: ConstraintRow) -> Self {
        self.equality_rows.push(row);
        self
    }

    pub fn with_inequality(mut self, row: ConstraintRow) -> Self {
        self.inequality_rows.push(row);
        self
    }

    pub fn is_empty(&self) -> bool {
        self.equality_rows.is_empty() && self.inequality_rows.is_empty()
    }

    pub fn num_equalities(&self) -> usize {
        self.equality_rows.len()
    }

    pub fn num_inequalities(&self) -> usize {
        self.inequality_rows.len()
    }

    /// Moves every estimated value from `self` toward `draw` by `factor`:
    /// `v + factor * (v_draw - v)`. Both sets must share the same row layout.
    pub fn shifted_toward(&self, draw: &ConstraintSet, factor: f64) -> Result<Self> {
        fn shift(a: &[ConstraintRow], b: &[ConstraintRow], factor: f64) -> Result<Vec<ConstraintRow>> {
            if a.len() != b.len() {
                return Err(Error::InvalidInput("resampled constraints changed row count".into()));
            }
            a.iter()
                .zip(b)
                .map(|(x, y)| {
                    if !x.same_shape(y) {
                        return Err(Error::InvalidInput("resampled constraints changed row layout".into()));
                    }
                    Ok(x.with_value(x.value() + factor * (y.value() - x.value())))
                })
                .collect()
        }
        Ok(Self {
            equality_rows: shift(&self.equality_rows, &draw.equality_rows, factor)?,
            inequality_rows: shift(&self.inequality_rows, &draw.inequality_rows, factor)?,
        })
    }
}
