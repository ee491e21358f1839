//! Bounds over the full sorted-vector polyhedron of a grouped table with
//! linear side information, solved through the Charnes–Cooper LP.

use rayon::prelude::*;

use crate::bounds::{count_distinct, BoundsResult, Diagnostics};
use crate::error::{Error, Result};
use crate::index::{gini_coefficients, quantile_position};
use crate::lfp::{
    min_denominator, solve_fractional, solve_lp, solve_transformed, Direction, FractionalSolution,
    LinearFractionalProblem, RowKind, Sense, T_ACCEPT,
};
use crate::types::{ConstraintRow, ConstraintSet, GroupedTable, IndexSpec};

/// A constraint laid out against the sorted positions of a table.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearRow {
    pub coefficients: Vec<f64>,
    pub rhs: f64,
}

pub fn linearize(row: &ConstraintRow, table: &GroupedTable) -> Result<LinearRow> {
    let n = table.n();
    let ranges = table.group_ranges();
    let nf = n as f64;
    Ok(match row {
        ConstraintRow::TotalMean(v) => LinearRow { coefficients: vec![1.0 / nf; n], rhs: *v },
        ConstraintRow::GroupMean { group, value } => {
            let r = ranges
                .get(*group)
                .ok_or_else(|| Error::InvalidInput(format!("group {} does not exist", group + 1)))?;
            if r.is_empty() {
                return Err(Error::InvalidInput(format!("group {} is empty", group + 1)));
            }
            let mut c = vec![0.0; n];
            let w = 1.0 / r.len() as f64;
            c[r.clone()].iter_mut().for_each(|x| *x = w);
            LinearRow { coefficients: c, rhs: *value }
        }
        ConstraintRow::LorenzPoint { h, share } => {
            let r = ranges
                .get(*h)
                .ok_or_else(|| Error::InvalidInput(format!("group {} does not exist", h + 1)))?;
            let c = (0..n).map(|i| if i < r.end { (1.0 - share) / nf } else { -share / nf }).collect();
            LinearRow { coefficients: c, rhs: 0.0 }
        }
        ConstraintRow::RawRow { coefficients, rhs } => {
            if coefficients.len() != n {
                return Err(Error::InvalidInput(format!(
                    "raw row has {} coefficients for {n} positions",
                    coefficients.len()
                )));
            }
            LinearRow { coefficients: coefficients.clone(), rhs: *rhs }
        }
        ConstraintRow::Negated(inner) => {
            let r = linearize(inner, table)?;
            LinearRow { coefficients: r.coefficients.iter().map(|c| -c).collect(), rhs: -r.rhs }
        }
    })
}

/// Ordering, box and constraint rows with values divided by `scale`.
fn polyhedron(table: &GroupedTable, constraints: &ConstraintSet, scale: f64) -> Result<LinearFractionalProblem> {
    let n = table.n();
    let (lo, hi) = table.expanded_bounds();
    let mut p = LinearFractionalProblem::new(
        vec![0.0; n],
        vec![1.0 / n as f64; n],
        lo.iter().map(|v| v / scale).collect(),
        hi.iter().map(|v| v / scale).collect(),
    );
    for r in table.group_ranges() {
        for i in r.start + 1..r.end {
            let mut c = vec![0.0; n];
            c[i - 1] = 1.0;
            c[i] = -1.0;
            p.add_row(c, RowKind::Le, 0.0);
        }
    }
    for (rows, kind) in [(&constraints.equality_rows, RowKind::Eq), (&constraints.inequality_rows, RowKind::Le)] {
        for row in rows {
            let l = linearize(row, table)?;
            p.add_row(l.coefficients, kind, l.rhs / scale);
        }
    }
    Ok(p)
}

fn scale_of(table: &GroupedTable) -> Result<f64> {
    if table.brackets()[0].0 < 0.0 {
        return Err(Error::InvalidInput("bracket endpoints must be non-negative".into()));
    }
    let top = table.expanded_bounds().1.last().copied().unwrap_or(0.0);
    if top <= 0.0 {
        return Err(Error::NonPositiveMean);
    }
    Ok(top)
}

fn rescale(y: &[f64], scale: f64) -> Vec<f64> {
    y.iter().map(|v| v * scale).collect()
}

/// Bounds for `index` over every sorted completion of `table` that satisfies
/// `constraints`.
pub fn bounds_1b(index: IndexSpec, table: &GroupedTable, constraints: &ConstraintSet) -> Result<BoundsResult> {
    index.validate()?;
    match index {
        IndexSpec::Gini => gini_1b(table, constraints),
        IndexSpec::QuantileRatio { tau1, tau2 } => qratio_1b(table, constraints, tau1, tau2),
        IndexSpec::Hoover => hoover_bounds(table, constraints),
    }
}

fn gini_1b(table: &GroupedTable, constraints: &ConstraintSet) -> Result<BoundsResult> {
    let scale = scale_of(table)?;
    let n = table.n();
    let mut p = polyhedron(table, constraints, scale)?;
    p.numerator = gini_coefficients(&vec![1.0; n]).0;
    let mn = solve_fractional(&p, Direction::Minimize)?;
    let mx = solve_fractional(&p, Direction::Maximize)?;
    let argmin = rescale(&mn.y, scale);
    let argmax = rescale(&mx.y, scale);
    let limit = constraints.num_equalities() + constraints.num_inequalities() + 2 * table.num_groups();
    let distinct = (count_distinct(&argmin), count_distinct(&argmax));
    let mut warnings = Vec::new();
    if distinct.0 > limit || distinct.1 > limit {
        warnings.push(format!(
            "extremal completions carry {} and {} distinct values, above the vertex count {limit}",
            distinct.0, distinct.1
        ));
    }
    Ok(BoundsResult {
        index: IndexSpec::Gini,
        lower: mn.value,
        upper: mx.value,
        argmin,
        argmax,
        diagnostics: Diagnostics {
            method: "charnes-cooper".into(),
            iterations: mn.iterations + mx.iterations,
            exact: true,
            distinct_values: Some(distinct),
            distinct_value_limit: Some(limit),
            warnings,
            ..Default::default()
        },
    })
}

fn qratio_1b(table: &GroupedTable, constraints: &ConstraintSet, tau1: f64, tau2: f64) -> Result<BoundsResult> {
    let n = table.n();
    let (k1, k2) = (quantile_position(tau1, n), quantile_position(tau2, n));
    for k in [k1, k2] {
        if k < 1 || k > n {
            return Err(Error::IndexOutOfRange { position: k, n });
        }
    }
    let scale = scale_of(table)?;
    let mut p = polyhedron(table, constraints, scale)?;
    p.numerator = vec![0.0; n];
    p.numerator[k2 - 1] = 1.0;
    p.denominator = vec![0.0; n];
    p.denominator[k1 - 1] = 1.0;
    let floor = min_denominator(&p)?;
    let mut iterations = 0;
    let mut warnings = Vec::new();

    let (upper, argmax) = if floor <= 0.0 {
        // y_{k1} can vanish: witness maximises y_{k2} with y_{k1} = 0.
        let mut lp = p.linear_program(Sense::Maximize, p.numerator.clone());
        lp.add_row(p.denominator.clone(), RowKind::Eq, 0.0);
        let s = solve_lp(&lp)?.optimal().ok_or_else(|| Error::NumericalFailure("zero-denominator witness".into()))?;
        iterations += s.iterations;
        (if s.value > 0.0 { f64::INFINITY } else { 1.0 }, rescale(&s.x, scale))
    } else {
        let s = solve_fractional(&p, Direction::Maximize)?;
        iterations += s.iterations;
        (s.value, rescale(&s.y, scale))
    };
    let mn: FractionalSolution = if floor > 0.0 {
        solve_fractional(&p, Direction::Minimize)?
    } else {
        let s = solve_transformed(&p, Direction::Minimize)?;
        if s.t <= T_ACCEPT {
            warnings.push("minimum approached as the lower quantile vanishes".into());
        }
        s
    };
    iterations += mn.iterations;
    Ok(BoundsResult {
        index: IndexSpec::QuantileRatio { tau1, tau2 },
        lower: mn.value,
        upper,
        argmin: rescale(&mn.y, scale),
        argmax,
        diagnostics: Diagnostics {
            method: "charnes-cooper".into(),
            iterations,
            exact: true,
            warnings,
            ..Default::default()
        },
    })
}

/// Hoover bounds as the extremes over the split position `k` (the number of
/// units at or below the mean) of the linear-fractional programs in which
/// the absolute deviations are resolved by that split.
pub fn hoover_bounds(table: &GroupedTable, constraints: &ConstraintSet) -> Result<BoundsResult> {
    let scale = scale_of(table)?;
    let base = polyhedron(table, constraints, scale)?;
    min_denominator(&base)?;
    let n = table.n();
    let nf = n as f64;
    let per_k: Vec<Result<Option<(FractionalSolution, FractionalSolution)>>> = (0..=n)
        .into_par_iter()
        .map(|k| {
            let mut p = base.clone();
            let mid = (2 * k) as f64 / nf - 1.0;
            p.numerator = (0..n).map(|j| if j < k { mid - 1.0 } else { mid + 1.0 } / (2.0 * nf)).collect();
            if k >= 1 {
                let mut c = vec![-1.0 / nf; n];
                c[k - 1] += 1.0;
                p.add_row(c, RowKind::Le, 0.0);
            }
            if k < n {
                let mut c = vec![1.0 / nf; n];
                c[k] -= 1.0;
                p.add_row(c, RowKind::Le, 0.0);
            }
            match solve_fractional(&p, Direction::Minimize) {
                Err(Error::InfeasibleConstraints(_)) => Ok(None),
                Err(e) => Err(e),
                Ok(mn) => Ok(Some((mn, solve_fractional(&p, Direction::Maximize)?))),
            }
        })
        .collect();
    let mut lo: Option<FractionalSolution> = None;
    let mut hi: Option<FractionalSolution> = None;
    let mut iterations = 0;
    for r in per_k {
        let Some((mn, mx)) = r? else { continue };
        iterations += mn.iterations + mx.iterations;
        if lo.as_ref().is_none_or(|l| mn.value < l.value) {
            lo = Some(mn);
        }
        if hi.as_ref().is_none_or(|h| mx.value > h.value) {
            hi = Some(mx);
        }
    }
    let (lo, hi) = match (lo, hi) {
        (Some(l), Some(h)) => (l, h),
        _ => return Err(Error::InfeasibleConstraints("no split position is feasible".into())),
    };
    Ok(BoundsResult {
        index: IndexSpec::Hoover,
        lower: lo.value,
        upper: hi.value,
        argmin: rescale(&lo.y, scale),
        argmax: rescale(&hi.y, scale),
        diagnostics: Diagnostics {
            method: "hoover-splits".into(),
            iterations,
            exact: true,
            ..Default::default()
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index::{gini, hoover};
    use crate::scenario1::{gini_bounds_1a, Relaxation};
    use crate::types::SortedSample;

    fn table(b: &[(f64, f64)], c: &[u64]) -> GroupedTable {
        GroupedTable::new(b.to_vec(), c.to_vec()).unwrap()
    }

    fn g(v: &[f64]) -> f64 {
        gini(&SortedSample::new(v.to_vec()).unwrap()).unwrap()
    }

    #[test]
    fn total_mean_example() {
        let t = table(&[(0.0, 1.0), (2.0, 3.0)], &[1, 1]);
        let c = ConstraintSet::new().with_equality(ConstraintRow::TotalMean(1.25));
        let r = bounds_1b(IndexSpec::Gini, &t, &c).unwrap();
        assert!((r.lower - 0.3).abs() < 1e-9 && (r.upper - 0.5).abs() < 1e-9, "{r:?}");
        // y2 = 2.5 - y1 with y1 in [0, 0.5] gives G = (2.5 - 2 y1) / 5
        assert!((r.argmin[0] - 0.5).abs() < 1e-9 && (r.argmax[0]).abs() < 1e-9);
    }

    #[test]
    fn unconstrained_matches_corner_path() {
        for (b, c) in [
            (vec![(0.0, 1.0), (2.0, 3.0)], vec![1, 1]),
            (vec![(1.0, 2.0), (4.0, 4.0)], vec![2, 1]),
            (vec![(0.0, 10.0), (10.0, 25.0), (40.0, 100.0)], vec![3, 2, 1]),
        ] {
            let t = table(&b, &c);
            let a = gini_bounds_1a(&t, Relaxation::Grid).unwrap();
            let r = bounds_1b(IndexSpec::Gini, &t, &ConstraintSet::new()).unwrap();
            assert!((a.lower - r.lower).abs() < 1e-9 && (a.upper - r.upper).abs() < 1e-9, "{a:?}\n{r:?}");
            assert!((g(&r.argmin) - r.lower).abs() < 1e-9 && (g(&r.argmax) - r.upper).abs() < 1e-9);
            assert!(r.diagnostics.warnings.is_empty());
        }
    }

    #[test]
    fn infeasible_mean() {
        let t = table(&[(0.0, 1.0), (2.0, 3.0)], &[1, 1]);
        let c = ConstraintSet::new().with_equality(ConstraintRow::TotalMean(10.0));
        assert!(matches!(bounds_1b(IndexSpec::Gini, &t, &c), Err(Error::InfeasibleConstraints(_))));
    }

    #[test]
    fn linearized_rows() {
        let t = table(&[(0.0, 1.0), (2.0, 3.0), (4.0, 5.0)], &[2, 1, 1]);
        let r = linearize(&ConstraintRow::GroupMean { group: 0, value: 0.5 }, &t).unwrap();
        assert_eq!(r.coefficients, vec![0.5, 0.5, 0.0, 0.0]);
        let r = linearize(&ConstraintRow::LorenzPoint { h: 0, share: 0.2 }, &t).unwrap();
        assert_eq!(r.coefficients, vec![0.2, 0.2, -0.05, -0.05]);
        assert_eq!(r.rhs, 0.0);
        let r = linearize(&ConstraintRow::TotalMean(2.0).negated(), &t).unwrap();
        assert_eq!((r.coefficients[0], r.rhs), (-0.25, -2.0));
        assert!(linearize(&ConstraintRow::GroupMean { group: 3, value: 0.5 }, &t).is_err());
        assert!(linearize(&ConstraintRow::RawRow { coefficients: vec![1.0], rhs: 0.0 }, &t).is_err());
    }

    #[test]
    fn hoover_examples() {
        let t = table(&[(0.0, 2.0), (2.0, 4.0)], &[1, 1]);
        let r = hoover_bounds(&t, &ConstraintSet::new()).unwrap();
        assert!(r.lower.abs() < 1e-9 && (r.upper - 0.5).abs() < 1e-9, "{r:?}");
        let c = ConstraintSet::new().with_equality(ConstraintRow::TotalMean(2.0));
        let r = hoover_bounds(&t, &c).unwrap();
        assert!(r.lower.abs() < 1e-9 && (r.upper - 0.5).abs() < 1e-9, "{r:?}");
        let t = table(&[(1.0, 1.0), (3.0, 3.0)], &[1, 1]);
        let r = hoover_bounds(&t, &ConstraintSet::new()).unwrap();
        assert!((r.lower - 0.25).abs() < 1e-9 && (r.upper - 0.25).abs() < 1e-9);
    }

    #[test]
    fn hoover_extremes_are_attained() {
        let t = table(&[(0.0, 3.0), (3.0, 5.0), (6.0, 20.0)], &[2, 2, 1]);
        let r = hoover_bounds(&t, &ConstraintSet::new()).unwrap();
        let h = |y: &[f64]| hoover(&SortedSample::new(y.to_vec()).unwrap()).unwrap();
        assert!((h(&r.argmin) - r.lower).abs() < 1e-9);
        assert!((h(&r.argmax) - r.upper).abs() < 1e-9);
    }

    #[test]
    fn quantile_ratio_matches_closed_form() {
        let t = table(&[(5.0, 10.0), (20.0, 30.0), (50.0, 60.0)], &[6, 3, 1]);
        let r = bounds_1b(IndexSpec::QuantileRatio { tau1: 0.5, tau2: 0.85 }, &t, &ConstraintSet::new()).unwrap();
        assert!((r.lower - 2.0).abs() < 1e-9 && (r.upper - 6.0).abs() < 1e-9, "{r:?}");
        let t = table(&[(0.0, 10.0), (20.0, 30.0), (50.0, 60.0)], &[6, 3, 1]);
        let r = bounds_1b(IndexSpec::QuantileRatio { tau1: 0.5, tau2: 0.85 }, &t, &ConstraintSet::new()).unwrap();
        assert_eq!(r.upper, f64::INFINITY);
        assert!((r.lower - 2.0).abs() < 1e-9);
    }
}
