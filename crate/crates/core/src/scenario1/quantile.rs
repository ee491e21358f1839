//! Closed-form quantile-ratio bounds for a grouped table.

use crate::bounds::{BoundsResult, Diagnostics};
use crate::error::{Error, Result};
use crate::index::{quantile_position, safe_ratio};
use crate::types::{GroupedTable, IndexSpec};

/// Group holding 1-based sorted position `k`.
fn group_of(table: &GroupedTable, k: usize) -> usize {
    table.group_ranges().iter().position(|r| r.contains(&(k - 1))).expect("position inside the table")
}

fn check_boundary(table: &GroupedTable, tau: f64) -> Result<()> {
    let n = table.n() as f64;
    let mut cum = 0u64;
    for &c in &table.counts()[..table.num_groups() - 1] {
        cum += c;
        if (cum as f64 / n - tau).abs() <= 1e-9 {
            return Err(Error::QuantileOnBoundary { tau });
        }
    }
    Ok(())
}

/// Bounds on `y_{floor(tau2 n)} / y_{floor(tau1 n)}`.
///
/// With the two positions in groups `d1 < d2` the bounds are
/// `[lower_{d2} / upper_{d1}, upper_{d2} / lower_{d1}]`; within one group the
/// ratio can fall to 1. Zero denominators follow [`safe_ratio`].
pub fn quantile_ratio_bounds_1a(table: &GroupedTable, tau1: f64, tau2: f64) -> Result<BoundsResult> {
    let index = IndexSpec::QuantileRatio { tau1, tau2 };
    index.validate()?;
    let n = table.n();
    let (k1, k2) = (quantile_position(tau1, n), quantile_position(tau2, n));
    for k in [k1, k2] {
        if k < 1 || k > n {
            return Err(Error::IndexOutOfRange { position: k, n });
        }
    }
    check_boundary(table, tau1)?;
    check_boundary(table, tau2)?;
    let (d1, d2) = (group_of(table, k1), group_of(table, k2));
    let b = table.brackets();
    let upper = safe_ratio(b[d2].1, b[d1].0);
    let lower = if d1 == d2 { 1.0 } else { safe_ratio(b[d2].0, b[d1].1) };

    let ranges = table.group_ranges();
    let (lo, hi) = table.expanded_bounds();
    // Maximiser: everything low except positions from k2 onwards in d2.
    let mut argmax = lo.clone();
    for i in (k2 - 1)..ranges[d2].end {
        argmax[i] = hi[i];
    }
    // Minimiser: d1 from k1 onwards at its top, d2 up to k2 at its bottom,
    // or the whole shared group at one value.
    let mut argmin = lo;
    if d1 != d2 {
        for i in ranges[d1].clone() {
            argmin[i] = hi[i];
        }
    }

    Ok(BoundsResult {
        index,
        lower,
        upper,
        argmin,
        argmax,
        diagnostics: Diagnostics { method: "quantile-closed-form".into(), exact: true, ..Default::default() },
    })
}
