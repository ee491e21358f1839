//! Numerical delta-method bootstrap for bound endpoints.
//!
//! Each replicate redraws the data, forms the perturbed input
//! `theta + t_n sqrt(n) (theta* - theta)` with `t_n = n^(-alpha)`, recomputes
//! the bounds, and records `S* = (V(perturbed) - V(theta)) / t_n`. Standard
//! errors are `sd(S*) / sqrt(n)`.

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use statrs::distribution::{ContinuousCDF, Normal};
use statrs::statistics::{Data, OrderStatistics, Statistics};

use crate::error::{Error, Result};
use crate::scenario1::{bounds_1b, gini_bounds_1a, gini_bounds_from_shares, quantile_ratio_bounds_1a, Relaxation};
use crate::scenario2::{gini_bounds_2_data, Scenario2Data, DEFAULT_ENUMERATION_BUDGET};
use crate::types::{ConstraintSet, GroupedTable, IndexSpec, IntervalObservation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CiMethod {
    #[default]
    Normal,
    Percentile,
}

/// Perturbation of estimated constraint values before a solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Jitter {
    #[default]
    Off,
    /// Only when a solve fails numerically, then re-solved once.
    Auto,
    Always,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BootstrapConfig {
    pub replicates: usize,
    pub seed: u64,
    pub alpha: f64,
    pub level: f64,
    pub ci_method: CiMethod,
    pub jitter: Jitter,
}

impl Default for BootstrapConfig {
    fn default() -> Self {
        Self { replicates: 1000, seed: 0, alpha: 0.25, level: 0.95, ci_method: CiMethod::Normal, jitter: Jitter::Off }
    }
}

impl BootstrapConfig {
    pub fn validate(&self) -> Result<()> {
        if self.replicates < 2 {
            return Err(Error::InvalidInput("at least two replicates are needed".into()));
        }
        if !(self.alpha > 0.0 && self.alpha < 0.5) {
            return Err(Error::InvalidInput("alpha must lie in (0, 0.5)".into()));
        }
        if !(self.level > 0.0 && self.level < 1.0) {
            return Err(Error::InvalidInput("level must lie in (0, 1)".into()));
        }
        Ok(())
    }

    pub fn t_n(&self, n: usize) -> f64 {
        (n as f64).powf(-self.alpha)
    }
}

/// Redraws estimated constraint values for one replicate.
pub type ConstraintResampler = dyn Fn(&mut ChaCha8Rng, &ConstraintSet) -> ConstraintSet + Sync;

/// Data and bounds routine to bootstrap.
#[derive(Clone, Copy)]
pub enum BootstrapProblem<'a> {
    /// Gini bounds of a grouped table as a function of its group shares.
    GiniShares { table: &'a GroupedTable },
    /// Any table routine on integer counts. Perturbed shares are rounded to
    /// counts at the original `n` by largest remainders.
    Table {
        table: &'a GroupedTable,
        constraints: &'a ConstraintSet,
        index: IndexSpec,
        relaxation: Relaxation,
        resampler: Option<&'a ConstraintResampler>,
    },
    /// Threshold Gini bounds of micro data; the perturbation reweights units.
    Micro { data: &'a [IntervalObservation] },
}

impl BootstrapProblem<'_> {
    fn n(&self) -> usize {
        match self {
            BootstrapProblem::GiniShares { table } | BootstrapProblem::Table { table, .. } => table.n(),
            BootstrapProblem::Micro { data } => data.len(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BootstrapResult {
    pub lower: f64,
    pub upper: f64,
    pub se_lower: f64,
    pub se_upper: f64,
    pub se_width: f64,
    /// Intervals from the configured method.
    pub ci_lower: (f64, f64),
    pub ci_upper: (f64, f64),
    pub normal_ci_lower: (f64, f64),
    pub normal_ci_upper: (f64, f64),
    pub percentile_ci_lower: (f64, f64),
    pub percentile_ci_upper: (f64, f64),
    /// Scaled replicate deviations `S*` in replicate order.
    pub draws_lower: Vec<f64>,
    pub draws_upper: Vec<f64>,
    pub n: usize,
    pub t_n: f64,
    pub level: f64,
    /// Redraws caused by infeasible or failed perturbed inputs.
    pub failures: usize,
    pub attempts: usize,
    pub jittered: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WidthStatistics {
    pub width: f64,
    pub se_width: f64,
    pub ci_width: (f64, f64),
}

fn multinomial(rng: &mut ChaCha8Rng, n: usize, weights: &[f64]) -> Vec<f64> {
    let mut counts = vec![0.0; weights.len()];
    if let Ok(dist) = WeightedIndex::new(weights) {
        for _ in 0..n {
            counts[dist.sample(rng)] += 1.0;
        }
    }
    counts
}

/// Integer counts summing to `n` closest to `n * shares`.
fn largest_remainder(shares: &[f64], n: u64) -> Vec<u64> {
    let scaled: Vec<f64> = shares.iter().map(|s| s * n as f64).collect();
    let mut counts: Vec<u64> = scaled.iter().map(|v| v.floor().max(0.0) as u64).collect();
    let mut order: Vec<usize> = (0..shares.len()).collect();
    order.sort_by(|&a, &b| (scaled[b] - scaled[b].floor()).total_cmp(&(scaled[a] - scaled[a].floor())).then(a.cmp(&b)));
    let mut missing = n.saturating_sub(counts.iter().sum());
    for &i in order.iter().cycle() {
        if missing == 0 {
            break;
        }
        counts[i] += 1;
        missing -= 1;
    }
    counts
}

fn table_bounds(
    table: &GroupedTable,
    constraints: &ConstraintSet,
    index: IndexSpec,
    relaxation: Relaxation,
) -> Result<(f64, f64)> {
    let r = match index {
        IndexSpec::Gini if constraints.is_empty() => gini_bounds_1a(table, relaxation)?,
        IndexSpec::QuantileRatio { tau1, tau2 } if constraints.is_empty() => {
            quantile_ratio_bounds_1a(table, tau1, tau2)?
        }
        _ => bounds_1b(index, table, constraints)?,
    };
    Ok((r.lower, r.upper))
}

fn jittered(constraints: &ConstraintSet, rng: &mut ChaCha8Rng, n: usize) -> ConstraintSet {
    let amp = (n as f64).powf(-0.75);
    let mut out = constraints.clone();
    for row in out.equality_rows.iter_mut().chain(out.inequality_rows.iter_mut()) {
        *row = row.with_value(row.value() + amp * rng.gen_range(-1.0..1.0));
    }
    out
}

fn is_numerical(e: &Error) -> bool {
    matches!(e, Error::NumericalFailure(_) | Error::Stalled { .. } | Error::SubproblemNotConverged(_))
}

/// Outcome of one perturbed solve: bounds and whether jitter was applied.
struct Draw {
    bounds: Result<(f64, f64)>,
    jittered: bool,
}

fn point_bounds(problem: &BootstrapProblem<'_>) -> Result<(f64, f64)> {
    match *problem {
        BootstrapProblem::GiniShares { table } => gini_bounds_from_shares(table.brackets(), &table.shares()),
        BootstrapProblem::Table { table, constraints, index, relaxation, .. } => {
            table_bounds(table, constraints, index, relaxation)
        }
        BootstrapProblem::Micro { data } => {
            let r = gini_bounds_2_data(&Scenario2Data::from_observations(data)?, DEFAULT_ENUMERATION_BUDGET)?;
            Ok((r.lower, r.upper))
        }
    }
}

fn shifted_shares(s: &[f64], star: &[f64], n: usize, step: f64) -> Result<Vec<f64>> {
    let shares: Vec<f64> = s.iter().zip(star).map(|(a, b)| a + step * (b / n as f64 - a)).collect();
    if shares.iter().any(|v| *v < 0.0) {
        return Err(Error::InfeasibleConstraints("perturbed shares left the simplex".into()));
    }
    Ok(shares)
}

/// One perturbed solve; `step = t_n sqrt(n)` scales the bootstrap increment.
fn perturbed(problem: &BootstrapProblem<'_>, rng: &mut ChaCha8Rng, step: f64, jitter: Jitter) -> Result<Draw> {
    let n = problem.n();
    match *problem {
        BootstrapProblem::GiniShares { table } => {
            let s = table.shares();
            let star = multinomial(rng, n, &s);
            let bounds = shifted_shares(&s, &star, n, step).and_then(|v| gini_bounds_from_shares(table.brackets(), &v));
            Ok(Draw { bounds, jittered: false })
        }
        BootstrapProblem::Table { table, constraints, index, relaxation, resampler } => {
            let s = table.shares();
            let star = multinomial(rng, n, &s);
            let shares = match shifted_shares(&s, &star, n, step) {
                Ok(v) => v,
                Err(e) => return Ok(Draw { bounds: Err(e), jittered: false }),
            };
            let counts = largest_remainder(&shares, n as u64);
            let tbl = GroupedTable::new(table.brackets().to_vec(), counts)?;
            let mut cons = match resampler {
                Some(f) => constraints.shifted_toward(&f(rng, constraints), step)?,
                None => constraints.clone(),
            };
            let estimated = !cons.is_empty();
            if estimated && jitter == Jitter::Always {
                cons = jittered(&cons, rng, n);
                log::info!("jittering constraint values before the solve");
                return Ok(Draw { bounds: table_bounds(&tbl, &cons, index, relaxation), jittered: true });
            }
            let first = table_bounds(&tbl, &cons, index, relaxation);
            match first {
                Err(ref e) if estimated && jitter == Jitter::Auto && is_numerical(e) => {
                    log::info!("re-solving with jittered constraint values after {e}");
                    let cons = jittered(&cons, rng, n);
                    Ok(Draw { bounds: table_bounds(&tbl, &cons, index, relaxation), jittered: true })
                }
                other => Ok(Draw { bounds: other, jittered: false }),
            }
        }
        BootstrapProblem::Micro { data } => {
            let ones = vec![1.0; n];
            let star = multinomial(rng, n, &ones);
            // signed weights are allowed; only the totals must stay positive
            let weights: Vec<f64> = star.iter().map(|m| 1.0 + step * (m - 1.0)).collect();
            let d = Scenario2Data::from_weighted(data, &weights)?;
            let bounds = gini_bounds_2_data(&d, DEFAULT_ENUMERATION_BUDGET).map(|r| (r.lower, r.upper));
            Ok(Draw { bounds, jittered: false })
        }
    }
}

fn redrawable(e: &Error) -> bool {
    matches!(
        e,
        Error::InfeasibleConstraints(_)
            | Error::NoFeasibleAssignment
            | Error::DegenerateDenominator { .. }
            | Error::NonPositiveMean
            | Error::QuantileOnBoundary { .. }
    ) || is_numerical(e)
}

fn sd(v: &[f64]) -> f64 {
    if v.iter().all(|x| *x == v[0]) {
        return 0.0;
    }
    v.iter().std_dev()
}

fn percentile_pair(v: &[f64], level: f64) -> (f64, f64) {
    let mut d = Data::new(v.to_vec());
    let g = (1.0 - level) / 2.0;
    (d.quantile(g), d.quantile(1.0 - g))
}

pub fn bootstrap_bounds(problem: BootstrapProblem<'_>, config: &BootstrapConfig) -> Result<BootstrapResult> {
    config.validate()?;
    let n = problem.n();
    let (lower, upper) = point_bounds(&problem)?;
    let t = config.t_n(n);
    let max_attempts = 10 * config.replicates;

    let outcomes: Vec<Result<(f64, f64, usize, bool)>> = (0..config.replicates)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(r as u64);
            let mut tries = 0;
            loop {
                tries += 1;
                let draw = perturbed(&problem, &mut rng, t * (n as f64).sqrt(), config.jitter)?;
                match draw.bounds {
                    Ok((lo, hi)) => return Ok(((lo - lower) / t, (hi - upper) / t, tries, draw.jittered)),
                    Err(e) if redrawable(&e) && tries < max_attempts => continue,
                    Err(e) if redrawable(&e) => return Err(Error::ResampleInfeasible { failures: tries, attempts: tries }),
                    Err(e) => return Err(e),
                }
            }
        })
        .collect();

    let mut draws_lower = Vec::with_capacity(config.replicates);
    let mut draws_upper = Vec::with_capacity(config.replicates);
    let (mut attempts, mut jittered_count) = (0, 0);
    for o in outcomes {
        let (a, b, tries, j) = o?;
        draws_lower.push(a);
        draws_upper.push(b);
        attempts += tries;
        jittered_count += usize::from(j);
    }
    let failures = attempts - config.replicates;
    if attempts > max_attempts {
        return Err(Error::ResampleInfeasible { failures, attempts });
    }
    if failures > 0 {
        log::warn!("{failures} of {attempts} bootstrap draws were infeasible and redrawn");
    }

    let root_n = (n as f64).sqrt();
    let widths: Vec<f64> = draws_upper.iter().zip(&draws_lower).map(|(u, l)| u - l).collect();
    let (se_lower, se_upper, se_width) = (sd(&draws_lower) / root_n, sd(&draws_upper) / root_n, sd(&widths) / root_n);
    let z = Normal::standard().inverse_cdf(1.0 - (1.0 - config.level) / 2.0);
    let normal_ci_lower = (lower - z * se_lower, lower + z * se_lower);
    let normal_ci_upper = (upper - z * se_upper, upper + z * se_upper);
    let pl = percentile_pair(&draws_lower, config.level);
    let pu = percentile_pair(&draws_upper, config.level);
    let percentile_ci_lower = (lower + pl.0 / root_n, lower + pl.1 / root_n);
    let percentile_ci_upper = (upper + pu.0 / root_n, upper + pu.1 / root_n);
    let (ci_lower, ci_upper) = match config.ci_method {
        CiMethod::Normal => (normal_ci_lower, normal_ci_upper),
        CiMethod::Percentile => (percentile_ci_lower, percentile_ci_upper),
    };
    Ok(BootstrapResult {
        lower,
        upper,
        se_lower,
        se_upper,
        se_width,
        ci_lower,
        ci_upper,
        normal_ci_lower,
        normal_ci_upper,
        percentile_ci_lower,
        percentile_ci_upper,
        draws_lower,
        draws_upper,
        n,
        t_n: t,
        level: config.level,
        failures,
        attempts,
        jittered: jittered_count,
    })
}

/// Width of the bounds with its standard error and percentile interval.
pub fn width_statistics(result: &BootstrapResult) -> WidthStatistics {
    let width = result.upper - result.lower;
    let root_n = (result.n as f64).sqrt();
    let d: Vec<f64> = result.draws_upper.iter().zip(&result.draws_lower).map(|(u, l)| u - l).collect();
    let (a, b) = percentile_pair(&d, result.level);
    WidthStatistics { width, se_width: sd(&d) / root_n, ci_width: (width + a / root_n, width + b / root_n) }
}
