//! Gini bounds for a grouped table without side information.
//!
//! Extremal completions put every unit at a bracket endpoint, so a completion
//! is described by the fraction `p_d` of group `d` placed at its lower
//! endpoint. The minimum is a step allocation (lower groups pushed up, upper
//! groups pushed down) and the maximum pushes groups below some `d0` down and
//! groups above it up, leaving a single mixed group `d0`.

use crate::bounds::{BoundsResult, Diagnostics};
use crate::error::{Error, Result};
use crate::lfp::{dinkelbach_bisect, DinkelbachOracle, Direction, DEFAULT_EPSILON};
use crate::types::{GroupedTable, IndexSpec};

/// Admissible lower-endpoint fractions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Relaxation {
    /// `p_d` restricted to multiples of `1 / n_d`: sharp finite-sample bounds.
    #[default]
    Grid,
    /// `p_d` anywhere in `[0, 1]`: the population-share relaxation.
    Continuous,
}

/// Fractions `p_d` of each group placed at its lower endpoint.
#[derive(Debug, Clone, PartialEq)]
pub struct CornerAllocation {
    pub p: Vec<f64>,
}

impl CornerAllocation {
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if p.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::InvalidInput("corner fractions must lie in [0, 1]".into()));
        }
        Ok(Self { p })
    }

    /// Sorted completion with `round(p_d n_d)` units of group `d` at the
    /// lower endpoint and the rest at the upper one.
    pub fn expand(&self, table: &GroupedTable) -> Vec<f64> {
        let mut y = Vec::with_capacity(table.n());
        for ((&(lo, hi), &c), &p) in table.brackets().iter().zip(table.counts()).zip(&self.p) {
            let k = (p * c as f64).round() as usize;
            y.extend(std::iter::repeat(lo).take(k));
            y.extend(std::iter::repeat(hi).take(c as usize - k));
        }
        y
    }
}

/// `G(p) = (x' A x / 2) / (b' x)` with `x = (p, 1 - p)`.
///
/// Atom `l < D` is the lower endpoint of group `l`, atom `l + D` its upper
/// endpoint; `A_uv = s_u s_v |a_u - a_v|` and `b_u = s_u a_u`.
#[derive(Debug, Clone, PartialEq)]
pub struct GiniQuadraticForm {
    pub a: Vec<Vec<f64>>,
    pub b: Vec<f64>,
}

pub fn build_gini_form(table: &GroupedTable) -> GiniQuadraticForm {
    gini_form_from_shares(table.brackets(), &table.shares())
}

/// Quadratic form for brackets carrying arbitrary shares.
pub fn gini_form_from_shares(brackets: &[(f64, f64)], shares: &[f64]) -> GiniQuadraticForm {
    let d = brackets.len();
    let atom = |u: usize| if u < d { brackets[u].0 } else { brackets[u - d].1 };
    let share = |u: usize| shares[u % d];
    let a = (0..2 * d)
        .map(|u| (0..2 * d).map(|v| share(u) * share(v) * (atom(u) - atom(v)).abs()).collect())
        .collect();
    let b = (0..2 * d).map(|u| share(u) * atom(u)).collect();
    GiniQuadraticForm { a, b }
}

impl GiniQuadraticForm {
    pub fn num_groups(&self) -> usize {
        self.b.len() / 2
    }

    fn x(&self, p: &[f64]) -> Vec<f64> {
        p.iter().copied().chain(p.iter().map(|v| 1.0 - v)).collect()
    }

    pub fn numerator(&self, p: &[f64]) -> f64 {
        let x = self.x(p);
        let mut acc = 0.0;
        for (u, row) in self.a.iter().enumerate() {
            if x[u] != 0.0 {
                acc += x[u] * row.iter().zip(&x).map(|(a, xv)| a * xv).sum::<f64>();
            }
        }
        acc / 2.0
    }

    pub fn denominator(&self, p: &[f64]) -> f64 {
        self.x(p).iter().zip(&self.b).map(|(x, b)| x * b).sum()
    }

    /// `None` when the completion has zero mean.
    pub fn value(&self, p: &[f64]) -> Option<f64> {
        let den = self.denominator(p);
        (den > 0.0).then(|| self.numerator(p) / den)
    }

    /// Numerator and denominator along `p_{d0} = t` with the other fractions
    /// fixed, as `(alpha, beta, gamma)` with `N(t) = alpha + beta t + gamma t^2`
    /// and `(delta, eta)` with `D(t) = delta + eta t`.
    fn restrict(&self, base: &[f64], d0: usize) -> ([f64; 3], [f64; 2]) {
        let mut p = base.to_vec();
        let mut eval = |t: f64| {
            p[d0] = t;
            (self.numerator(&p), self.denominator(&p))
        };
        let (n0, d0v) = eval(0.0);
        let (nh, _) = eval(0.5);
        let (n1, d1v) = eval(1.0);
        let gamma = 2.0 * (n1 - 2.0 * nh + n0);
        ([n0, n1 - n0 - gamma, gamma], [d0v, d1v - d0v])
    }
}

/// Points of `[0, 1]` to evaluate around `t`, snapped to `1/m` in grid mode.
fn neighbours(t: f64, grid: Option<u64>, out: &mut Vec<f64>) {
    let t = t.clamp(0.0, 1.0);
    match grid {
        None => out.push(t),
        Some(0) => {}
        Some(m) => {
            let m = m as f64;
            out.push((t * m).floor() / m);
            out.push((t * m).ceil() / m);
        }
    }
}

fn grid_of(table: &GroupedTable, relaxation: Relaxation, d: usize) -> Option<u64> {
    match relaxation {
        Relaxation::Grid => Some(table.counts()[d]),
        Relaxation::Continuous => None,
    }
}

/// Maximises `G` over `p_{d0}` with the other fractions fixed. The ratio is
/// quasi-concave in `p_{d0}`, so its grid maximum sits next to a stationary
/// point or at an end.
fn maximize_along(form: &GiniQuadraticForm, base: &[f64], d0: usize, grid: Option<u64>) -> Option<(f64, f64)> {
    let ([alpha, beta, gamma], [delta, eta]) = form.restrict(base, d0);
    let mut cands = vec![0.0, 1.0];
    // d/dt N/D = 0  <=>  gamma eta t^2 + 2 gamma delta t + (beta delta - alpha eta) = 0
    let (qa, qb, qc) = (gamma * eta, 2.0 * gamma * delta, beta * delta - alpha * eta);
    let mut roots = Vec::new();
    if qa.abs() > 1e-300 {
        let disc = qb * qb - 4.0 * qa * qc;
        if disc >= 0.0 {
            let sq = disc.sqrt();
            roots.push((-qb + sq) / (2.0 * qa));
            roots.push((-qb - sq) / (2.0 * qa));
        }
    } else if qb.abs() > 1e-300 {
        roots.push(-qc / qb);
    }
    // A zero-mean end leaves its grid neighbour as the best admissible point.
    if let Some(m) = grid.filter(|&m| m > 0) {
        cands.extend([1.0 / m as f64, 1.0 - 1.0 / m as f64]);
    }
    for r in roots.into_iter().filter(|r| r.is_finite()) {
        neighbours(r, grid, &mut cands);
    }
    let mut p = base.to_vec();
    let mut best: Option<(f64, f64)> = None;
    for t in cands {
        p[d0] = t;
        if let Some(v) = form.value(&p) {
            if best.is_none_or(|(_, bv)| v > bv) {
                best = Some((t, v));
            }
        }
    }
    best
}

fn check_table(table: &GroupedTable) -> Result<()> {
    let top = table.expanded_bounds().1.last().copied().unwrap_or(0.0);
    if table.brackets()[0].0 < 0.0 {
        return Err(Error::InvalidInput("bracket endpoints must be non-negative".into()));
    }
    if top <= 0.0 {
        return Err(Error::NonPositiveMean);
    }
    Ok(())
}

fn step_vector(d: usize, s: usize) -> Vec<f64> {
    (0..d).map(|j| if j < s { 0.0 } else { 1.0 }).collect()
}

fn max_shape(d: usize, d0: usize) -> Vec<f64> {
    (0..d).map(|j| if j < d0 { 1.0 } else { 0.0 }).collect()
}

fn result(
    table: &GroupedTable,
    lower: f64,
    upper: f64,
    pmin: Vec<f64>,
    pmax: Vec<f64>,
    method: &str,
    iterations: usize,
) -> BoundsResult {
    let argmin = CornerAllocation { p: pmin.clone() }.expand(table);
    let argmax = CornerAllocation { p: pmax.clone() }.expand(table);
    BoundsResult {
        index: IndexSpec::Gini,
        lower,
        upper,
        argmin,
        argmax,
        diagnostics: Diagnostics {
            method: method.into(),
            iterations,
            exact: true,
            corner_min: Some(pmin),
            corner_max: Some(pmax),
            ..Default::default()
        },
    }
}

type Extremum = (Vec<f64>, f64);

fn corner_search(form: &GiniQuadraticForm, grid: impl Fn(usize) -> Option<u64>) -> Result<(Extremum, Extremum)> {
    let d = form.num_groups();
    let mut lo: Option<Extremum> = None;
    for s in 0..=d {
        let p = step_vector(d, s);
        if let Some(v) = form.value(&p) {
            if lo.as_ref().is_none_or(|(_, bv)| v < *bv) {
                lo = Some((p, v));
            }
        }
    }
    let mut hi: Option<Extremum> = None;
    for d0 in 0..d {
        let mut p = max_shape(d, d0);
        if let Some((t, v)) = maximize_along(form, &p, d0, grid(d0)) {
            if hi.as_ref().is_none_or(|(_, bv)| v > *bv) {
                p[d0] = t;
                hi = Some((p, v));
            }
        }
    }
    Ok((lo.ok_or(Error::NonPositiveMean)?, hi.ok_or(Error::NonPositiveMean)?))
}

/// Corner-solution Gini bounds.
pub fn gini_bounds_1a(table: &GroupedTable, relaxation: Relaxation) -> Result<BoundsResult> {
    check_table(table)?;
    let form = build_gini_form(table);
    let ((pmin, lower), (pmax, upper)) = corner_search(&form, |d0| grid_of(table, relaxation, d0))?;
    let method = match relaxation {
        Relaxation::Grid => "corner-grid",
        Relaxation::Continuous => "corner-continuous",
    };
    Ok(result(table, lower, upper, pmin, pmax, method, 0))
}

/// Continuous-relaxation Gini bounds `(lower, upper)` for brackets carrying
/// arbitrary non-negative shares, normalised internally. No completion is materialised.
pub fn gini_bounds_from_shares(brackets: &[(f64, f64)], shares: &[f64]) -> Result<(f64, f64)> {
    if brackets.len() != shares.len() || shares.iter().any(|s| !(*s >= 0.0)) {
        return Err(Error::InvalidInput("shares must be non-negative and aligned with brackets".into()));
    }
    if brackets.first().is_some_and(|b| b.0 < 0.0) {
        return Err(Error::InvalidInput("bracket endpoints must be non-negative".into()));
    }
    let top = brackets.iter().zip(shares).filter(|(_, &s)| s > 0.0).map(|(b, _)| b.1).last();
    if top.is_none_or(|t| t <= 0.0) {
        return Err(Error::NonPositiveMean);
    }
    let total: f64 = shares.iter().sum();
    let shares: Vec<f64> = shares.iter().map(|s| s / total).collect();
    let ((_, lower), (_, upper)) = corner_search(&gini_form_from_shares(brackets, &shares), |_| None)?;
    Ok((lower, upper))
}

/// Largest value of the concave quadratic `N(t) - lambda D(t)` over the
/// admissible `t`.
fn max_concave_along(form: &GiniQuadraticForm, base: &[f64], d0: usize, lambda: f64, grid: Option<u64>) -> (f64, f64) {
    let ([alpha, beta, gamma], [delta, eta]) = form.restrict(base, d0);
    let (c0, c1, c2) = (alpha - lambda * delta, beta - lambda * eta, gamma);
    let mut cands = vec![0.0, 1.0];
    if let Some(m) = grid.filter(|&m| m > 0) {
        cands.extend([1.0 / m as f64, 1.0 - 1.0 / m as f64]);
    }
    if c2 < 0.0 {
        neighbours(-c1 / (2.0 * c2), grid, &mut cands);
    }
    // zero-mean completions carry no Gini value
    cands
        .into_iter()
        .filter(|&t| delta + eta * t > 0.0)
        .map(|t| (t, c0 + c1 * t + c2 * t * t))
        .fold((0.0, f64::NEG_INFINITY), |best, c| if c.1 > best.1 { c } else { best })
}

/// Enumerates every vertex of `{0, 1}^D` up to this many groups in the
/// minimisation subproblem, and only step vectors beyond it.
const VERTEX_ENUMERATION_LIMIT: usize = 16;

/// The same bounds by dyadic Dinkelbach bisection, solving each parametric
/// subproblem in closed form.
pub fn gini_bounds_1a_dinkelbach(table: &GroupedTable, relaxation: Relaxation, epsilon: f64) -> Result<BoundsResult> {
    check_table(table)?;
    let form = build_gini_form(table);
    let d = table.num_groups();
    // Dividing f by the smallest positive completion mean turns the
    // f-tolerance into a lambda-tolerance.
    let scale = {
        let low = form.denominator(&vec![1.0; d]);
        if low > 0.0 {
            low
        } else {
            form.denominator(&vec![0.0; d])
        }
    };

    let mut pmax = Vec::new();
    let f_max = |lambda: f64| -> Result<f64> {
        let mut best = (Vec::new(), f64::NEG_INFINITY);
        for d0 in 0..d {
            let mut p = max_shape(d, d0);
            let (t, v) = max_concave_along(&form, &p, d0, lambda, grid_of(table, relaxation, d0));
            if v > best.1 {
                p[d0] = t;
                best = (p, v);
            }
        }
        pmax = best.0;
        Ok(best.1 / scale)
    };
    let up = dinkelbach_bisect(DinkelbachOracle { f: f_max, direction: Direction::Maximize, lo: 0.0, hi: 1.0, epsilon })?;

    let vertices: Vec<Vec<f64>> = if d <= VERTEX_ENUMERATION_LIMIT {
        (0u32..1 << d).map(|m| (0..d).map(|j| f64::from(m >> j & 1)).collect()).collect()
    } else {
        (0..=d).map(|s| step_vector(d, s)).collect()
    };
    let mut pmin = Vec::new();
    let f_min = |lambda: f64| -> Result<f64> {
        let mut best = (Vec::new(), f64::INFINITY);
        for p in vertices.iter().filter(|p| form.denominator(p) > 0.0) {
            let v = form.numerator(p) - lambda * form.denominator(p);
            if v < best.1 {
                best = (p.clone(), v);
            }
        }
        pmin = best.0;
        Ok(best.1 / scale)
    };
    let down = dinkelbach_bisect(DinkelbachOracle { f: f_min, direction: Direction::Minimize, lo: 0.0, hi: 1.0, epsilon })?;

    let mut r = result(table, down.lambda, up.lambda, pmin, pmax, "corner-dinkelbach", down.iterations + up.iterations);
    r.diagnostics.exact = false;
    Ok(r)
}

/// Default-tolerance Dinkelbach path on the sharp grid.
pub fn gini_bounds_1a_dinkelbach_default(table: &GroupedTable) -> Result<BoundsResult> {
    gini_bounds_1a_dinkelbach(table, Relaxation::Grid, DEFAULT_EPSILON)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index::gini;
    use crate::types::SortedSample;

    fn table(b: &[(f64, f64)], c: &[u64]) -> GroupedTable {
        GroupedTable::new(b.to_vec(), c.to_vec()).unwrap()
    }

    fn g(v: &[f64]) -> f64 {
        gini(&SortedSample::new(v.to_vec()).unwrap()).unwrap()
    }

    /// Every completion with each unit at an endpoint or on a 1/8 interior grid.
    fn enumerate(t: &GroupedTable) -> (f64, f64) {
        let (lo, hi) = t.expanded_bounds();
        let n = lo.len();
        let cand: Vec<Vec<f64>> = (0..n).map(|i| (0..=8).map(|k| lo[i] + (hi[i] - lo[i]) * k as f64 / 8.0).collect()).collect();
        let (mut mn, mut mx) = (f64::INFINITY, f64::NEG_INFINITY);
        let mut idx = vec![0usize; n];
        loop {
            let y: Vec<f64> = (0..n).map(|i| cand[i][idx[i]]).collect();
            if y.iter().sum::<f64>() > 0.0 {
                let v = g(&y);
                mn = mn.min(v);
                mx = mx.max(v);
            }
            let mut k = 0;
            loop {
                if k == n {
                    return (mn, mx);
                }
                idx[k] += 1;
                if idx[k] < cand[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }

    #[test]
    fn form_matches_expanded_gini_on_grid() {
        let t = table(&[(0.0, 1.0), (2.0, 3.0), (4.0, 7.0)], &[2, 3, 1]);
        let form = build_gini_form(&t);
        for k0 in 0..=2 {
            for k1 in 0..=3 {
                for k2 in 0..=1 {
                    let p = vec![k0 as f64 / 2.0, k1 as f64 / 3.0, k2 as f64];
                    let y = CornerAllocation::new(p.clone()).unwrap().expand(&t);
                    assert!((form.value(&p).unwrap() - g(&y)).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn form_examples() {
        let t = table(&[(0.0, 1.0), (2.0, 3.0)], &[1, 1]);
        let form = build_gini_form(&t);
        assert!((form.value(&[0.0, 0.0]).unwrap() - 0.25).abs() < 1e-15);
        assert!((form.value(&[1.0, 1.0]).unwrap() - 0.5).abs() < 1e-15);
        let t = table(&[(2.0, 2.0), (5.0, 5.0)], &[3, 1]);
        let form = build_gini_form(&t);
        let v = form.value(&[0.0, 0.0]).unwrap();
        assert!((form.value(&[0.3, 0.9]).unwrap() - v).abs() < 1e-15);
    }

    #[test]
    fn form_matrix_is_symmetric_with_zero_diagonal() {
        let t = table(&[(1.0, 2.0), (4.0, 4.0), (5.0, 9.0)], &[2, 1, 4]);
        let f = build_gini_form(&t);
        for u in 0..6 {
            assert_eq!(f.a[u][u], 0.0);
            for v in 0..6 {
                assert_eq!(f.a[u][v], f.a[v][u]);
            }
        }
    }

    #[test]
    fn examples() {
        let r = gini_bounds_1a(&table(&[(0.0, 1.0), (2.0, 3.0)], &[1, 1]), Relaxation::Grid).unwrap();
        assert!((r.lower - 1.0 / 6.0).abs() < 1e-12 && (r.upper - 0.5).abs() < 1e-12, "{r:?}");
        let r = gini_bounds_1a(&table(&[(1.0, 2.0), (4.0, 4.0)], &[2, 1]), Relaxation::Grid).unwrap();
        assert!((r.lower - 1.0 / 6.0).abs() < 1e-12 && (r.upper - 1.0 / 3.0).abs() < 1e-12, "{r:?}");
        let r = gini_bounds_1a(&table(&[(1.0, 1.0), (3.0, 3.0)], &[2, 1]), Relaxation::Grid).unwrap();
        let want = g(&[1.0, 1.0, 3.0]);
        assert!((r.lower - want).abs() < 1e-14 && (r.upper - want).abs() < 1e-14);
    }

    #[test]
    fn grid_bounds_match_enumeration() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..60 {
            let d = rng.gen_range(2..=3);
            let mut b = Vec::new();
            let mut x = rng.gen_range(0..3) as f64;
            for _ in 0..d {
                let w = rng.gen_range(0..4) as f64;
                b.push((x, x + w));
                x += w + rng.gen_range(0..3) as f64;
            }
            let c: Vec<u64> = (0..d).map(|_| rng.gen_range(0..=2)).collect();
            let Ok(t) = GroupedTable::new(b, c) else { continue };
            if t.n() > 5 || t.expanded_bounds().1.iter().all(|&v| v == 0.0) {
                continue;
            }
            let r = gini_bounds_1a(&t, Relaxation::Grid).unwrap();
            let (mn, mx) = enumerate(&t);
            assert!((r.lower - mn).abs() < 1e-9 && (r.upper - mx).abs() < 1e-9, "{t:?} {r:?} {mn} {mx}");
            assert!((g(&r.argmin) - r.lower).abs() < 1e-12 && (g(&r.argmax) - r.upper).abs() < 1e-12);
        }
    }

    #[test]
    fn continuous_relaxation_is_wider() {
        let t = table(&[(0.0, 1.0), (2.0, 3.0)], &[1, 1]);
        let c = gini_bounds_1a(&t, Relaxation::Continuous).unwrap();
        let gr = gini_bounds_1a(&t, Relaxation::Grid).unwrap();
        assert!((c.lower - gr.lower).abs() < 1e-15);
        // with group 1 at its lower end, G(t) = (3 - t^2) / (6 - 2t) peaks at t = 3 - sqrt(6)
        assert!((c.upper - (3.0 - 6f64.sqrt())).abs() < 1e-12, "{}", c.upper);
        assert!(c.upper > gr.upper);
    }

    #[test]
    fn share_entry_point_matches_table_path() {
        let t = table(&[(0.0, 1.0), (2.0, 3.0), (5.0, 8.0)], &[5, 3, 2]);
        let c = gini_bounds_1a(&t, Relaxation::Continuous).unwrap();
        let unnormalised = [5.0, 3.0, 2.0];
        let (lo, hi) = gini_bounds_from_shares(t.brackets(), &unnormalised).unwrap();
        assert!((lo - c.lower).abs() < 1e-15 && (hi - c.upper).abs() < 1e-15);
        let (lo, hi) = gini_bounds_from_shares(t.brackets(), &[0.0, 1.0, 0.0]).unwrap();
        assert_eq!(lo, 0.0);
        assert!((hi - gini_bounds_1a(&table(&[(0.0, 1.0), (2.0, 3.0), (5.0, 8.0)], &[0, 1, 0]), Relaxation::Continuous).unwrap().upper).abs() < 1e-15);
        assert!(gini_bounds_from_shares(t.brackets(), &[1.0, 0.0, 0.0]).is_ok());
        assert_eq!(gini_bounds_from_shares(&[(0.0, 0.0), (1.0, 2.0)], &[1.0, 0.0]).unwrap_err(), Error::NonPositiveMean);
    }

    /// The grid maximum approaches the continuous one at rate 1/n.
    #[test]
    fn quantisation_gap_shrinks_like_one_over_n() {
        let base = table(&[(0.0, 1.0), (2.0, 3.0), (5.0, 8.0)], &[5, 3, 2]);
        let cont = gini_bounds_1a(&base, Relaxation::Continuous).unwrap().upper;
        for k in [1u64, 2, 4, 8, 16] {
            let t = base.replicated(k);
            let gap = cont - gini_bounds_1a(&t, Relaxation::Grid).unwrap().upper;
            assert!(gap >= -1e-12);
            assert!(gap <= 1.0 / t.n() as f64, "k = {k}, gap = {gap}");
        }
    }

    #[test]
    fn dinkelbach_agrees_with_corner_path() {
        for (b, c) in [
            (vec![(0.0, 1.0), (2.0, 3.0)], vec![1, 1]),
            (vec![(1.0, 2.0), (4.0, 4.0)], vec![2, 1]),
            (vec![(1.0, 1.0), (3.0, 3.0)], vec![2, 1]),
            (vec![(0.0, 10.0), (10.0, 25.0), (40.0, 100.0)], vec![7, 4, 2]),
        ] {
            let t = table(&b, &c);
            for rel in [Relaxation::Grid, Relaxation::Continuous] {
                let a = gini_bounds_1a(&t, rel).unwrap();
                let k = gini_bounds_1a_dinkelbach(&t, rel, 1e-6).unwrap();
                assert!((a.lower - k.lower).abs() <= 2e-6 && (a.upper - k.upper).abs() <= 2e-6, "{a:?}\n{k:?}");
            }
        }
    }

    #[test]
    fn rejects_zero_top() {
        let t = table(&[(0.0, 0.0), (0.0, 0.0)], &[1, 1]);
        assert_eq!(gini_bounds_1a(&t, Relaxation::Grid).unwrap_err(), Error::NonPositiveMean);
    }

    /// Three units in `[0, 1]` can all sit at zero; the largest Gini with a
    /// positive mean is that of `(0, 0, 1)`: `4 / (2 * 9 * 1/3) = 2/3`.
    #[test]
    fn zero_mean_completion_is_excluded() {
        let t = table(&[(0.0, 1.0), (2.0, 3.0)], &[3, 0]);
        for r in [gini_bounds_1a(&t, Relaxation::Grid).unwrap(), gini_bounds_1a_dinkelbach(&t, Relaxation::Grid, 1e-6).unwrap()] {
            assert!(r.lower.abs() <= 1e-6, "{r:?}");
            assert!((r.upper - 2.0 / 3.0).abs() <= 2e-6, "{r:?}");
        }
    }

    #[test]
    fn allocation_shapes() {
        let t = table(&[(0.0, 10.0), (10.0, 25.0), (40.0, 100.0)], &[7, 4, 2]);
        let r = gini_bounds_1a(&t, Relaxation::Grid).unwrap();
        let pmin = r.diagnostics.corner_min.unwrap();
        assert!(pmin.iter().all(|&v| v == 0.0 || v == 1.0));
        assert!(pmin.windows(2).all(|w| w[0] <= w[1]));
        let pmax = r.diagnostics.corner_max.unwrap();
        assert!(pmax.iter().filter(|&&v| v != 0.0 && v != 1.0).count() <= 1);
    }
}
