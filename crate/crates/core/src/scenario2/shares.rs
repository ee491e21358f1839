//! Gini bounds over the share polytope of the endpoint lattice.
//!
//! With total shares `w = psi + phi` on the lattice `u`, the Gini is
//! `w'Kw / (2 u'w)` where `K_ij = |u_i - u_j|`. The kernel is conditionally
//! negative definite, so the numerator is concave on the slice of fixed total
//! mass. The maximum is found by away-step Frank-Wolfe inside a Dinkelbach
//! bisection and the minimum, attained at a vertex, by pair-exchange descent.
//!
//! Shares are allowed to split a unit's mass, so the upper bound relaxes the
//! integer unit counts of the threshold path and can exceed it by O(1/n).
//! The share polytope has integral vertices, so the lower bounds coincide.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::data::Scenario2Data;
use super::lattice::{build_share_system, EndpointLattice, ShareSystem};
use super::threshold::{gini_max_threshold, gini_min_threshold, DEFAULT_ENUMERATION_BUDGET};
use crate::bounds::{BoundsResult, Diagnostics};
use crate::error::{Error, Result};
use crate::lfp::{dinkelbach_bisect, solve_lp, DinkelbachOracle, Direction, LinearProgram, LpOutcome, RowKind, Sense};
use crate::types::{IndexSpec, IntervalObservation};

const FW_TOLERANCE: f64 = 1e-9;
const FW_MAX_ITERATIONS: usize = 5000;
const RESTARTS: usize = 5;
const RESTART_SEED: u64 = 0x5eed;

/// `c'Kc` for the distance kernel on `u`.
pub fn kernel_quadratic(u: &[f64], c: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..u.len() {
        for j in 0..u.len() {
            s += c[i] * c[j] * (u[i] - u[j]).abs();
        }
    }
    s
}

fn kernel_apply(u: &[f64], w: &[f64]) -> Vec<f64> {
    u.iter().map(|&ui| u.iter().zip(w).map(|(&uj, &wj)| (ui - uj).abs() * wj).sum()).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Share bounds with the extremal share vectors on the lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct ShareBounds {
    /// `argmin` and `argmax` are empty; the extremal shares are below.
    pub bounds: BoundsResult,
    pub lattice: Vec<f64>,
    pub phi_min: Vec<f64>,
    pub phi_max: Vec<f64>,
}

struct ShareProblem {
    /// Lattice divided by its largest value.
    u: Vec<f64>,
    system: ShareSystem,
    lp: LinearProgram,
    /// Lattice span `[first, last]` of each block.
    spans: Vec<(usize, usize)>,
}

impl ShareProblem {
    fn new(system: ShareSystem, lattice: &EndpointLattice) -> Self {
        let scale = system.u.iter().fold(0.0f64, |m, &v| m.max(v));
        let u: Vec<f64> = system.u.iter().map(|&v| v / scale).collect();
        let k = u.len();
        let mut lp = LinearProgram::new(Sense::Maximize, vec![0.0; k]);
        for (i, &c) in system.covered.iter().enumerate() {
            if !c {
                lp.set_bounds(i, 0.0, 0.0);
            }
        }
        let mut spans = Vec::with_capacity(system.blocks.len());
        for blk in &system.blocks {
            let mut row = vec![0.0; k];
            for &m in &blk.members {
                row[m] = 1.0;
            }
            lp.add_row(row.clone(), RowKind::Le, blk.upper);
            lp.add_row(row.iter().map(|v| -v).collect(), RowKind::Le, -blk.lower);
            spans.push((lattice.b_in_u[blk.start], lattice.b_in_u[blk.end]));
        }
        lp.add_row(vec![1.0; k], RowKind::Eq, system.total);
        Self { u, system, lp, spans }
    }

    fn total(&self, phi: &[f64]) -> Vec<f64> {
        self.system.psi.iter().zip(phi).map(|(a, b)| a + b).collect()
    }

    /// Numerator `w'Kw` and denominator `2 u'w`.
    fn parts(&self, phi: &[f64]) -> (f64, f64) {
        let w = self.total(phi);
        (dot(&w, &kernel_apply(&self.u, &w)), 2.0 * dot(&self.u, &w))
    }

    fn gini(&self, phi: &[f64]) -> f64 {
        let (n, d) = self.parts(phi);
        n / d
    }

    fn lmo(&self, c: &[f64], sense: Sense) -> Result<Vec<f64>> {
        let mut lp = self.lp.clone();
        lp.sense = sense;
        lp.objective = c.to_vec();
        match solve_lp(&lp)? {
            LpOutcome::Optimal(s) => Ok(s.x.iter().map(|v| v.max(0.0)).collect()),
            _ => Err(Error::InfeasibleConstraints("share system has no feasible point".into())),
        }
    }

    /// Away-step Frank-Wolfe for `max w'Kw - lambda 2u'w` from a vertex.
    /// Returns the final shares, the objective and the duality gap.
    fn frank_wolfe(&self, lambda: f64, start: &[f64]) -> Result<(Vec<f64>, f64, f64, usize)> {
        let mut phi = start.to_vec();
        let mut active: Vec<(Vec<f64>, f64)> = vec![(phi.clone(), 1.0)];
        for it in 0..FW_MAX_ITERATIONS {
            let w = self.total(&phi);
            let kw = kernel_apply(&self.u, &w);
            let g: Vec<f64> = kw.iter().zip(&self.u).map(|(k, u)| 2.0 * k - 2.0 * lambda * u).collect();
            let value = dot(&w, &kw) - 2.0 * lambda * dot(&self.u, &w);
            let s = self.lmo(&g, Sense::Maximize)?;
            let g_phi = dot(&g, &phi);
            let fw_gap = (dot(&g, &s) - g_phi).max(0.0);
            if fw_gap <= FW_TOLERANCE {
                return Ok((phi, value, fw_gap, it));
            }
            let (away, away_val) = active
                .iter()
                .enumerate()
                .map(|(i, (v, _))| (i, dot(&g, v)))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .expect("active set is non-empty");
            let toward = fw_gap >= g_phi - away_val;
            let (d, gamma_max): (Vec<f64>, f64) = if toward {
                (s.iter().zip(&phi).map(|(a, b)| a - b).collect(), 1.0)
            } else {
                let a = active[away].1;
                (phi.iter().zip(&active[away].0).map(|(a, b)| a - b).collect(), a / (1.0 - a))
            };
            let slope = dot(&g, &d);
            let curv = kernel_quadratic(&self.u, &d);
            let gamma = if curv < 0.0 { (slope / (-2.0 * curv)).min(gamma_max) } else { gamma_max };
            for (p, di) in phi.iter_mut().zip(&d) {
                *p += gamma * di;
            }
            if toward {
                if gamma >= 1.0 {
                    active = vec![(s, 1.0)];
                } else {
                    for a in active.iter_mut() {
                        a.1 *= 1.0 - gamma;
                    }
                    match active.iter_mut().find(|(v, _)| v.iter().zip(&s).all(|(x, y)| (x - y).abs() < 1e-12)) {
                        Some(a) => a.1 += gamma,
                        None => active.push((s, gamma)),
                    }
                }
            } else {
                for a in active.iter_mut() {
                    a.1 *= 1.0 + gamma;
                }
                active[away].1 -= gamma;
                if gamma >= gamma_max {
                    active.swap_remove(away);
                }
            }
        }
        Err(Error::SubproblemNotConverged(format!("Frank-Wolfe exceeded {FW_MAX_ITERATIONS} iterations")))
    }

    /// Largest mass movable from lattice position `i` to `j`.
    fn max_shift(&self, phi: &[f64], i: usize, j: usize) -> f64 {
        let mut delta = phi[i];
        for (blk, &(a, b)) in self.system.blocks.iter().zip(&self.spans) {
            let (has_i, has_j) = ((a..=b).contains(&i), (a..=b).contains(&j));
            if has_i == has_j {
                continue;
            }
            let s: f64 = phi[a..=b].iter().sum();
            delta = delta.min(if has_i { s - blk.lower } else { blk.upper - s });
        }
        delta.max(0.0)
    }

    /// Pair-exchange descent on `w'Kw - lambda 2u'w`. The objective is
    /// concave along every exchange, so only full moves are tried.
    fn exchange_descent(&self, lambda: f64, start: &[f64]) -> (Vec<f64>, f64, usize) {
        let h = |phi: &[f64]| {
            let (n, d) = self.parts(phi);
            n - lambda * d
        };
        let free: Vec<usize> = (0..start.len()).filter(|&i| self.system.covered[i]).collect();
        let mut phi = start.to_vec();
        let mut cur = h(&phi);
        let mut moves = 0;
        loop {
            let mut improved = false;
            for &i in &free {
                for &j in &free {
                    if i == j || phi[i] <= 0.0 {
                        continue;
                    }
                    let delta = self.max_shift(&phi, i, j);
                    if delta <= 1e-15 {
                        continue;
                    }
                    let mut cand = phi.clone();
                    cand[i] -= delta;
                    cand[j] += delta;
                    let v = h(&cand);
                    if v < cur - 1e-13 * (1.0 + cur.abs()) {
                        phi = cand;
                        cur = v;
                        moves += 1;
                        improved = true;
                    }
                }
            }
            if !improved {
                return (phi, cur, moves);
            }
        }
    }
}

/// Share-space Gini bounds, cross-checked against the threshold path.
pub fn gini_bounds_2_shares_data(data: &Scenario2Data, epsilon: f64) -> Result<ShareBounds> {
    if data.points.iter().any(|p| p.value < 0.0) || data.intervals.iter().any(|q| q.lower < 0.0) {
        return Err(Error::InvalidInput("share path needs non-negative values".into()));
    }
    let lattice = EndpointLattice::from_data(data);
    let t_min = gini_min_threshold(data)?;
    let t_max = gini_max_threshold(data, DEFAULT_ENUMERATION_BUDGET)?;
    let system = build_share_system(data, &lattice);
    let total_weight = data.total_weight();
    let mut phi0 = vec![0.0; lattice.u.len()];
    for ((v, _), q) in t_min.atoms.iter().zip(&data.intervals) {
        phi0[lattice.position(*v).expect("threshold values lie on the lattice")] += q.weight / total_weight;
    }
    let degenerate = |value: f64| ShareBounds {
        bounds: BoundsResult {
            index: IndexSpec::Gini,
            lower: value,
            upper: value,
            argmin: Vec::new(),
            argmax: Vec::new(),
            diagnostics: Diagnostics { method: "share-path".into(), exact: true, ..Default::default() },
        },
        lattice: lattice.u.clone(),
        phi_min: phi0.clone(),
        phi_max: phi0.clone(),
    };
    if !data.has_intervals() || lattice.u.iter().all(|&v| v == 0.0) {
        return Ok(degenerate(t_min.value));
    }
    let problem = ShareProblem::new(system, &lattice);
    let min_mean = dot(&problem.u, &problem.total(&problem.lmo(&problem.u, Sense::Minimize)?));
    if min_mean <= 0.0 {
        return Err(Error::DegenerateDenominator { min_value: min_mean });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(RESTART_SEED);
    let mut starts = Vec::with_capacity(RESTARTS);
    for _ in 0..RESTARTS {
        let c: Vec<f64> = (0..problem.u.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        starts.push(problem.lmo(&c, Sense::Maximize)?);
    }

    let mut iterations = 0;
    let mut phi_max = starts[0].clone();
    let mut best_max = f64::NEG_INFINITY;
    let upper = dinkelbach_bisect(DinkelbachOracle {
        f: |lambda: f64| {
            // smallest certified upper estimate over the restarts
            let mut f_up = f64::INFINITY;
            for s in &starts {
                let (phi, value, gap, it) = problem.frank_wolfe(lambda, s)?;
                iterations += it;
                f_up = f_up.min(value + gap);
                let g = problem.gini(&phi);
                if g > best_max {
                    best_max = g;
                    phi_max = phi;
                }
            }
            Ok(f_up)
        },
        direction: Direction::Maximize,
        lo: 0.0,
        hi: 1.0,
        epsilon,
    })?;
    iterations += upper.iterations;

    let mut phi_min = phi0.clone();
    let mut best_min = problem.gini(&phi0);
    let lower = dinkelbach_bisect(DinkelbachOracle {
        f: |lambda: f64| {
            let mut f_best = f64::INFINITY;
            for s in [&phi0, &phi_min.clone()] {
                let (phi, value, moves) = problem.exchange_descent(lambda, s);
                iterations += moves;
                f_best = f_best.min(value);
                let g = problem.gini(&phi);
                if g < best_min {
                    best_min = g;
                    phi_min = phi;
                }
            }
            Ok(f_best)
        },
        direction: Direction::Minimize,
        lo: 0.0,
        hi: 1.0,
        epsilon,
    })?;
    iterations += lower.iterations;

    let gap = (lower.lambda - t_min.value).abs().max((upper.lambda - t_max.value).abs());
    let mut warnings = vec!["share upper bound lets units split across lattice points".to_string()];
    if !t_max.exact {
        warnings.push("threshold upper bound from greedy search".into());
    }
    Ok(ShareBounds {
        bounds: BoundsResult {
            index: IndexSpec::Gini,
            lower: lower.lambda,
            upper: upper.lambda,
            argmin: Vec::new(),
            argmax: Vec::new(),
            diagnostics: Diagnostics {
                method: "share-path".into(),
                iterations,
                exact: false,
                agreement_gap: Some(gap),
                warnings,
                ..Default::default()
            },
        },
        lattice: lattice.u.clone(),
        phi_min,
        phi_max,
    })
}

pub fn gini_bounds_2_shares(data: &[IntervalObservation], epsilon: f64) -> Result<ShareBounds> {
    gini_bounds_2_shares_data(&Scenario2Data::from_observations(data)?, epsilon)
}
