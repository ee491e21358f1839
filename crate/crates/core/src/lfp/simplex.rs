//! Dense two-phase tableau simplex for small and medium linear programs.
//!
//! Variables carry arbitrary (possibly infinite) bounds; they are shifted,
//! reflected or split into non-negative columns internally. Pricing is
//! Dantzig's rule until a run of degenerate pivots is seen, after which the
//! solver falls back to Bland's rule for the rest of the phase.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowKind {
    /// `a . x = b`
    Eq,
    /// `a . x <= b`
    Le,
}

/// `optimize c . x` subject to tagged rows and variable bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub sense: Sense,
    pub objective: Vec<f64>,
    pub rows: Vec<Vec<f64>>,
    pub kinds: Vec<RowKind>,
    pub rhs: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl LinearProgram {
    /// New program with every variable bounded to `[0, +inf)`.
    pub fn new(sense: Sense, objective: Vec<f64>) -> Self {
        let n = objective.len();
        Self {
            sense,
            objective,
            rows: Vec::new(),
            kinds: Vec::new(),
            rhs: Vec::new(),
            lower: vec![0.0; n],
            upper: vec![f64::INFINITY; n],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn add_row(&mut self, coefficients: Vec<f64>, kind: RowKind, rhs: f64) {
        self.rows.push(coefficients);
        self.kinds.push(kind);
        self.rhs.push(rhs);
    }

    pub fn set_bounds(&mut self, var: usize, lower: f64, upper: f64) {
        self.lower[var] = lower;
        self.upper[var] = upper;
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        if self.objective.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidInput("objective coefficients must be finite".into()));
        }
        if self.lower.len() != n || self.upper.len() != n {
            return Err(Error::InvalidInput("bound vectors do not match variable count".into()));
        }
        if self.kinds.len() != self.rows.len() || self.rhs.len() != self.rows.len() {
            return Err(Error::InvalidInput("row metadata does not match row count".into()));
        }
        for (i, row) in self.rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidInput(format!("row {i} has {} coefficients, expected {n}", row.len())));
            }
            if row.iter().any(|a| !a.is_finite()) || !self.rhs[i].is_finite() {
                return Err(Error::InvalidInput(format!("row {i} has a non-finite entry")));
            }
        }
        for j in 0..n {
            if self.lower[j].is_nan() || self.upper[j].is_nan() || self.lower[j] == f64::INFINITY
                || self.upper[j] == f64::NEG_INFINITY
            {
                return Err(Error::InvalidInput(format!("variable {j} has invalid bounds")));
            }
        }
        Ok(())
    }

    /// `c . x`
    pub fn objective_value(&self, x: &[f64]) -> f64 {
        dot(&self.objective, x)
    }

    /// Largest violation of rows and bounds at `x`.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, row) in self.rows.iter().enumerate() {
            let lhs = dot(row, x);
            let v = match self.kinds[i] {
                RowKind::Eq => (lhs - self.rhs[i]).abs(),
                RowKind::Le => (lhs - self.rhs[i]).max(0.0),
            };
            worst = worst.max(v);
        }
        for (j, &xj) in x.iter().enumerate() {
            worst = worst.max(self.lower[j] - xj).max(xj - self.upper[j]);
        }
        worst
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub value: f64,
    /// Row multipliers of the equivalent maximisation problem (`c` for
    /// `Maximize`, `-c` for `Minimize`): `Le` rows carry non-negative
    /// multipliers and `grad - A^T y` is the bound-multiplier vector.
    pub duals: Vec<f64>,
    pub iterations: usize,
    /// A basic variable sits at zero in the final basis.
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal(LpSolution),
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn optimal(self) -> Option<LpSolution> {
        match self {
            LpOutcome::Optimal(s) => Some(s),
            _ => None,
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[derive(Debug, Clone, Copy)]
enum VarMap {
    Shift { col: usize, lower: f64 },
    Reflect { col: usize, upper: f64 },
    Split { pos: usize, neg: usize },
}

const PIVOT_TOL: f64 = 1e-10;
const COST_TOL: f64 = 1e-10;
const DEGENERATE_RUN: usize = 50;
/// Rows whose coefficients all fall below this are cancellation noise and
/// are checked as empty rows instead of being rescaled to unit size.
const ROW_NOISE_FLOOR: f64 = 1e-13;

struct Tableau {
    m: usize,
    ncols: usize,
    /// Row-major, `m` rows of `ncols + 1` entries (last = rhs).
    t: Vec<f64>,
    basis: Vec<usize>,
    barred: Vec<bool>,
    iterations: usize,
    cap: usize,
}

impl Tableau {
    fn at(&self, i: usize, j: usize) -> f64 {
        self.t[i * (self.ncols + 1) + j]
    }

    fn rhs(&self, i: usize) -> f64 {
        self.t[i * (self.ncols + 1) + self.ncols]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let w = self.ncols + 1;
        let p = self.t[r * w + c];
        for j in 0..w {
            self.t[r * w + j] /= p;
        }
        self.t[r * w + c] = 1.0;
        let (before, rest) = self.t.split_at_mut(r * w);
        let (prow, after) = rest.split_at_mut(w);
        for row in before.chunks_mut(w).chain(after.chunks_mut(w)) {
            let f = row[c];
            if f != 0.0 {
                for (x, &pv) in row.iter_mut().zip(prow.iter()) {
                    *x -= f * pv;
                }
                row[c] = 0.0;
            }
        }
        self.basis[r] = c;
        self.iterations += 1;
    }

    fn reduced_costs(&self, cost: &[f64]) -> Vec<f64> {
        let mut r: Vec<f64> = cost.iter().map(|c| -c).collect();
        for i in 0..self.m {
            let cb = cost[self.basis[i]];
            if cb != 0.0 {
                for (j, rj) in r.iter_mut().enumerate() {
                    *rj += cb * self.at(i, j);
                }
            }
        }
        r
    }

    /// Maximises `cost . x` from the current feasible basis.
    /// Returns `Ok(false)` on unboundedness.
    fn optimize(&mut self, cost: &[f64]) -> Result<bool> {
        let mut degenerate_run = 0;
        let mut bland = false;
        loop {
            if self.iterations > self.cap {
                return Err(Error::NumericalFailure(format!(
                    "simplex iteration cap {} reached",
                    self.cap
                )));
            }
            let r = self.reduced_costs(cost);
            let scale = 1.0 + cost.iter().fold(0.0f64, |a, c| a.max(c.abs()));
            let mut entering = None;
            let mut best = -COST_TOL * scale;
            for j in 0..self.ncols {
                if self.barred[j] || r[j] >= best {
                    continue;
                }
                entering = Some(j);
                if bland {
                    break;
                }
                best = r[j];
            }
            let Some(c) = entering else { return Ok(true) };
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.m {
                let a = self.at(i, c);
                if a <= PIVOT_TOL {
                    continue;
                }
                let ratio = self.rhs(i).max(0.0) / a;
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((k, best_ratio)) => {
                        let tie = (ratio - best_ratio).abs() <= 1e-12 * (1.0 + best_ratio.abs());
                        let better = if tie {
                            if bland {
                                self.basis[i] < self.basis[k]
                            } else {
                                a > self.at(k, c)
                            }
                        } else {
                            ratio < best_ratio
                        };
                        if better {
                            Some((i, ratio))
                        } else {
                            Some((k, best_ratio))
                        }
                    }
                };
            }
            let Some((row, ratio)) = leave else { return Ok(false) };
            if ratio <= 1e-14 {
                degenerate_run += 1;
                if degenerate_run > DEGENERATE_RUN {
                    bland = true;
                }
            } else {
                degenerate_run = 0;
            }
            self.pivot(row, c);
        }
    }
}

/// Solves `lp` to optimality or reports infeasibility / unboundedness.
pub fn solve_lp(lp: &LinearProgram) -> Result<LpOutcome> {
    lp.validate()?;
    let n = lp.num_vars();

    // Variable substitution into non-negative columns.
    let mut maps = Vec::with_capacity(n);
    let mut ns = 0;
    let mut bound_rows: Vec<(usize, f64)> = Vec::new();
    for j in 0..n {
        let (lo, hi) = (lp.lower[j], lp.upper[j]);
        if lo > hi {
            return Ok(LpOutcome::Infeasible);
        }
        if lo.is_finite() {
            maps.push(VarMap::Shift { col: ns, lower: lo });
            if hi.is_finite() {
                bound_rows.push((ns, hi - lo));
            }
            ns += 1;
        } else if hi.is_finite() {
            maps.push(VarMap::Reflect { col: ns, upper: hi });
            ns += 1;
        } else {
            maps.push(VarMap::Split { pos: ns, neg: ns + 1 });
            ns += 2;
        }
    }

    let sign = if lp.sense == Sense::Maximize { 1.0 } else { -1.0 };
    let mut cost = vec![0.0; ns];
    for (j, m) in maps.iter().enumerate() {
        let c = sign * lp.objective[j];
        match *m {
            VarMap::Shift { col, .. } => cost[col] = c,
            VarMap::Reflect { col, .. } => cost[col] = -c,
            VarMap::Split { pos, neg } => {
                cost[pos] = c;
                cost[neg] = -c;
            }
        }
    }

    // Internal rows: original rows followed by finite upper-bound rows.
    struct IRow {
        a: Vec<f64>,
        b: f64,
        eq: bool,
        scale: f64,
        flipped: bool,
    }
    let mut irows: Vec<IRow> = Vec::with_capacity(lp.num_rows() + bound_rows.len());
    for (i, row) in lp.rows.iter().enumerate() {
        let mut a = vec![0.0; ns];
        let mut b = lp.rhs[i];
        for (j, m) in maps.iter().enumerate() {
            let aij = row[j];
            if aij == 0.0 {
                continue;
            }
            match *m {
                VarMap::Shift { col, lower } => {
                    a[col] += aij;
                    b -= aij * lower;
                }
                VarMap::Reflect { col, upper } => {
                    a[col] -= aij;
                    b -= aij * upper;
                }
                VarMap::Split { pos, neg } => {
                    a[pos] += aij;
                    a[neg] -= aij;
                }
            }
        }
        irows.push(IRow { a, b, eq: lp.kinds[i] == RowKind::Eq, scale: 1.0, flipped: false });
    }
    for &(col, width) in &bound_rows {
        let mut a = vec![0.0; ns];
        a[col] = 1.0;
        irows.push(IRow { a, b: width, eq: false, scale: 1.0, flipped: false });
    }
    for r in irows.iter_mut() {
        let big = r.a.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if big > ROW_NOISE_FLOOR {
            r.scale = 1.0 / big;
            r.a.iter_mut().for_each(|v| *v *= r.scale);
            r.b *= r.scale;
        } else {
            // Empty row: feasible iff the rhs admits zero.
            let ok = if r.eq { r.b.abs() <= 1e-9 } else { r.b >= -1e-9 };
            if !ok {
                return Ok(LpOutcome::Infeasible);
            }
            r.b = 0.0;
        }
        if r.b < 0.0 {
            r.a.iter_mut().for_each(|v| *v = -*v);
            r.b = -r.b;
            r.flipped = true;
        }
    }

    let m = irows.len();
    let surplus_rows: Vec<usize> = (0..m).filter(|&i| !irows[i].eq && irows[i].flipped).collect();
    let nsur = surplus_rows.len();
    let unit0 = ns + nsur;
    let ncols = unit0 + m;
    let w = ncols + 1;
    let mut t = vec![0.0; m * w];
    let mut artificial = vec![false; ncols];
    for (i, r) in irows.iter().enumerate() {
        t[i * w..i * w + ns].copy_from_slice(&r.a);
        t[i * w + unit0 + i] = 1.0;
        t[i * w + ncols] = r.b;
        artificial[unit0 + i] = r.eq || r.flipped;
    }
    for (k, &i) in surplus_rows.iter().enumerate() {
        t[i * w + ns + k] = -1.0;
    }
    let mut tab = Tableau {
        m,
        ncols,
        t,
        basis: (0..m).map(|i| unit0 + i).collect(),
        barred: vec![false; ncols],
        iterations: 0,
        cap: 50 * (m + ncols).max(1),
    };

    // Phase 1.
    if artificial.iter().any(|&a| a) {
        let phase1: Vec<f64> = artificial.iter().map(|&a| if a { -1.0 } else { 0.0 }).collect();
        tab.optimize(&phase1)?;
        let infeas: f64 = (0..m)
            .filter(|&i| artificial[tab.basis[i]])
            .map(|i| tab.rhs(i))
            .sum();
        let bscale = 1.0 + irows.iter().fold(0.0f64, |a, r| a.max(r.b));
        if infeas > 1e-9 * bscale {
            return Ok(LpOutcome::Infeasible);
        }
        for i in 0..m {
            if !artificial[tab.basis[i]] {
                continue;
            }
            if let Some(j) = (0..ncols).find(|&j| !artificial[j] && tab.at(i, j).abs() > 1e-9) {
                tab.pivot(i, j);
            }
        }
        for (j, &a) in artificial.iter().enumerate() {
            tab.barred[j] = a;
        }
    }

    // Phase 2.
    let mut full_cost = cost.clone();
    full_cost.resize(ncols, 0.0);
    if !tab.optimize(&full_cost)? {
        return Ok(LpOutcome::Unbounded);
    }

    let mut xi = vec![0.0; ncols];
    let mut degenerate = false;
    for i in 0..m {
        let v = tab.rhs(i).max(0.0);
        xi[tab.basis[i]] = v;
        if !artificial[tab.basis[i]] && v <= 1e-11 {
            degenerate = true;
        }
    }
    let x: Vec<f64> = maps
        .iter()
        .enumerate()
        .map(|(j, m)| match *m {
            VarMap::Shift { col, lower } => (lower + xi[col]).min(lp.upper[j]),
            VarMap::Reflect { col, upper } => upper - xi[col],
            VarMap::Split { pos, neg } => xi[pos] - xi[neg],
        })
        .collect();
    let r = tab.reduced_costs(&full_cost);
    let duals = (0..lp.num_rows())
        .map(|i| {
            let y = r[unit0 + i] * irows[i].scale;
            if irows[i].flipped {
                -y
            } else {
                y
            }
        })
        .collect();
    Ok(LpOutcome::Optimal(LpSolution {
        value: lp.objective_value(&x),
        x,
        duals,
        iterations: tab.iterations,
        degenerate,
    }))
}
