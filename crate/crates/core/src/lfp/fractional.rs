//! Linear-fractional programs and their Charnes–Cooper linearisation.

use super::simplex::{solve_lp, LinearProgram, LpOutcome, RowKind, Sense};
use crate::error::{Error, Result};

/// Lower bound imposed on the homogenising variable `t`.
pub const T_MIN: f64 = 1e-12;
/// Smallest accepted `t*` after solving.
pub const T_ACCEPT: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Maximize,
    Minimize,
}

impl Direction {
    pub fn sense(self) -> Sense {
        match self {
            Direction::Maximize => Sense::Maximize,
            Direction::Minimize => Sense::Minimize,
        }
    }
}

/// `optimize numerator . y / denominator . y` over a polyhedron given by
/// tagged rows and variable bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearFractionalProblem {
    pub numerator: Vec<f64>,
    pub denominator: Vec<f64>,
    pub rows: Vec<Vec<f64>>,
    pub kinds: Vec<RowKind>,
    pub rhs: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl LinearFractionalProblem {
    /// Problem over the box `[lower, upper]` with no further rows.
    pub fn new(numerator: Vec<f64>, denominator: Vec<f64>, lower: Vec<f64>, upper: Vec<f64>) -> Self {
        Self { numerator, denominator, rows: Vec::new(), kinds: Vec::new(), rhs: Vec::new(), lower, upper }
    }

    pub fn num_vars(&self) -> usize {
        self.numerator.len()
    }

    pub fn add_row(&mut self, coefficients: Vec<f64>, kind: RowKind, rhs: f64) {
        self.rows.push(coefficients);
        self.kinds.push(kind);
        self.rhs.push(rhs);
    }

    pub fn ratio(&self, y: &[f64]) -> f64 {
        let num: f64 = self.numerator.iter().zip(y).map(|(a, b)| a * b).sum();
        let den: f64 = self.denominator.iter().zip(y).map(|(a, b)| a * b).sum();
        num / den
    }

    /// The linear program `optimize objective . y` over the same polyhedron.
    pub fn linear_program(&self, sense: Sense, objective: Vec<f64>) -> LinearProgram {
        let mut lp = LinearProgram::new(sense, objective);
        lp.rows = self.rows.clone();
        lp.kinds = self.kinds.clone();
        lp.rhs = self.rhs.clone();
        lp.lower = self.lower.clone();
        lp.upper = self.upper.clone();
        lp
    }

    fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        if self.denominator.len() != n || self.lower.len() != n || self.upper.len() != n {
            return Err(Error::InvalidInput("fractional problem vectors must share one length".into()));
        }
        if self.numerator.iter().chain(&self.denominator).any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("ratio coefficients must be finite".into()));
        }
        Ok(())
    }
}

/// Charnes–Cooper LP in the variables `(z, t)`: optimize `numerator . z`
/// subject to `H z - b t (<=|=) 0`, `denominator . z = 1`, `t >= T_MIN`.
/// Finite bounds on `y` become rows `lower t - z <= 0` and `z - upper t <= 0`.
pub fn charnes_cooper(problem: &LinearFractionalProblem, direction: Direction) -> LinearProgram {
    let n = problem.num_vars();
    let mut objective = problem.numerator.clone();
    objective.push(0.0);
    let mut lp = LinearProgram::new(direction.sense(), objective);
    for j in 0..n {
        lp.set_bounds(j, f64::NEG_INFINITY, f64::INFINITY);
    }
    lp.set_bounds(n, T_MIN, f64::INFINITY);
    for (i, row) in problem.rows.iter().enumerate() {
        let mut r = row.clone();
        r.push(-problem.rhs[i]);
        lp.add_row(r, problem.kinds[i], 0.0);
    }
    for j in 0..n {
        if problem.lower[j].is_finite() {
            let mut r = vec![0.0; n + 1];
            r[j] = -1.0;
            r[n] = problem.lower[j];
            lp.add_row(r, RowKind::Le, 0.0);
        }
        if problem.upper[j].is_finite() {
            let mut r = vec![0.0; n + 1];
            r[j] = 1.0;
            r[n] = -problem.upper[j];
            lp.add_row(r, RowKind::Le, 0.0);
        }
    }
    let mut r = problem.denominator.clone();
    r.push(0.0);
    lp.add_row(r, RowKind::Eq, 1.0);
    lp
}

#[derive(Debug, Clone, PartialEq)]
pub struct FractionalSolution {
    pub y: Vec<f64>,
    pub value: f64,
    pub t: f64,
    /// Minimum of the denominator over the feasible set.
    pub min_denominator: f64,
    pub iterations: usize,
}

/// Minimum of `denominator . y` over the feasible set.
pub fn min_denominator(problem: &LinearFractionalProblem) -> Result<f64> {
    problem.validate()?;
    let lp = problem.linear_program(Sense::Minimize, problem.denominator.clone());
    match solve_lp(&lp)? {
        LpOutcome::Optimal(s) => Ok(s.value),
        LpOutcome::Infeasible => Err(Error::InfeasibleConstraints("feasible set is empty".into())),
        LpOutcome::Unbounded => Err(Error::DegenerateDenominator { min_value: f64::NEG_INFINITY }),
    }
}

/// Optimizes the ratio through the Charnes–Cooper LP and recovers `y = z / t`.
pub fn solve_fractional(problem: &LinearFractionalProblem, direction: Direction) -> Result<FractionalSolution> {
    let floor = min_denominator(problem)?;
    if floor <= 0.0 {
        return Err(Error::DegenerateDenominator { min_value: floor });
    }
    let mut s = solve_transformed(problem, direction)?;
    if s.t <= T_ACCEPT {
        return Err(Error::DegenerateDenominator { min_value: floor });
    }
    s.min_denominator = floor;
    Ok(s)
}

/// Solves the Charnes–Cooper LP without the denominator pre-check. A tiny
/// `t` in the result signals an optimum approached as the denominator
/// vanishes; `min_denominator` is left as NaN.
pub fn solve_transformed(problem: &LinearFractionalProblem, direction: Direction) -> Result<FractionalSolution> {
    problem.validate()?;
    let lp = charnes_cooper(problem, direction);
    let s = match solve_lp(&lp)? {
        LpOutcome::Optimal(s) => s,
        LpOutcome::Infeasible => {
            return Err(Error::InfeasibleConstraints("transformed program is infeasible".into()))
        }
        LpOutcome::Unbounded => return Err(Error::InvalidInput("ratio is unbounded on the feasible set".into())),
    };
    let n = problem.num_vars();
    let t = s.x[n];
    let y: Vec<f64> = s.x[..n]
        .iter()
        .enumerate()
        .map(|(j, &z)| (z / t).clamp(problem.lower[j], problem.upper[j]))
        .collect();
    Ok(FractionalSolution { y, value: s.value, t, min_denominator: f64::NAN, iterations: s.iterations })
}
