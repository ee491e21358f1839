//! Dyadic bisection on the Dinkelbach parametric value `f(lambda)`.
//!
//! For `max r1.y / r2.y` the parametric value is
//! `f(lambda) = max_y (r1 - lambda r2).y`, and for the minimum it is the
//! corresponding `min`. Both are decreasing in `lambda` with the ratio's
//! optimum as their unique root.

use super::fractional::Direction;
use crate::error::{Error, Result};

pub const DEFAULT_EPSILON: f64 = 1e-6;

pub struct DinkelbachOracle<F> {
    pub f: F,
    pub direction: Direction,
    pub lo: f64,
    pub hi: f64,
    pub epsilon: f64,
}

impl<F: FnMut(f64) -> Result<f64>> DinkelbachOracle<F> {
    /// Oracle on the unit bracket with the default tolerance.
    pub fn unit(f: F, direction: Direction) -> Self {
        Self { f, direction, lo: 0.0, hi: 1.0, epsilon: DEFAULT_EPSILON }
    }

    pub fn iteration_cap(&self) -> usize {
        ((self.hi - self.lo) / self.epsilon).log2().ceil().max(0.0) as usize + 8
    }

    fn stops(&self, v: f64) -> bool {
        match self.direction {
            Direction::Maximize => v <= 0.0 && v > -self.epsilon,
            Direction::Minimize => v <= 0.0 && v >= -self.epsilon,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DinkelbachResult {
    pub lambda: f64,
    pub value: f64,
    pub iterations: usize,
    /// Bracket `[a, b]` after each evaluation at a midpoint.
    pub trace: Vec<(f64, f64)>,
}

pub fn dinkelbach_bisect<F: FnMut(f64) -> Result<f64>>(mut oracle: DinkelbachOracle<F>) -> Result<DinkelbachResult> {
    if !(oracle.lo < oracle.hi) || !(oracle.epsilon > 0.0) {
        return Err(Error::InvalidInput("bisection needs lo < hi and a positive tolerance".into()));
    }
    let f_lo = (oracle.f)(oracle.lo)?;
    let f_hi = (oracle.f)(oracle.hi)?;
    if f_lo < 0.0 || f_hi > 0.0 || f_lo.is_nan() || f_hi.is_nan() {
        return Err(Error::BracketViolation { f_lo, f_hi });
    }
    if f_lo == 0.0 {
        return Ok(DinkelbachResult { lambda: oracle.lo, value: 0.0, iterations: 0, trace: Vec::new() });
    }
    if f_hi == 0.0 {
        return Ok(DinkelbachResult { lambda: oracle.hi, value: 0.0, iterations: 0, trace: Vec::new() });
    }
    let cap = oracle.iteration_cap();
    let (mut a, mut b) = (oracle.lo, oracle.hi);
    let mut trace = Vec::new();
    for i in 1..=cap {
        let lambda = a + (b - a) / 2.0;
        let v = (oracle.f)(lambda)?;
        if v > 0.0 {
            a = lambda;
        } else {
            b = lambda;
        }
        trace.push((a, b));
        if oracle.stops(v) {
            return Ok(DinkelbachResult { lambda, value: v, iterations: i, trace });
        }
    }
    Err(Error::Stalled { iterations: cap })
}
