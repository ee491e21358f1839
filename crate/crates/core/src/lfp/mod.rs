//! Linear and linear-fractional programming.

mod dinkelbach;
mod fractional;
mod simplex;

pub use dinkelbach::{dinkelbach_bisect, DinkelbachOracle, DinkelbachResult, DEFAULT_EPSILON};
pub use fractional::{
    charnes_cooper, min_denominator, solve_fractional, solve_transformed, Direction, FractionalSolution, LinearFractionalProblem,
    T_ACCEPT, T_MIN,
};
pub use simplex::{solve_lp, LinearProgram, LpOutcome, LpSolution, RowKind, Sense};
