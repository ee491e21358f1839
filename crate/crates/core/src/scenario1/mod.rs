//! Bounds for grouped tables, with and without linear side information.

mod corner;
mod polyhedron;
mod quantile;

pub use corner::{
    build_gini_form, gini_bounds_from_shares, gini_form_from_shares, gini_bounds_1a, gini_bounds_1a_dinkelbach, gini_bounds_1a_dinkelbach_default, CornerAllocation,
    GiniQuadraticForm, Relaxation,
};
pub use polyhedron::{bounds_1b, hoover_bounds, linearize, LinearRow};
pub use quantile::quantile_ratio_bounds_1a;
