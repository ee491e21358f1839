//! Gini bounds for micro data where each unit reports a point or an interval.

pub mod data;
pub mod lattice;
pub mod shares;
pub mod threshold;

pub use data::{IntervalGroup, PointGroup, Scenario2Data};
pub use lattice::{build_lattice, build_share_system, EndpointLattice, ShareBlock, ShareSystem};
pub use shares::{gini_bounds_2_shares, gini_bounds_2_shares_data, kernel_quadratic, ShareBounds};
pub use threshold::{
    gini_bounds_2, gini_bounds_2_data, gini_max_threshold, gini_min_threshold, ThresholdOutcome,
    DEFAULT_ENUMERATION_BUDGET,
};
