//! Endpoint lattice and the share constraints it supports.

use super::data::Scenario2Data;
use crate::error::Result;
use crate::types::IntervalObservation;

#[derive(Debug, Clone, PartialEq)]
pub struct EndpointLattice {
    /// Sorted unique interval endpoints.
    pub b: Vec<f64>,
    /// Sorted unique union of `b` and point values.
    pub u: Vec<f64>,
    /// Position of each `b[d]` within `u`.
    pub b_in_u: Vec<usize>,
}

impl EndpointLattice {
    pub fn from_data(data: &Scenario2Data) -> Self {
        let mut b: Vec<f64> = data.intervals.iter().flat_map(|q| [q.lower, q.upper]).collect();
        b.sort_by(f64::total_cmp);
        b.dedup();
        let mut u: Vec<f64> = b.iter().copied().chain(data.points.iter().map(|p| p.value)).collect();
        u.sort_by(f64::total_cmp);
        u.dedup();
        let b_in_u = b.iter().map(|v| u.binary_search_by(|x| x.total_cmp(v)).expect("b is inside u")).collect();
        Self { b, u, b_in_u }
    }

    pub fn position(&self, value: f64) -> Option<usize> {
        self.u.binary_search_by(|x| x.total_cmp(&value)).ok()
    }

    pub fn in_b(&self, value: f64) -> bool {
        self.b.binary_search_by(|x| x.total_cmp(&value)).is_ok()
    }
}

pub fn build_lattice(data: &[IntervalObservation]) -> Result<EndpointLattice> {
    Ok(EndpointLattice::from_data(&Scenario2Data::from_observations(data)?))
}

/// Share restriction for the block `[b[start], b[end]]`:
/// `lower <= sum of phi over members <= upper`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShareBlock {
    pub start: usize,
    pub end: usize,
    /// Lattice positions in `u` lying inside the block.
    pub members: Vec<usize>,
    pub lower: f64,
    pub upper: f64,
}

/// Known point shares `psi` and the polytope of unknown interval shares
/// `phi` on the lattice `u`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShareSystem {
    pub u: Vec<f64>,
    pub psi: Vec<f64>,
    pub blocks: Vec<ShareBlock>,
    /// `sum phi = total`.
    pub total: f64,
    /// Positions covered by at least one interval; `phi` vanishes elsewhere.
    pub covered: Vec<bool>,
}

impl ShareSystem {
    /// Two inequality rows per block plus the total-mass equality.
    pub fn num_rows(&self) -> usize {
        2 * self.blocks.len() + 1
    }

    pub fn max_violation(&self, phi: &[f64]) -> f64 {
        let mut worst = (phi.iter().sum::<f64>() - self.total).abs();
        for (k, &v) in phi.iter().enumerate() {
            worst = worst.max(-v);
            if !self.covered[k] {
                worst = worst.max(v.abs());
            }
        }
        for blk in &self.blocks {
            let s: f64 = blk.members.iter().map(|&k| phi[k]).sum();
            worst = worst.max(blk.lower - s).max(s - blk.upper);
        }
        worst
    }
}

pub fn build_share_system(data: &Scenario2Data, lattice: &EndpointLattice) -> ShareSystem {
    let total_weight = data.total_weight();
    let ku = lattice.u.len();
    let mut psi = vec![0.0; ku];
    for p in &data.points {
        psi[lattice.position(p.value).expect("points lie on the lattice")] += p.weight / total_weight;
    }
    let covered = lattice
        .u
        .iter()
        .map(|&v| data.intervals.iter().any(|q| q.lower <= v && v <= q.upper))
        .collect();
    let k = lattice.b.len();
    let mut blocks = Vec::with_capacity(k * k.saturating_sub(1) / 2);
    for start in 0..k {
        for end in start + 1..k {
            let (lo, hi) = (lattice.b[start], lattice.b[end]);
            let members = (lattice.b_in_u[start]..=lattice.b_in_u[end]).collect();
            let (mut inside, mut touching) = (0.0, 0.0);
            for q in &data.intervals {
                if lo <= q.lower && q.upper <= hi {
                    inside += q.weight;
                }
                if q.lower <= hi && q.upper >= lo {
                    touching += q.weight;
                }
            }
            blocks.push(ShareBlock {
                start,
                end,
                members,
                lower: inside / total_weight,
                upper: touching / total_weight,
            });
        }
    }
    ShareSystem {
        u: lattice.u.clone(),
        psi,
        blocks,
        total: data.intervals.iter().map(|q| q.weight).sum::<f64>() / total_weight,
        covered,
    }
}
