//! Minimal DBR and EEDBR forwarding policies for the comparative experiments.
//! Both keep a fixed depth threshold and ignore courier nodes entirely.

use crate::model::{NeighborEntry, NodeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaselineKind {
    Dbr,
    Eedbr,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaselinePolicy {
    pub kind: BaselineKind,
    pub depth_threshold: f64,
    pub t_max_holding: f64,
}

impl BaselinePolicy {
    pub fn new(kind: BaselineKind) -> Self {
        BaselinePolicy {
            kind,
            depth_threshold: 60.0,
            t_max_holding: 0.5,
        }
    }
}

/// DBR: forward iff the candidate is shallower by at least the threshold.
pub fn dbr_forward_decision(
    source_depth: f64,
    candidate_depth: f64,
    policy: &BaselinePolicy,
) -> bool {
    source_depth - candidate_depth >= policy.depth_threshold
}

/// DBR holding time: deeper progress fires earlier.
pub fn dbr_holding_time(depth_delta: f64, tx_range: f64, policy: &BaselinePolicy) -> f64 {
    (policy.t_max_holding * (1.0 - depth_delta / tx_range)).clamp(0.0, policy.t_max_holding)
}

/// DBR winner among eligible candidates: maximal depth progress (shallowest
/// candidate), ties to the lower id.
pub fn dbr_select(candidates: &[NeighborEntry]) -> Option<NodeId> {
    candidates
        .iter()
        .min_by(|a, b| a.depth.total_cmp(&b.depth).then_with(|| a.id.cmp(&b.id)))
        .map(|e| e.id)
}

/// EEDBR winner: maximal residual energy, ties to the smaller depth, then lower id.
pub fn eedbr_select(candidates: &[NeighborEntry]) -> Option<NodeId> {
    candidates
        .iter()
        .max_by(|a, b| {
            a.residual_energy
                .total_cmp(&b.residual_energy)
                .then_with(|| b.depth.total_cmp(&a.depth))
                .then_with(|| b.id.cmp(&a.id))
        })
        .map(|e| e.id)
}

/// EEDBR holding time: linear-decreasing in residual energy over the candidate set.
pub fn eedbr_holding_time(
    own_residual: f64,
    candidate_residuals: &[f64],
    policy: &BaselinePolicy,
) -> f64 {
    let max = candidate_residuals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = candidate_residuals.iter().copied().fold(f64::INFINITY, f64::min);
    if max > min {
        policy.t_max_holding * (max - own_residual) / (max - min)
    } else {
        0.0
    }
}
