//! AMCTD adaptive state machine: weight regimes, depth-threshold schedule,
//! forwarder selection, holding time, and duplicate/ACK suppression.

use crate::config::NetworkConfig;
use crate::model::{NeighborEntry, NodeId, Position};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Eq1,
    Eq2,
    Eq3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CourierPhase {
    Initial,
    Sparse,
}

/// Absolute dead-node count at which the depth threshold drops to its final value.
pub const ABSOLUTE_DEAD_FOR_FINAL_THRESHOLD: usize = 200;

/// Network-wide adaptive state, recomputed from the sink's dead-node snapshot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolState {
    pub regime: Regime,
    pub depth_threshold: f64,
    pub dead_count: usize,
    pub total_nodes: usize,
    pub courier_phase: CourierPhase,
}

fn ceil_percent(total: usize, percent: usize) -> usize {
    (total * percent).div_ceil(100)
}

impl ProtocolState {
    pub fn initial(total_nodes: usize, config: &NetworkConfig) -> Self {
        update_state(0, total_nodes, config)
    }
}

/// Recompute (regime, depth threshold, courier phase) from the dead count.
/// The weight formula switches at 2% and 80% dead, the threshold drops at 2%
/// dead and again past 200 dead nodes, and couriers go sparse at 75% dead.
pub fn update_state(dead_count: usize, total_nodes: usize, config: &NetworkConfig) -> ProtocolState {
    let two_pct = ceil_percent(total_nodes, 2);
    let eighty_pct = ceil_percent(total_nodes, 80);
    let seventy_five_pct = ceil_percent(total_nodes, 75);
    let [t0, t1, t2] = config.depth_threshold_schedule;

    let regime = if dead_count < two_pct {
        Regime::Eq1
    } else if dead_count < eighty_pct {
        Regime::Eq2
    } else {
        Regime::Eq3
    };
    let depth_threshold = if dead_count < two_pct {
        t0
    } else if dead_count <= ABSOLUTE_DEAD_FOR_FINAL_THRESHOLD {
        t1
    } else {
        t2
    };
    let courier_phase = if dead_count >= seventy_five_pct {
        CourierPhase::Sparse
    } else {
        CourierPhase::Initial
    };
    ProtocolState {
        regime,
        depth_threshold,
        dead_count,
        total_nodes,
        courier_phase,
    }
}

/// Forwarder-priority weight under the active regime. Denominators are clamped
/// below by 1e-6 of their natural scale so surface-adjacent or nearly-dead
/// nodes get large but finite weights.
pub fn weight(residual_energy: f64, depth: f64, regime: Regime, config: &NetworkConfig) -> f64 {
    let p = config.priority_value;
    let eps_depth = 1e-6 * config.water_depth;
    let eps_energy = 1e-6 * config.initial_energy.max(f64::MIN_POSITIVE);
    match regime {
        Regime::Eq1 => p * residual_energy / (config.water_depth - depth).max(eps_depth),
        Regime::Eq2 => {
            if config.eq2_as_printed {
                p * depth / residual_energy.max(eps_energy)
            } else {
                p * residual_energy / depth.max(eps_depth)
            }
        }
        Regime::Eq3 => residual_energy / (p * depth.max(eps_depth)),
    }
}

/// Threshold-based candidate set: neighbors shallower than the source by at
/// least the depth threshold, plus every in-range courier entry. Sorted by
/// descending weight (id ascending on ties) so the best candidate is first.
pub fn eligible_neighbors(
    source_depth: f64,
    table: &[NeighborEntry],
    state: &ProtocolState,
) -> Vec<NeighborEntry> {
    let mut out: Vec<NeighborEntry> = table
        .iter()
        .filter(|e| e.is_courier || source_depth - e.depth >= state.depth_threshold)
        .cloned()
        .collect();
    out.sort_by(|a, b| {
        b.weight
            .total_cmp(&a.weight)
            .then_with(|| a.id.cmp(&b.id))
    });
    out
}

/// Highest-weight candidate wins; couriers take absolute precedence (nearest
/// first). Weight ties break to the larger residual energy, then lower id.
pub fn select_forwarder(candidates: &[NeighborEntry]) -> Option<NodeId> {
    if let Some(courier) = candidates
        .iter()
        .filter(|e| e.is_courier)
        .min_by(|a, b| a.distance.total_cmp(&b.distance).then_with(|| a.id.cmp(&b.id)))
    {
        return Some(courier.id);
    }
    candidates
        .iter()
        .max_by(|a, b| {
            a.weight
                .total_cmp(&b.weight)
                .then_with(|| a.residual_energy.total_cmp(&b.residual_energy))
                .then_with(|| b.id.cmp(&a.id))
        })
        .map(|e| e.id)
}

/// Contention timer: the best candidate fires immediately, the worst waits
/// t_max_holding, linear in between.
pub fn holding_time(own_weight: f64, candidate_weights: &[f64], config: &NetworkConfig) -> f64 {
    let w_max = candidate_weights.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let w_min = candidate_weights.iter().copied().fold(f64::INFINITY, f64::min);
    if w_max > w_min {
        config.t_max_holding * (w_max - own_weight) / (w_max - w_min)
    } else {
        0.0
    }
}

/// A holder cancels its pending retransmission when it overhears the same packet.
pub fn suppress_on_overheard(pending_packet_id: u64, overheard_packet_id: u64) -> bool {
    pending_packet_id == overheard_packet_id
}

/// A node still holding a contention timer for some packet.
#[derive(Debug, Clone)]
pub struct PendingHolder {
    pub id: NodeId,
    pub position: Position,
    pub packet_id: u64,
    pub source_id: NodeId,
}

/// Courier ACK: every in-range holder with a matching (packet_id, source_id)
/// pending packet cancels its timer. Returns cancelled holder ids.
pub fn courier_ack_suppression(
    packet_id: u64,
    source_id: NodeId,
    courier_position: &Position,
    holders: &[PendingHolder],
    config: &NetworkConfig,
) -> Vec<NodeId> {
    holders
        .iter()
        .filter(|h| {
            h.packet_id == packet_id
                && h.source_id == source_id
                && h.position.distance(courier_position) <= config.tx_range
        })
        .map(|h| h.id)
        .collect()
}

/// Outcome of one holding-timer contention among candidates in mutual range.
#[derive(Debug, Clone, PartialEq)]
pub struct ContentionOutcome {
    pub forwarder: Option<NodeId>,
    /// Sensor retransmissions that actually happened (couriers ACK instead).
    pub sensor_transmissions: usize,
    pub cancelled: Vec<NodeId>,
}

/// Play out the holding-timer contention for one broadcast packet whose
/// candidates are all within mutual range. A courier candidate ACKs on
/// reception and cancels every sensor timer; otherwise the candidate whose
/// timer fires first retransmits and the rest overhear and cancel.
pub fn resolve_contention(
    packet_id: u64,
    candidates: &[NeighborEntry],
    config: &NetworkConfig,
) -> ContentionOutcome {
    if candidates.is_empty() {
        return ContentionOutcome {
            forwarder: None,
            sensor_transmissions: 0,
            cancelled: Vec::new(),
        };
    }
    if let Some(courier_id) = select_forwarder(candidates).filter(|id| {
        candidates.iter().any(|e| e.id == *id && e.is_courier)
    }) {
        // courier ACK reaches every holder in mutual range
        return ContentionOutcome {
            forwarder: Some(courier_id),
            sensor_transmissions: 0,
            cancelled: candidates.iter().filter(|e| !e.is_courier).map(|e| e.id).collect(),
        };
    }
    let weights: Vec<f64> = candidates.iter().map(|e| e.weight).collect();
    let mut timers: Vec<(f64, &NeighborEntry)> = candidates
        .iter()
        .map(|e| (holding_time(e.weight, &weights, config), e))
        .collect();
    timers.sort_by(|a, b| {
        a.0.total_cmp(&b.0)
            .then_with(|| b.1.residual_energy.total_cmp(&a.1.residual_energy))
            .then_with(|| a.1.id.cmp(&b.1.id))
    });
    let winner = timers[0].1.id;
    let cancelled = timers[1..]
        .iter()
        .filter(|(_, e)| suppress_on_overheard(packet_id, packet_id) && e.id != winner)
        .map(|(_, e)| e.id)
        .collect();
    ContentionOutcome {
        forwarder: Some(winner),
        sensor_transmissions: 1,
        cancelled,
    }
}
