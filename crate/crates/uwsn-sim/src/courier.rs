//! Courier sojourn tours: band assignment per network phase, triangle-wave
//! kinematics, and buffered collection/delivery.

use crate::channel::tx_energy;
use crate::config::NetworkConfig;
use crate::model::{CourierNode, DataPacket, Heading};
use crate::routing::CourierPhase;
use thiserror::Error;

/// Sparse-phase deep band starts at this fraction of the water depth (355 m of 500 m).
const DEEP_BAND_TOP_FRACTION: f64 = 0.71;
/// Sparse-phase shallow band, as fractions of the water depth (100-200 m of 500 m).
const SHALLOW_BAND_FRACTIONS: (f64, f64) = (0.2, 0.4);

#[derive(Debug, Error, PartialEq)]
pub enum CourierError {
    #[error("start depth {depth} outside band [{top}, {bottom}]")]
    OutsideBand { depth: f64, top: f64, bottom: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BandKind {
    FullColumn,
    Deep,
    Shallow,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TourPlan {
    pub courier_index: usize,
    pub band_top: f64,
    pub band_bottom: f64,
    pub speed: f64,
    pub kind: BandKind,
}

/// Band and speed for a courier in the given phase. Initially every courier
/// tours the full column at base speed; in the sparse phase odd indices take
/// the deep band, even indices the shallow band, both at the higher speed.
pub fn tour_plan(courier_index: usize, phase: CourierPhase, config: &NetworkConfig) -> TourPlan {
    match phase {
        CourierPhase::Initial => TourPlan {
            courier_index,
            band_top: 0.0,
            band_bottom: config.water_depth,
            speed: config.courier_speed,
            kind: BandKind::FullColumn,
        },
        CourierPhase::Sparse => {
            let speed = config.courier_speed * config.courier_sparse_speed_multiplier;
            if courier_index % 2 == 1 {
                TourPlan {
                    courier_index,
                    band_top: DEEP_BAND_TOP_FRACTION * config.water_depth,
                    band_bottom: config.water_depth,
                    speed,
                    kind: BandKind::Deep,
                }
            } else {
                TourPlan {
                    courier_index,
                    band_top: SHALLOW_BAND_FRACTIONS.0 * config.water_depth,
                    band_bottom: SHALLOW_BAND_FRACTIONS.1 * config.water_depth,
                    speed,
                    kind: BandKind::Shallow,
                }
            }
        }
    }
}

/// Triangle-wave depth after `elapsed` seconds, reflecting at the band edges.
pub fn position_at(
    plan: &TourPlan,
    start_depth: f64,
    start_heading: Heading,
    elapsed: f64,
) -> Result<(f64, Heading), CourierError> {
    let (top, bottom) = (plan.band_top, plan.band_bottom);
    if start_depth < top || start_depth > bottom {
        return Err(CourierError::OutsideBand {
            depth: start_depth,
            top,
            bottom,
        });
    }
    let len = bottom - top;
    let period = 2.0 * len;
    // cycle coordinate: [0, len) descending, [len, 2 len) ascending
    let c0 = match start_heading {
        Heading::Down => start_depth - top,
        Heading::Up => period - (start_depth - top),
    };
    let c = (c0 + plan.speed * elapsed).rem_euclid(period);
    if c < len {
        Ok((top + c, Heading::Down))
    } else {
        Ok((top + (period - c), Heading::Up))
    }
}

/// Append a packet to the courier buffer, idempotent on packet id.
pub fn courier_collect(courier: &mut CourierNode, packet: DataPacket) {
    if !courier.holds(packet.packet_id) {
        courier.buffer.push(packet);
    }
}

/// Drain the buffer as one aggregated sink delivery. Returns the delivered
/// packets and the transmission energy to charge to the courier ledger
/// (scaled by the aggregation factor; `power_multiplier` is 2.0 for the
/// long-range sparse-phase delivery, 1.0 otherwise).
pub fn courier_deliver(
    courier: &mut CourierNode,
    now: f64,
    power_multiplier: f64,
    config: &NetworkConfig,
) -> (Vec<DataPacket>, f64) {
    if courier.buffer.is_empty() {
        return (Vec::new(), 0.0);
    }
    let mut delivered = std::mem::take(&mut courier.buffer);
    for p in &mut delivered {
        p.delivered_time = Some(now);
    }
    let energy = config.aggregation_factor
        * delivered.len() as f64
        * power_multiplier
        * tx_energy(config.packet_payload, config);
    (delivered, energy)
}
