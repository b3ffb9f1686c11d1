//! Core domain types shared by the routing policies and the engine.

pub type NodeId = u32;

/// 3-D position; `depth` grows downward, 0 is the water surface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Position {
    pub x: f64,
    pub y: f64,
    pub depth: f64,
}

impl Position {
    pub fn new(x: f64, y: f64, depth: f64) -> Self {
        Position { x, y, depth }
    }

    pub fn distance(&self, other: &Position) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        let dz = self.depth - other.depth;
        (dx * dx + dy * dy + dz * dz).sqrt()
    }
}

/// Neighbor-table entry, refreshed by the hello cycle.
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborEntry {
    pub id: NodeId,
    pub depth: f64,
    pub weight: f64,
    pub residual_energy: f64,
    pub distance: f64,
    pub last_heard_round: u64,
    pub is_courier: bool,
}

#[derive(Debug, Clone)]
pub struct SensorNode {
    pub id: NodeId,
    pub position: Position,
    pub residual_energy: f64,
    pub weight: f64,
    pub alive: bool,
    pub neighbor_table: Vec<NeighborEntry>,
    /// Neighbor ids that satisfy the current depth threshold (shallower by >= dth).
    pub threshold_queue: Vec<NodeId>,
}

impl SensorNode {
    pub fn new(id: NodeId, position: Position, energy: f64) -> Self {
        SensorNode {
            id,
            position,
            residual_energy: energy,
            weight: 0.0,
            alive: true,
            neighbor_table: Vec::new(),
            threshold_queue: Vec::new(),
        }
    }

    pub fn depth(&self) -> f64 {
        self.position.depth
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Heading {
    Up,
    Down,
}

/// Mobile collector with unlimited energy; tours vertically, buffers packets.
#[derive(Debug, Clone)]
pub struct CourierNode {
    pub id: NodeId,
    /// 1-based ordinal used by the sparse-phase band assignment.
    pub index: usize,
    pub position: Position,
    pub speed: f64,
    pub band_top: f64,
    pub band_bottom: f64,
    pub heading: Heading,
    pub buffer: Vec<DataPacket>,
}

impl CourierNode {
    pub fn holds(&self, packet_id: u64) -> bool {
        self.buffer.iter().any(|p| p.packet_id == packet_id)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DataPacket {
    pub packet_id: u64,
    pub source_id: NodeId,
    pub payload_size: u32,
    pub created_round: u64,
    pub created_time: f64,
    pub hop_count: u32,
    pub delivered_time: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sink {
    pub id: NodeId,
    pub position: Position,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distance_is_euclidean() {
        let a = Position::new(0.0, 0.0, 0.0);
        let b = Position::new(3.0, 4.0, 0.0);
        assert_eq!(a.distance(&b), 5.0);
        assert_eq!(a.distance(&a), 0.0);
    }

    #[test]
    fn courier_holds_by_packet_id() {
        let mut c = CourierNode {
            id: 1000,
            index: 1,
            position: Position::new(0.0, 0.0, 500.0),
            speed: 3.0,
            band_top: 0.0,
            band_bottom: 500.0,
            heading: Heading::Up,
            buffer: Vec::new(),
        };
        assert!(!c.holds(7));
        c.buffer.push(DataPacket {
            packet_id: 7,
            source_id: 3,
            payload_size: 50,
            created_round: 1,
            created_time: 0.0,
            hop_count: 1,
            delivered_time: None,
        });
        assert!(c.holds(7));
    }
}
