//! Random topology generation: uniform sensor placement, surface sinks on the
//! centerline, couriers starting at the bottom.

use crate::config::{ConfigError, NetworkConfig};
use crate::model::{CourierNode, Heading, NodeId, Position, SensorNode, Sink};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Courier ids start here so they never collide with sensor ids.
pub const COURIER_ID_BASE: NodeId = 1_000_000;
/// Sink ids start here.
pub const SINK_ID_BASE: NodeId = 2_000_000;

pub fn generate_topology(
    config: &NetworkConfig,
    seed: u64,
) -> Result<(Vec<SensorNode>, Vec<Sink>, Vec<CourierNode>), ConfigError> {
    config.validate()?;
    if config.sink_count as f64 * config.sink_spacing > config.region_x {
        return Err(ConfigError::Invariant(format!(
            "{} sinks at {} m spacing do not fit in region_x = {} m",
            config.sink_count, config.sink_spacing, config.region_x
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nodes = (0..config.node_count)
        .map(|i| {
            let pos = Position::new(
                rng.random::<f64>() * config.region_x,
                rng.random::<f64>() * config.region_y,
                rng.random::<f64>() * config.water_depth,
            );
            SensorNode::new(i as NodeId, pos, config.initial_energy)
        })
        .collect();

    let sinks = (0..config.sink_count)
        .map(|k| Sink {
            id: SINK_ID_BASE + k as NodeId,
            position: Position::new(
                config.sink_spacing / 2.0 + k as f64 * config.sink_spacing,
                config.region_y / 2.0,
                0.0,
            ),
        })
        .collect();

    let couriers = (0..config.courier_count)
        .map(|k| {
            let x = config.region_x * (k as f64 + 0.5) / config.courier_count as f64;
            // stagger tour columns off the sink centerline so together they
            // cover more of the region, while staying in sink range at the surface
            let y = if k % 2 == 0 {
                config.region_y / 3.0
            } else {
                2.0 * config.region_y / 3.0
            };
            CourierNode {
                id: COURIER_ID_BASE + k as NodeId,
                index: k + 1,
                position: Position::new(x, y, config.water_depth),
                speed: config.courier_speed,
                band_top: 0.0,
                band_bottom: config.water_depth,
                heading: Heading::Up,
                buffer: Vec::new(),
            }
        })
        .collect();

    Ok((nodes, sinks, couriers))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_one_topology_in_bounds() {
        let c = NetworkConfig::default();
        let (nodes, sinks, couriers) = generate_topology(&c, 42).unwrap();
        assert_eq!(nodes.len(), 225);
        for n in &nodes {
            assert!((0.0..=500.0).contains(&n.position.x));
            assert!((0.0..=500.0).contains(&n.position.y));
            assert!((0.0..=500.0).contains(&n.position.depth));
            assert_eq!(n.residual_energy, 70.0);
            assert!(n.alive);
        }
        assert_eq!(sinks.len(), 5);
        let xs: Vec<f64> = sinks.iter().map(|s| s.position.x).collect();
        assert_eq!(xs, vec![50.0, 150.0, 250.0, 350.0, 450.0]);
        for s in &sinks {
            assert_eq!(s.position.depth, 0.0);
        }
        assert_eq!(couriers.len(), 4);
        for c in &couriers {
            assert_eq!(c.position.depth, 500.0);
        }
    }

    #[test]
    fn single_node_topology() {
        let mut c = NetworkConfig::default();
        c.node_count = 1;
        let (nodes, _, _) = generate_topology(&c, 9).unwrap();
        assert_eq!(nodes.len(), 1);
    }

    #[test]
    fn same_seed_reproduces_identical_placement() {
        let c = NetworkConfig::default();
        let (a, _, _) = generate_topology(&c, 42).unwrap();
        let (b, _, _) = generate_topology(&c, 42).unwrap();
        let ser = |nodes: &[SensorNode]| {
            nodes
                .iter()
                .map(|n| format!("{:?}", n.position))
                .collect::<Vec<_>>()
                .join(";")
        };
        assert_eq!(ser(&a), ser(&b));
        let (d, _, _) = generate_topology(&c, 43).unwrap();
        assert_ne!(ser(&a), ser(&d));
    }

    #[test]
    fn sinks_must_fit_region() {
        let mut c = NetworkConfig::default();
        c.sink_count = 6;
        assert!(generate_topology(&c, 1).is_err());
    }

    #[test]
    fn energy_sum_and_mean_depth_sanity() {
        let c = NetworkConfig::default();
        let (nodes, _, _) = generate_topology(&c, 123).unwrap();
        let total: f64 = nodes.iter().map(|n| n.residual_energy).sum();
        assert!((total - 225.0 * 70.0).abs() < 1e-9);
        let mean_depth: f64 =
            nodes.iter().map(|n| n.position.depth).sum::<f64>() / nodes.len() as f64;
        let expected = c.water_depth / 2.0;
        assert!(
            (mean_depth - expected).abs() <= 0.1 * expected,
            "mean depth {mean_depth}"
        );
    }
}
