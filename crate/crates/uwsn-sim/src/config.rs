//! Network configuration and the flat `key = value` config file format.

use std::fmt;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("failed to read config file {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("config line {line}: expected `key = value`, got `{text}`")]
    Malformed { line: usize, text: String },
    #[error("unknown config key `{key}`")]
    UnknownKey { key: String },
    #[error("invalid value for `{key}`: `{value}` ({reason})")]
    InvalidValue {
        key: String,
        value: String,
        reason: String,
    },
    #[error("config invariant violated: {0}")]
    Invariant(String),
}

/// Whole-simulation parameter set. Defaults reproduce the Table-1 scenario:
/// 225 nodes in a 500m x 500m x 500m volume, 70 J initial energy, 50-byte
/// packets, 100 m acoustic range, 4 courier nodes, 5 surface sinks 100 m apart.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkConfig {
    pub region_x: f64,
    pub region_y: f64,
    pub water_depth: f64,
    pub node_count: usize,
    pub initial_energy: f64,
    pub packet_payload: u32,
    pub tx_range: f64,
    pub courier_count: usize,
    pub sink_spacing: f64,
    pub sink_count: usize,
    pub priority_value: f64,
    pub tx_power: f64,
    pub rx_power: f64,
    pub idle_power: f64,
    pub bitrate: f64,
    pub sound_speed: f64,
    pub rounds_max: u64,
    pub hello_interval_rounds: u64,
    pub aggregation_factor: f64,
    pub run_count: usize,
    pub rng_seed: u64,
    /// Loss-model base probability: p(d) = loss_base * d / tx_range.
    pub loss_base: f64,
    /// Maximum holding time for the forwarder contention timer.
    pub t_max_holding: f64,
    pub hello_payload: u32,
    /// Depth thresholds for the three density stages, shallowest-first.
    pub depth_threshold_schedule: [f64; 3],
    /// Use the second weight formula exactly as printed (deeper nodes heavier).
    pub eq2_as_printed: bool,
    pub courier_speed: f64,
    pub courier_sparse_speed_multiplier: f64,
    pub courier_relay: bool,
}

impl Default for NetworkConfig {
    fn default() -> Self {
        NetworkConfig {
            region_x: 500.0,
            region_y: 500.0,
            water_depth: 500.0,
            node_count: 225,
            initial_energy: 70.0,
            packet_payload: 50,
            tx_range: 100.0,
            courier_count: 4,
            sink_spacing: 100.0,
            sink_count: 5,
            priority_value: 1.0,
            tx_power: 2.0,
            rx_power: 0.1,
            idle_power: 0.01,
            bitrate: 10_000.0,
            sound_speed: 1500.0,
            rounds_max: 15_000,
            hello_interval_rounds: 50,
            aggregation_factor: 0.6,
            run_count: 3,
            rng_seed: 42,
            loss_base: 0.1,
            t_max_holding: 0.5,
            hello_payload: 8,
            depth_threshold_schedule: [60.0, 40.0, 20.0],
            eq2_as_printed: true,
            courier_speed: 3.0,
            courier_sparse_speed_multiplier: 2.0,
            courier_relay: true,
        }
    }
}

impl NetworkConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let positive = [
            ("region_x", self.region_x),
            ("region_y", self.region_y),
            ("water_depth", self.water_depth),
            ("tx_range", self.tx_range),
            ("bitrate", self.bitrate),
            ("sound_speed", self.sound_speed),
            ("priority_value", self.priority_value),
        ];
        for (name, v) in positive {
            if !(v > 0.0) {
                return Err(ConfigError::Invariant(format!("{name} must be > 0, got {v}")));
            }
        }
        if !(self.aggregation_factor > 0.0 && self.aggregation_factor <= 1.0) {
            return Err(ConfigError::Invariant(format!(
                "aggregation_factor must be in (0,1], got {}",
                self.aggregation_factor
            )));
        }
        if self.node_count < 1 {
            return Err(ConfigError::Invariant("node_count must be >= 1".into()));
        }
        if self.sink_count < 1 {
            return Err(ConfigError::Invariant("sink_count must be >= 1".into()));
        }
        if self.initial_energy < 0.0
            || self.tx_power < 0.0
            || self.rx_power < 0.0
            || self.idle_power < 0.0
        {
            return Err(ConfigError::Invariant("powers and energy must be nonnegative".into()));
        }
        if !(self.loss_base >= 0.0 && self.loss_base <= 1.0) {
            return Err(ConfigError::Invariant(format!(
                "loss_base must be in [0,1], got {}",
                self.loss_base
            )));
        }
        if self.t_max_holding < 0.0 {
            return Err(ConfigError::Invariant("t_max_holding must be >= 0".into()));
        }
        let [a, b, c] = self.depth_threshold_schedule;
        if !(a > 0.0 && b > 0.0 && c > 0.0) {
            return Err(ConfigError::Invariant("depth thresholds must be > 0".into()));
        }
        if self.courier_speed <= 0.0 || self.courier_sparse_speed_multiplier <= 0.0 {
            return Err(ConfigError::Invariant("courier speeds must be > 0".into()));
        }
        Ok(())
    }

    /// Apply one `key = value` override. Unknown keys and malformed values are errors.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        fn num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, ConfigError>
        where
            T::Err: fmt::Display,
        {
            value.trim().parse().map_err(|e: T::Err| ConfigError::InvalidValue {
                key: key.into(),
                value: value.into(),
                reason: e.to_string(),
            })
        }
        fn flag(key: &str, value: &str) -> Result<bool, ConfigError> {
            match value.trim() {
                "on" | "true" | "1" => Ok(true),
                "off" | "false" | "0" => Ok(false),
                other => Err(ConfigError::InvalidValue {
                    key: key.into(),
                    value: other.into(),
                    reason: "expected on/off or true/false".into(),
                }),
            }
        }
        match key {
            "region_x" => self.region_x = num(key, value)?,
            "region_y" => self.region_y = num(key, value)?,
            "water_depth" => self.water_depth = num(key, value)?,
            "node_count" => self.node_count = num(key, value)?,
            "initial_energy" => self.initial_energy = num(key, value)?,
            "packet_payload" => self.packet_payload = num(key, value)?,
            "tx_range" => self.tx_range = num(key, value)?,
            "courier_count" => self.courier_count = num(key, value)?,
            "sink_spacing" => self.sink_spacing = num(key, value)?,
            "sink_count" => self.sink_count = num(key, value)?,
            "priority_value" => self.priority_value = num(key, value)?,
            "tx_power" => self.tx_power = num(key, value)?,
            "rx_power" => self.rx_power = num(key, value)?,
            "idle_power" => self.idle_power = num(key, value)?,
            "bitrate" => self.bitrate = num(key, value)?,
            "sound_speed" => self.sound_speed = num(key, value)?,
            "rounds_max" => self.rounds_max = num(key, value)?,
            "hello_interval_rounds" => self.hello_interval_rounds = num(key, value)?,
            "aggregation_factor" => self.aggregation_factor = num(key, value)?,
            "run_count" => self.run_count = num(key, value)?,
            "rng_seed" => self.rng_seed = num(key, value)?,
            "loss_base" => self.loss_base = num(key, value)?,
            "t_max_holding" => self.t_max_holding = num(key, value)?,
            "hello_payload" => self.hello_payload = num(key, value)?,
            "depth_threshold_schedule" => {
                let parts: Vec<&str> = value.split(',').map(str::trim).collect();
                if parts.len() != 3 {
                    return Err(ConfigError::InvalidValue {
                        key: key.into(),
                        value: value.into(),
                        reason: "expected three comma-separated depths".into(),
                    });
                }
                for (slot, part) in self.depth_threshold_schedule.iter_mut().zip(&parts) {
                    *slot = num(key, part)?;
                }
            }
            "eq2_as_printed" => self.eq2_as_printed = flag(key, value)?,
            "courier_speed" => self.courier_speed = num(key, value)?,
            "courier_sparse_speed_multiplier" => {
                self.courier_sparse_speed_multiplier = num(key, value)?
            }
            "courier_relay" => self.courier_relay = flag(key, value)?,
            _ => return Err(ConfigError::UnknownKey { key: key.into() }),
        }
        Ok(())
    }

    /// Parse a flat `key = value` config file (blank lines and `#` comments allowed).
    pub fn from_str_overrides(base: NetworkConfig, text: &str) -> Result<NetworkConfig, ConfigError> {
        let mut config = base;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(ConfigError::Malformed {
                    line: idx + 1,
                    text: line.into(),
                });
            };
            config.set(key.trim(), value.trim())?;
        }
        config.validate()?;
        Ok(config)
    }

    pub fn from_file(path: &Path) -> Result<NetworkConfig, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_str_overrides(NetworkConfig::default(), &text)
    }

    /// Initial energy budget of every ordinary sensor node.
    pub fn initial_node_energy(&self) -> f64 {
        self.initial_energy
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_table_one() {
        let c = NetworkConfig::default();
        assert_eq!(c.node_count, 225);
        assert_eq!(c.initial_energy, 70.0);
        assert_eq!(c.packet_payload, 50);
        assert_eq!(c.tx_range, 100.0);
        assert_eq!(c.courier_count, 4);
        assert_eq!(c.run_count, 3);
        assert_eq!(c.aggregation_factor, 0.6);
        assert_eq!(c.tx_power, 2.0);
        assert_eq!(c.rx_power, 0.1);
        assert_eq!(c.idle_power, 0.01);
        c.validate().unwrap();
    }

    #[test]
    fn initial_node_energy_pass_through() {
        assert_eq!(NetworkConfig::default().initial_node_energy(), 70.0);
        let mut c = NetworkConfig::default();
        c.initial_energy = 1.0;
        assert_eq!(c.initial_node_energy(), 1.0);
    }

    #[test]
    fn parses_flat_key_value_file() {
        let text = "node_count = 20\n# comment\ncourier_relay = off\ndepth_threshold_schedule = 50,30,10\n";
        let c = NetworkConfig::from_str_overrides(NetworkConfig::default(), text).unwrap();
        assert_eq!(c.node_count, 20);
        assert!(!c.courier_relay);
        assert_eq!(c.depth_threshold_schedule, [50.0, 30.0, 10.0]);
    }

    #[test]
    fn unknown_key_is_error() {
        let err = NetworkConfig::from_str_overrides(NetworkConfig::default(), "bogus = 1\n");
        assert!(matches!(err, Err(ConfigError::UnknownKey { .. })));
    }

    #[test]
    fn malformed_line_is_error() {
        let err = NetworkConfig::from_str_overrides(NetworkConfig::default(), "node_count 20\n");
        assert!(matches!(err, Err(ConfigError::Malformed { line: 1, .. })));
    }

    #[test]
    fn invariants_rejected() {
        let mut c = NetworkConfig::default();
        c.aggregation_factor = 0.0;
        assert!(c.validate().is_err());
        let mut c = NetworkConfig::default();
        c.node_count = 0;
        assert!(c.validate().is_err());
        let mut c = NetworkConfig::default();
        c.tx_range = -1.0;
        assert!(c.validate().is_err());
    }
}
