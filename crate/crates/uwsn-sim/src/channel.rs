//! Acoustic link model and per-event energy accounting.
//!
//! The loss model is a Bernoulli draw whose probability grows linearly with
//! distance: p(d) = loss_base * d / tx_range.

use crate::config::NetworkConfig;
use crate::model::Position;
use rand::Rng;

pub fn in_range(a: &Position, b: &Position, config: &NetworkConfig) -> bool {
    a.distance(b) <= config.tx_range
}

pub fn propagation_delay(distance: f64, config: &NetworkConfig) -> f64 {
    distance / config.sound_speed
}

pub fn transmission_time(payload_bytes: u32, config: &NetworkConfig) -> f64 {
    (payload_bytes as f64 * 8.0) / config.bitrate
}

pub fn tx_energy(payload_bytes: u32, config: &NetworkConfig) -> f64 {
    config.tx_power * transmission_time(payload_bytes, config)
}

pub fn rx_energy(payload_bytes: u32, config: &NetworkConfig) -> f64 {
    config.rx_power * transmission_time(payload_bytes, config)
}

pub fn idle_energy(duration: f64, config: &NetworkConfig) -> f64 {
    config.idle_power * duration
}

pub fn loss_probability(distance: f64, config: &NetworkConfig) -> f64 {
    (config.loss_base * distance / config.tx_range).clamp(0.0, 1.0)
}

/// Draw whether a transmission over `distance` is lost.
pub fn packet_loss_draw<R: Rng>(distance: f64, rng: &mut R, config: &NetworkConfig) -> bool {
    let p = loss_probability(distance, config);
    if p <= 0.0 {
        // avoid consuming randomness on lossless links
        return false;
    }
    rng.random::<f64>() < p
}
