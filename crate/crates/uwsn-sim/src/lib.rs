//! Deterministic, seedable discrete-event simulator for underwater acoustic
//! sensor networks running the AMCTD routing protocol (adaptive weight
//! functions, depth-threshold schedule, mobile courier nodes) alongside DBR
//! and EEDBR baselines.

pub mod baselines;
pub mod channel;
pub mod cli;
pub mod config;
pub mod courier;
pub mod engine;
pub mod metrics;
pub mod model;
pub mod routing;
pub mod topology;
