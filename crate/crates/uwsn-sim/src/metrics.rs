//! Per-round metric extraction, multi-run aggregation with Student-t
//! confidence intervals, and CSV emission.

use crate::engine::RoundRecord;
use statrs::distribution::{ContinuousCDF, StudentsT};
use std::io::Write;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("cannot aggregate: {0}")]
    Mismatch(String),
    #[error("failed writing {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Metric {
    AliveNodes,
    DeadNodes,
    AvgEnergyPerRound,
    Throughput,
    LossProbability,
}

impl Metric {
    pub const ALL: [Metric; 5] = [
        Metric::AliveNodes,
        Metric::DeadNodes,
        Metric::AvgEnergyPerRound,
        Metric::Throughput,
        Metric::LossProbability,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Metric::AliveNodes => "alive_nodes",
            Metric::DeadNodes => "dead_nodes",
            Metric::AvgEnergyPerRound => "avg_energy_per_round",
            Metric::Throughput => "throughput",
            Metric::LossProbability => "loss_probability",
        }
    }
}

/// Per-round derived metrics for one record: (average energy per alive node,
/// loss probability, throughput).
pub fn round_metrics(record: &RoundRecord) -> (f64, f64, f64) {
    let avg_energy = record.energy_consumed / (record.alive.max(1) as f64);
    let loss = record.dropped as f64 / (record.generated.max(1) as f64);
    (avg_energy, loss, record.delivered as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricSeries {
    pub metric: Metric,
    pub run_seed: u64,
    pub values: Vec<f64>,
}

pub fn series_from_records(records: &[RoundRecord], metric: Metric, run_seed: u64) -> MetricSeries {
    let values = records
        .iter()
        .map(|r| match metric {
            Metric::AliveNodes => r.alive as f64,
            Metric::DeadNodes => r.dead as f64,
            Metric::AvgEnergyPerRound => round_metrics(r).0,
            Metric::Throughput => r.delivered as f64,
            Metric::LossProbability => round_metrics(r).1,
        })
        .collect();
    MetricSeries {
        metric,
        run_seed,
        values,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AggregateSeries {
    pub metric: Metric,
    pub mean: Vec<f64>,
    pub ci_half_width: Vec<f64>,
    pub run_count: usize,
}

/// Two-sided Student-t critical value for the given confidence level.
fn t_critical(confidence: f64, dof: f64) -> f64 {
    StudentsT::new(0.0, 1.0, dof)
        .expect("valid dof")
        .inverse_cdf(1.0 - (1.0 - confidence) / 2.0)
}

/// Per-round mean and t-interval half-width across runs. Shorter runs are
/// padded with their terminal value so all rounds stay aligned.
pub fn aggregate_runs(
    series: &[MetricSeries],
    confidence: f64,
) -> Result<AggregateSeries, MetricsError> {
    let Some(first) = series.first() else {
        return Err(MetricsError::Mismatch("no series to aggregate".into()));
    };
    if series.iter().any(|s| s.metric != first.metric) {
        return Err(MetricsError::Mismatch("mixed metrics in one aggregate".into()));
    }
    let n = series.len();
    let len = series.iter().map(|s| s.values.len()).max().unwrap_or(0);
    let t = if n >= 2 {
        t_critical(confidence, (n - 1) as f64)
    } else {
        0.0
    };
    let mut mean = Vec::with_capacity(len);
    let mut half = Vec::with_capacity(len);
    for round in 0..len {
        let vals: Vec<f64> = series
            .iter()
            .map(|s| {
                s.values
                    .get(round)
                    .or(s.values.last())
                    .copied()
                    .unwrap_or(0.0)
            })
            .collect();
        let m = vals.iter().sum::<f64>() / n as f64;
        let hw = if n >= 2 {
            let var = vals.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (n - 1) as f64;
            t * var.sqrt() / (n as f64).sqrt()
        } else {
            0.0
        };
        mean.push(m);
        half.push(hw);
    }
    Ok(AggregateSeries {
        metric: first.metric,
        mean,
        ci_half_width: half,
        run_count: n,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LifetimeSummary {
    /// First round with a dead node (end of the stability period).
    pub first_death_round: Option<u64>,
    pub stability_end: Option<u64>,
    /// First round with zero alive nodes, or the last simulated round.
    pub lifetime_rounds: u64,
}

pub fn lifetime_summary(records: &[RoundRecord]) -> LifetimeSummary {
    let first_death_round = records.iter().find(|r| r.dead > 0).map(|r| r.round);
    let lifetime_rounds = records
        .iter()
        .find(|r| r.alive == 0)
        .map(|r| r.round)
        .or_else(|| records.last().map(|r| r.round))
        .unwrap_or(0);
    LifetimeSummary {
        first_death_round,
        stability_end: first_death_round,
        lifetime_rounds,
    }
}

/// One CSV per metric: `round,mean,ci_low,ci_high`, LF endings, 6 fractional digits.
pub fn emit_csv(aggregate: &AggregateSeries, path: &Path) -> Result<(), MetricsError> {
    let io_err = |source| MetricsError::Io {
        path: path.display().to_string(),
        source,
    };
    let mut out = Vec::new();
    out.extend_from_slice(b"round,mean,ci_low,ci_high\n");
    for (i, (m, hw)) in aggregate.mean.iter().zip(&aggregate.ci_half_width).enumerate() {
        let _ = writeln!(
            out,
            "{},{:.6},{:.6},{:.6}",
            i + 1,
            m,
            m - hw,
            m + hw
        );
    }
    std::fs::write(path, out).map_err(io_err)
}
