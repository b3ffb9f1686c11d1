//! Command-line front end: scenario configuration, protocol selection, and
//! multi-run orchestration with CSV output.

use crate::config::{ConfigError, NetworkConfig};
use crate::engine::{run_simulation, Protocol, SimResult};
use crate::metrics::{
    aggregate_runs, emit_csv, lifetime_summary, round_metrics, series_from_records, Metric,
    MetricsError,
};
use clap::Parser;
use std::fmt::Write as _;
use std::path::PathBuf;
use thiserror::Error;

pub const DEFAULT_CONFIDENCE: f64 = 0.95;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error("invalid request: {0}")]
    Request(String),
    #[error("failed writing {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

#[derive(Debug, Parser)]
#[command(
    name = "uwsn-sim",
    about = "Discrete-event simulator for depth-based routing in underwater acoustic sensor networks"
)]
pub struct Args {
    /// Flat key = value configuration file
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Protocols to simulate (comma-separated subset of amctd,dbr,eedbr)
    #[arg(long, default_value = "amctd,dbr,eedbr")]
    pub protocol: String,
    /// Explicit seeds (comma-separated); overrides --runs
    #[arg(long)]
    pub seeds: Option<String>,
    /// Number of runs; seeds are rng_seed .. rng_seed + n - 1
    #[arg(long)]
    pub runs: Option<usize>,
    /// Output directory (default: $UWSN_SIM_OUT or ./out)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Override a config key, e.g. --set node_count=20 (repeatable)
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct RunRequest {
    pub config: NetworkConfig,
    pub protocols: Vec<Protocol>,
    pub seeds: Vec<u64>,
    pub out_dir: PathBuf,
}

pub fn build_request(args: &Args) -> Result<RunRequest, CliError> {
    let mut config = match &args.config {
        Some(path) => NetworkConfig::from_file(path)?,
        None => NetworkConfig::default(),
    };
    for pair in &args.overrides {
        let Some((key, value)) = pair.split_once('=') else {
            return Err(CliError::Request(format!(
                "--set expects KEY=VALUE, got `{pair}`"
            )));
        };
        config.set(key.trim(), value.trim())?;
    }
    config.validate()?;

    let mut protocols = Vec::new();
    for part in args.protocol.split(',').filter(|p| !p.trim().is_empty()) {
        let p: Protocol = part.parse().map_err(CliError::Request)?;
        if !protocols.contains(&p) {
            protocols.push(p);
        }
    }
    if protocols.is_empty() {
        return Err(CliError::Request("at least one protocol required".into()));
    }
    protocols.sort();

    let mut seeds = match &args.seeds {
        Some(list) => {
            let mut out = Vec::new();
            for part in list.split(',').filter(|p| !p.trim().is_empty()) {
                out.push(part.trim().parse::<u64>().map_err(|e| {
                    CliError::Request(format!("bad seed `{part}`: {e}"))
                })?);
            }
            out
        }
        None => {
            let runs = args.runs.unwrap_or(config.run_count);
            (0..runs as u64).map(|i| config.rng_seed + i).collect()
        }
    };
    if seeds.is_empty() {
        return Err(CliError::Request("at least one seed required".into()));
    }
    seeds.sort_unstable();
    seeds.dedup();

    let out_dir = args
        .out
        .clone()
        .or_else(|| std::env::var_os("UWSN_SIM_OUT").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"));

    Ok(RunRequest {
        config,
        protocols,
        seeds,
        out_dir,
    })
}

/// Run every (protocol, seed) pair, aggregate per protocol, emit one CSV per
/// metric plus a summary table. Returns the rendered summary.
pub fn execute(request: &RunRequest) -> Result<String, CliError> {
    if request.protocols.is_empty() || request.seeds.is_empty() {
        return Err(CliError::Request(
            "at least one protocol and one seed required".into(),
        ));
    }
    std::fs::create_dir_all(&request.out_dir).map_err(|source| CliError::Io {
        path: request.out_dir.display().to_string(),
        source,
    })?;

    let mut summary = String::new();
    let _ = writeln!(
        summary,
        "protocol  seeds            first_death  lifetime  delivered  mean_loss"
    );

    for &protocol in &request.protocols {
        let mut results: Vec<SimResult> = Vec::new();
        for &seed in &request.seeds {
            results.push(run_simulation(&request.config, protocol, seed)?);
        }

        for metric in Metric::ALL {
            let series: Vec<_> = results
                .iter()
                .map(|r| series_from_records(&r.records, metric, r.seed))
                .collect();
            let agg = aggregate_runs(&series, DEFAULT_CONFIDENCE)?;
            let path = request
                .out_dir
                .join(format!("{}_{}.csv", metric.name(), protocol.name()));
            emit_csv(&agg, &path)?;
        }

        let n = results.len() as f64;
        let mean_first_death = mean_opt(results.iter().map(|r| {
            lifetime_summary(&r.records)
                .first_death_round
                .map(|v| v as f64)
        }));
        let mean_lifetime = results
            .iter()
            .map(|r| lifetime_summary(&r.records).lifetime_rounds as f64)
            .sum::<f64>()
            / n;
        let total_delivered: u64 = results.iter().map(|r| r.cumulative_delivered).sum();
        let mean_loss = results
            .iter()
            .map(|r| {
                let per_round: Vec<f64> =
                    r.records.iter().map(|rec| round_metrics(rec).1).collect();
                if per_round.is_empty() {
                    0.0
                } else {
                    per_round.iter().sum::<f64>() / per_round.len() as f64
                }
            })
            .sum::<f64>()
            / n;

        let seeds_str = request
            .seeds
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join(",");
        let _ = writeln!(
            summary,
            "{:<9} {:<16} {:<12} {:<9.1} {:<10} {:.6}",
            protocol.name(),
            seeds_str,
            mean_first_death
                .map(|v| format!("{v:.1}"))
                .unwrap_or_else(|| "-".into()),
            mean_lifetime,
            total_delivered,
            mean_loss
        );
    }

    let summary_path = request.out_dir.join("summary.txt");
    std::fs::write(&summary_path, summary.as_bytes()).map_err(|source| CliError::Io {
        path: summary_path.display().to_string(),
        source,
    })?;
    Ok(summary)
}

fn mean_opt(values: impl Iterator<Item = Option<f64>>) -> Option<f64> {
    let vals: Vec<f64> = values.flatten().collect();
    if vals.is_empty() {
        None
    } else {
        Some(vals.iter().sum::<f64>() / vals.len() as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn desk_args(out: &std::path::Path) -> Args {
        Args {
            config: None,
            protocol: "amctd,dbr,eedbr".into(),
            seeds: Some("1,2".into()),
            runs: None,
            out: Some(out.to_path_buf()),
            overrides: vec!["node_count=15".into(), "rounds_max=60".into()],
        }
    }

    #[test]
    fn default_request_reproduces_table_one() {
        let args = Args {
            config: None,
            protocol: "amctd,dbr,eedbr".into(),
            seeds: None,
            runs: None,
            out: Some(PathBuf::from("out")),
            overrides: vec![],
        };
        let req = build_request(&args).unwrap();
        assert_eq!(req.config, NetworkConfig::default());
        assert_eq!(req.protocols, vec![Protocol::Amctd, Protocol::Dbr, Protocol::Eedbr]);
        assert_eq!(req.seeds, vec![42, 43, 44]);
    }

    #[test]
    fn set_override_and_bad_key() {
        let dir = tempfile::tempdir().unwrap();
        let mut args = desk_args(dir.path());
        args.overrides.push("node_count=20".into());
        let req = build_request(&args).unwrap();
        assert_eq!(req.config.node_count, 20);

        let mut args = desk_args(dir.path());
        args.overrides = vec!["nope=1".into()];
        assert!(build_request(&args).is_err());
    }

    #[test]
    fn empty_protocol_list_is_usage_error() {
        let dir = tempfile::tempdir().unwrap();
        let mut args = desk_args(dir.path());
        args.protocol = "".into();
        assert!(build_request(&args).is_err());
    }

    #[test]
    fn execute_emits_expected_files_deterministically() {
        let dir_a = tempfile::tempdir().unwrap();
        let dir_b = tempfile::tempdir().unwrap();
        let req_a = build_request(&desk_args(dir_a.path())).unwrap();
        let req_b = build_request(&desk_args(dir_b.path())).unwrap();
        execute(&req_a).unwrap();
        execute(&req_b).unwrap();

        let mut names: Vec<String> = std::fs::read_dir(dir_a.path())
            .unwrap()
            .map(|e| e.unwrap().file_name().into_string().unwrap())
            .collect();
        names.sort();
        assert_eq!(names.len(), 16); // 5 metrics x 3 protocols + summary.txt
        for name in &names {
            let a = std::fs::read(dir_a.path().join(name)).unwrap();
            let b = std::fs::read(dir_b.path().join(name)).unwrap();
            assert_eq!(a, b, "output file {name} differs between identical runs");
        }
        assert!(names.contains(&"alive_nodes_amctd.csv".to_string()));
        assert!(names.contains(&"loss_probability_dbr.csv".to_string()));
        assert!(names.contains(&"summary.txt".to_string()));
    }
}
