//! Command-line front end for `abc-chain`: config handling, CSV output and
//! run manifests.

// `!(x <= tol)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use abc_chain::{delay_sweep, eof_trace, find_entangling_time, ratio_sweep, ChainModel};
use serde::Serialize;
use serde_json::json;

pub mod config;
pub mod grid;
pub mod output;

pub use config::{Cli, CommandKind, Job, RunConfig};
pub use grid::{Grid, GridError};
pub use output::{format_sig, Table};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Model(#[from] abc_chain::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("writing output: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    /// 2 for bad configuration, 3 for numerical failures, 4 for I/O.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Model(e) if e.is_numerical() => 3,
            CliError::Model(_) => 2,
            CliError::Io { .. } | CliError::Csv(_) => 4,
        }
    }
}

/// Result of a job: the CSV table plus run-specific facts for the manifest.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub table: Table,
    pub summary: serde_json::Value,
}

/// Runs a validated job on the current rayon pool.
pub fn run_job(job: &Job) -> Result<RunOutput, CliError> {
    match job {
        Job::Trace {
            chain,
            protocol,
            times,
            search,
        } => {
            let model = ChainModel::clean(chain.clone())?;
            let mut table = Table::new(vec!["t", "eof"]);
            for (t, eof) in eof_trace(&model, *protocol, times)? {
                table.push(vec![t, eof]);
            }
            let peak = find_entangling_time(&model, *protocol, search).ok();
            Ok(RunOutput {
                table,
                summary: json!({ "peak": peak }),
            })
        }
        Job::RatioSweep {
            n_sites,
            protocol,
            ratios,
            search,
        } => {
            let sweep = ratio_sweep(*n_sites, *protocol, ratios, search)?;
            let mut table = Table::new(vec!["ratio", "t_E", "eof"]);
            for p in &sweep.points {
                table.push(vec![p.ratio, p.t_e, p.eof]);
            }
            Ok(RunOutput {
                table,
                summary: json!({ "local_maxima": sweep.local_maxima() }),
            })
        }
        Job::DisorderSweep(sweep) => {
            let records = sweep.run()?;
            let mut table = Table::new(vec!["E", "percent_of_delta", "mean_eof", "std_eof", "n"]);
            for r in &records {
                table.push(vec![
                    r.strength,
                    r.percent_of_delta(),
                    r.mean_eof,
                    r.std_eof,
                    r.realizations as f64,
                ]);
            }
            Ok(RunOutput {
                table,
                summary: json!({ "t_e": records.first().map(|r| r.t_e) }),
            })
        }
        Job::DelaySweep {
            n_sites,
            protocol,
            ratio,
            delays,
            search,
            options,
        } => {
            let sweep = delay_sweep(*n_sites, *protocol, *ratio, delays, search, options)?;
            let mut table = Table::new(vec!["D", "eof"]);
            for p in &sweep.points {
                table.push(vec![p.delay, p.eof]);
            }
            let max_occ = sweep
                .points
                .iter()
                .map(|p| p.occupation_c)
                .fold(0.0, f64::max);
            Ok(RunOutput {
                table,
                summary: json!({ "clean": sweep.clean, "max_occupation_c": max_occ }),
            })
        }
    }
}

#[derive(Debug, Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    config: &'a RunConfig,
    seed: Option<u64>,
    threads: usize,
    started_unix_seconds: u64,
    wall_time_seconds: f64,
    rows: usize,
    output: Option<&'a Path>,
    summary: &'a serde_json::Value,
}

fn default_manifest_path(output: &Path) -> PathBuf {
    let mut name = output.file_stem().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    output.with_file_name(name)
}

/// Merges config sources, runs the job on a dedicated pool and writes the
/// CSV and manifest. Returns the CSV text when no output file is set.
pub fn execute(cli: Cli) -> Result<Option<String>, CliError> {
    let file = match &cli.common.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::default(),
    };
    let config = file.merged(RunConfig::from_cli(cli));
    let (config, job) = config.resolve()?;

    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = config.threads {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;

    let started = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let clock = Instant::now();
    let result = pool.install(|| run_job(&job))?;
    let wall = clock.elapsed().as_secs_f64();

    let csv_text = result.table.to_csv_string();
    let manifest_path = config
        .manifest
        .clone()
        .or_else(|| config.output.as_deref().map(default_manifest_path));
    if let Some(path) = &config.output {
        std::fs::write(path, &csv_text).map_err(|e| CliError::io(path, e))?;
    }
    if let Some(path) = manifest_path {
        let manifest = Manifest {
            tool: "abc-chain",
            version: env!("CARGO_PKG_VERSION"),
            command: config.command.expect("resolved").name(),
            config: &config,
            seed: config.seed,
            threads: pool.current_num_threads(),
            started_unix_seconds: started,
            wall_time_seconds: wall,
            rows: result.table.rows.len(),
            output: config.output.as_deref(),
            summary: &result.summary,
        };
        let text = serde_json::to_string_pretty(&manifest).expect("manifest serialises") + "\n";
        std::fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
    }
    Ok(config.output.is_none().then_some(csv_text))
}
