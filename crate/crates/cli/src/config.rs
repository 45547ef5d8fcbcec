//! Command-line flags, config files and their merge into a validated job.

use std::path::{Path, PathBuf};

use abc_chain::{ChainSpec, DelayOptions, DisorderKind, PeakSearch, Protocol};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::grid::Grid;
use crate::CliError;

pub const DEFAULT_N_SITES: usize = 7;
pub const DEFAULT_RATIOS: &str = "0.05:0.6:0.001";
pub const DEFAULT_LEVELS: &str = "0:1:0.05";
pub const DEFAULT_DELAYS: &str = "0:0.1:0.005";
pub const DEFAULT_REALIZATIONS: usize = 1000;
pub const DEFAULT_TRACE_POINTS: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    Trace,
    RatioSweep,
    DisorderSweep,
    DelaySweep,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Trace => "trace",
            CommandKind::RatioSweep => "ratio-sweep",
            CommandKind::DisorderSweep => "disorder-sweep",
            CommandKind::DelaySweep => "delay-sweep",
        }
    }
}

/// Entanglement transfer in ABC-type dimerised spin chains.
#[derive(Debug, Parser)]
#[command(name = "abc-chain", version, about)]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Omit to take the command from `--config`.
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Default, Args)]
pub struct CommonArgs {
    /// TOML config, or a JSON manifest from an earlier run.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// CSV destination; stdout when absent.
    #[arg(long, short, global = true, value_name = "FILE")]
    pub output: Option<PathBuf>,
    /// Manifest destination; defaults to `<output>.manifest.json`.
    #[arg(long, global = true, value_name = "FILE")]
    pub manifest: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, global = true, env = "ABC_CHAIN_THREADS")]
    pub threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// EOF of sites A and C against time.
    Trace(TraceArgs),
    /// First entangling time and peak EOF against the coupling ratio.
    RatioSweep(RatioSweepArgs),
    /// Disorder-averaged EOF at the clean entangling time.
    DisorderSweep(DisorderSweepArgs),
    /// EOF at the clean entangling time against the second-injection delay.
    DelaySweep(DelaySweepArgs),
}

#[derive(Debug, Default, Args)]
pub struct ChainArgs {
    /// Initial-state protocol: i, ii or iii.
    #[arg(long, short)]
    pub protocol: Option<Protocol>,
    /// Chain length, 4m + 7.
    #[arg(long)]
    pub n_sites: Option<usize>,
}

#[derive(Debug, Default, Args)]
pub struct TraceArgs {
    #[command(flatten)]
    pub chain: ChainArgs,
    /// Coupling ratio δ/Δ.
    #[arg(long, short)]
    pub ratio: Option<f64>,
    /// Times as start:stop:step or a comma list.
    #[arg(long)]
    pub times: Option<Grid>,
}

#[derive(Debug, Default, Args)]
pub struct RatioSweepArgs {
    #[command(flatten)]
    pub chain: ChainArgs,
    /// Ratios as start:stop:step or a comma list.
    #[arg(long)]
    pub ratios: Option<Grid>,
}

#[derive(Debug, Default, Args)]
pub struct DisorderSweepArgs {
    #[command(flatten)]
    pub chain: ChainArgs,
    #[arg(long, short)]
    pub ratio: Option<f64>,
    /// none, diagonal or off-diagonal.
    #[arg(long)]
    pub kind: Option<DisorderKind>,
    /// Disorder strengths E in [0, 1].
    #[arg(long)]
    pub levels: Option<Grid>,
    #[arg(long)]
    pub realizations: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Entangling time to evaluate at; searched for on the clean chain when absent.
    #[arg(long)]
    pub t_e: Option<f64>,
}

#[derive(Debug, Default, Args)]
pub struct DelaySweepArgs {
    #[command(flatten)]
    pub chain: ChainArgs,
    #[arg(long, short)]
    pub ratio: Option<f64>,
    /// Delays as fractions of the entangling time.
    #[arg(long)]
    pub delays: Option<Grid>,
    /// Largest occupation of C tolerated at the second injection.
    #[arg(long)]
    pub occupation_threshold: Option<f64>,
    /// Rescale the state to unit norm after the second injection.
    #[arg(long)]
    pub renormalize: bool,
}

/// Every setting a run can take. Config files, manifests and flags all map
/// onto this; unset fields fall back to defaults during [`RunConfig::resolve`].
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub command: Option<CommandKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub protocol: Option<Protocol>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_sites: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub times: Option<Grid>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratios: Option<Grid>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub levels: Option<Grid>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delays: Option<Grid>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<DisorderKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub realizations: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_e: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub occupation_threshold: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub renormalize: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub search: Option<PeakSearch>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub manifest: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
}

/// A validated run.
#[derive(Debug, Clone, PartialEq)]
pub enum Job {
    Trace {
        chain: ChainSpec,
        protocol: Protocol,
        times: Vec<f64>,
        search: PeakSearch,
    },
    RatioSweep {
        n_sites: usize,
        protocol: Protocol,
        ratios: Vec<f64>,
        search: PeakSearch,
    },
    DisorderSweep(abc_chain::DisorderSweep),
    DelaySweep {
        n_sites: usize,
        protocol: Protocol,
        ratio: f64,
        delays: Vec<f64>,
        search: PeakSearch,
        options: DelayOptions,
    },
}

fn overlay<T>(base: &mut Option<T>, top: Option<T>) {
    if top.is_some() {
        *base = top;
    }
}

impl RunConfig {
    /// Reads a TOML config, or the `config` table of a JSON manifest.
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let bad = |e: String| CliError::Config(format!("{}: {e}", path.display()));
        if path.extension().is_some_and(|e| e == "json") {
            #[derive(Deserialize)]
            struct Manifest {
                config: RunConfig,
            }
            serde_json::from_str::<Manifest>(&text)
                .map(|m| m.config)
                .map_err(|e| bad(e.to_string()))
        } else {
            toml::from_str(&text).map_err(|e| bad(e.to_string()))
        }
    }

    /// Flags from the command line; unset flags stay `None`.
    pub fn from_cli(cli: Cli) -> Self {
        let common = cli.common;
        let mut c = RunConfig {
            output: common.output,
            manifest: common.manifest,
            threads: common.threads,
            ..Default::default()
        };
        let chain = match cli.command {
            None => return c,
            Some(Command::Trace(a)) => {
                c.command = Some(CommandKind::Trace);
                c.ratio = a.ratio;
                c.times = a.times;
                a.chain
            }
            Some(Command::RatioSweep(a)) => {
                c.command = Some(CommandKind::RatioSweep);
                c.ratios = a.ratios;
                a.chain
            }
            Some(Command::DisorderSweep(a)) => {
                c.command = Some(CommandKind::DisorderSweep);
                c.ratio = a.ratio;
                c.kind = a.kind;
                c.levels = a.levels;
                c.realizations = a.realizations;
                c.seed = a.seed;
                c.t_e = a.t_e;
                a.chain
            }
            Some(Command::DelaySweep(a)) => {
                c.command = Some(CommandKind::DelaySweep);
                c.ratio = a.ratio;
                c.delays = a.delays;
                c.occupation_threshold = a.occupation_threshold;
                c.renormalize = a.renormalize.then_some(true);
                a.chain
            }
        };
        c.protocol = chain.protocol;
        c.n_sites = chain.n_sites;
        c
    }

    /// Settings in `top` win over those in `self`.
    pub fn merged(mut self, top: RunConfig) -> Self {
        if let (Some(a), Some(b)) = (self.command, top.command) {
            if a != b {
                // A different command on the command line starts afresh
                // from the file's shared settings only.
                self = RunConfig {
                    protocol: self.protocol,
                    n_sites: self.n_sites,
                    search: self.search,
                    threads: self.threads,
                    ..Default::default()
                };
            }
        }
        overlay(&mut self.command, top.command);
        overlay(&mut self.protocol, top.protocol);
        overlay(&mut self.n_sites, top.n_sites);
        overlay(&mut self.ratio, top.ratio);
        overlay(&mut self.times, top.times);
        overlay(&mut self.ratios, top.ratios);
        overlay(&mut self.levels, top.levels);
        overlay(&mut self.delays, top.delays);
        overlay(&mut self.kind, top.kind);
        overlay(&mut self.realizations, top.realizations);
        overlay(&mut self.seed, top.seed);
        overlay(&mut self.t_e, top.t_e);
        overlay(&mut self.occupation_threshold, top.occupation_threshold);
        overlay(&mut self.renormalize, top.renormalize);
        overlay(&mut self.search, top.search);
        overlay(&mut self.output, top.output);
        overlay(&mut self.manifest, top.manifest);
        overlay(&mut self.threads, top.threads);
        self
    }

    /// Fills defaults for the selected command, rejects settings it does not
    /// use, and returns the completed config with the job it describes.
    pub fn resolve(&self) -> Result<(RunConfig, Job), CliError> {
        let cfg = |m: String| CliError::Config(m);
        let command = self.command.ok_or_else(|| {
            cfg("no command given (use a subcommand or `command` in the config file)".into())
        })?;
        let protocol = self
            .protocol
            .ok_or_else(|| cfg(format!("{} needs a protocol", command.name())))?;
        let n_sites = self.n_sites.unwrap_or(DEFAULT_N_SITES);
        let search = self.search.unwrap_or_default();
        if search.grid_points < 3 || !(search.rel_tol > 0.0) || search.candidates == 0 {
            return Err(cfg(
                "search needs grid_points ≥ 3, rel_tol > 0 and candidates ≥ 1".into(),
            ));
        }
        if self.threads == Some(0) {
            return Err(cfg("threads must be at least 1".into()));
        }

        let unused: &[(&str, bool)] = &[
            (
                "ratio",
                self.ratio.is_some() && command == CommandKind::RatioSweep,
            ),
            (
                "times",
                self.times.is_some() && command != CommandKind::Trace,
            ),
            (
                "ratios",
                self.ratios.is_some() && command != CommandKind::RatioSweep,
            ),
            (
                "levels",
                self.levels.is_some() && command != CommandKind::DisorderSweep,
            ),
            (
                "kind",
                self.kind.is_some() && command != CommandKind::DisorderSweep,
            ),
            (
                "realizations",
                self.realizations.is_some() && command != CommandKind::DisorderSweep,
            ),
            (
                "seed",
                self.seed.is_some() && command != CommandKind::DisorderSweep,
            ),
            (
                "t_e",
                self.t_e.is_some() && command != CommandKind::DisorderSweep,
            ),
            (
                "delays",
                self.delays.is_some() && command != CommandKind::DelaySweep,
            ),
            (
                "occupation_threshold",
                self.occupation_threshold.is_some() && command != CommandKind::DelaySweep,
            ),
            (
                "renormalize",
                self.renormalize.is_some() && command != CommandKind::DelaySweep,
            ),
        ];
        if let Some((name, _)) = unused.iter().find(|(_, bad)| *bad) {
            return Err(cfg(format!(
                "`{name}` does not apply to {}",
                command.name()
            )));
        }

        let mut out = RunConfig {
            command: Some(command),
            protocol: Some(protocol),
            n_sites: Some(n_sites),
            search: Some(search),
            output: self.output.clone(),
            manifest: self.manifest.clone(),
            threads: self.threads,
            ..Default::default()
        };
        let need_ratio = || {
            self.ratio
                .ok_or_else(|| cfg(format!("{} needs a coupling ratio", command.name())))
        };
        let default_grid = |s: &str| s.parse::<Grid>().expect("built-in grid");

        let job = match command {
            CommandKind::Trace => {
                let chain = ChainSpec::abc_with_ratio(n_sites, need_ratio()?)?;
                let times = match &self.times {
                    Some(g) => g.clone(),
                    None => {
                        let (lo, hi) = search.window_for(&chain, protocol);
                        let step = (hi - lo) / DEFAULT_TRACE_POINTS as f64;
                        format!("{lo}:{hi}:{step}")
                            .parse()
                            .map_err(|e: crate::grid::GridError| cfg(e.to_string()))?
                    }
                };
                if times.values().iter().any(|&t| t < 0.0)
                    || times.values().windows(2).any(|w| w[1] < w[0])
                {
                    return Err(cfg("times must be non-negative and ascending".into()));
                }
                out.ratio = Some(chain.ratio());
                out.times = Some(times.clone());
                Job::Trace {
                    chain,
                    protocol,
                    times: times.values().to_vec(),
                    search,
                }
            }
            CommandKind::RatioSweep => {
                let ratios = self
                    .ratios
                    .clone()
                    .unwrap_or_else(|| default_grid(DEFAULT_RATIOS));
                if ratios.values().iter().any(|r| !(*r > 0.0 && *r < 1.0)) {
                    return Err(cfg("ratios must lie in (0, 1)".into()));
                }
                ChainSpec::abc_with_ratio(n_sites, 0.5)?;
                out.ratios = Some(ratios.clone());
                Job::RatioSweep {
                    n_sites,
                    protocol,
                    ratios: ratios.values().to_vec(),
                    search,
                }
            }
            CommandKind::DisorderSweep => {
                let ratio = need_ratio()?;
                ChainSpec::abc_with_ratio(n_sites, ratio)?;
                let levels = self
                    .levels
                    .clone()
                    .unwrap_or_else(|| default_grid(DEFAULT_LEVELS));
                if levels.values().iter().any(|e| !(0.0..=1.0).contains(e)) {
                    return Err(cfg("disorder levels must lie in [0, 1]".into()));
                }
                let kind = self.kind.unwrap_or(DisorderKind::Diagonal);
                let realizations = self.realizations.unwrap_or(DEFAULT_REALIZATIONS);
                if realizations == 0 {
                    return Err(cfg("realizations must be at least 1".into()));
                }
                if let Some(t) = self.t_e {
                    if !(t > 0.0 && t.is_finite()) {
                        return Err(cfg("t_e must be positive".into()));
                    }
                }
                let seed = self.seed.unwrap_or(0);
                out.ratio = Some(ratio);
                out.levels = Some(levels.clone());
                out.kind = Some(kind);
                out.realizations = Some(realizations);
                out.seed = Some(seed);
                out.t_e = self.t_e;
                let mut sweep =
                    abc_chain::DisorderSweep::new(protocol, ratio, kind, levels.values().to_vec());
                sweep.n_sites = n_sites;
                sweep.realizations = realizations;
                sweep.base_seed = seed;
                sweep.t_e = self.t_e;
                sweep.search = search;
                Job::DisorderSweep(sweep)
            }
            CommandKind::DelaySweep => {
                if !protocol.has_two_injections() {
                    return Err(cfg(format!(
                        "protocol {protocol} has a single injection; delay-sweep needs i or ii"
                    )));
                }
                let ratio = need_ratio()?;
                ChainSpec::abc_with_ratio(n_sites, ratio)?;
                let mut options = DelayOptions::default();
                if let Some(th) = self.occupation_threshold {
                    if !(th > 0.0 && th < 1.0) {
                        return Err(cfg("occupation_threshold must lie in (0, 1)".into()));
                    }
                    options.occupation_threshold = th;
                }
                options.renormalize = self.renormalize.unwrap_or(false);
                let delays = self
                    .delays
                    .clone()
                    .unwrap_or_else(|| default_grid(DEFAULT_DELAYS));
                if delays
                    .values()
                    .iter()
                    .any(|d| !(0.0..=options.max_fraction).contains(d))
                {
                    return Err(cfg(format!(
                        "delays must lie in [0, {}]",
                        options.max_fraction
                    )));
                }
                out.ratio = Some(ratio);
                out.delays = Some(delays.clone());
                out.occupation_threshold = Some(options.occupation_threshold);
                out.renormalize = Some(options.renormalize);
                Job::DelaySweep {
                    n_sites,
                    protocol,
                    ratio,
                    delays: delays.values().to_vec(),
                    search,
                    options,
                }
            }
        };
        Ok((out, job))
    }
}
