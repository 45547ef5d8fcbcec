use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::peak::{find_entangling_time, PeakResult, PeakSearch};
use super::ChainModel;
use crate::dynamics::{delayed_protocol_state, DelayOptions};
use crate::error::{Error, Result};
use crate::hamiltonian::{realization_seed, ChainSpec, DisorderKind, DisorderRealization};
use crate::protocol::Protocol;

/// Peak EOF against coupling ratio.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioSweep {
    pub protocol: Protocol,
    pub points: Vec<PeakResult>,
}

impl RatioSweep {
    /// Points whose peak EOF is strictly above both neighbours.
    pub fn local_maxima(&self) -> Vec<PeakResult> {
        self.points
            .windows(3)
            .filter(|w| w[1].eof > w[0].eof && w[1].eof > w[2].eof)
            .map(|w| w[1])
            .collect()
    }
}

pub fn ratio_sweep(
    n_sites: usize,
    protocol: Protocol,
    ratios: &[f64],
    search: &PeakSearch,
) -> Result<RatioSweep> {
    if let Some(r) = ratios.iter().find(|r| !(**r > 0.0 && **r < 1.0)) {
        return Err(Error::InvalidParameter(format!(
            "coupling ratio {r} outside (0, 1)"
        )));
    }
    let points = ratios
        .par_iter()
        .map(|&r| {
            let model = ChainModel::clean(ChainSpec::abc_with_ratio(n_sites, r)?)?;
            find_entangling_time(&model, protocol, search)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RatioSweep { protocol, points })
}

/// Disorder-averaged EOF at the clean entangling time, per disorder level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub protocol: Protocol,
    pub ratio: f64,
    pub kind: DisorderKind,
    /// Dimensionless scale `E`; entries are `E·r·δ`, `r ∈ [-1/2, 1/2)`.
    pub strength: f64,
    pub realizations: usize,
    pub mean_eof: f64,
    /// Spread of a single realization about the mean.
    pub std_eof: f64,
    pub base_seed: u64,
    pub t_e: f64,
}

impl SweepRecord {
    /// Largest perturbation as a percentage of `δ`.
    pub fn percent_of_delta(&self) -> f64 {
        100.0 * self.strength / 2.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DisorderSweep {
    pub n_sites: usize,
    pub protocol: Protocol,
    pub ratio: f64,
    pub kind: DisorderKind,
    pub levels: Vec<f64>,
    pub realizations: usize,
    pub base_seed: u64,
    /// Clean entangling time; searched for when absent.
    pub t_e: Option<f64>,
    pub search: PeakSearch,
}

impl DisorderSweep {
    pub fn new(protocol: Protocol, ratio: f64, kind: DisorderKind, levels: Vec<f64>) -> Self {
        Self {
            n_sites: 7,
            protocol,
            ratio,
            kind,
            levels,
            realizations: 1000,
            base_seed: 0,
            t_e: None,
            search: PeakSearch::default(),
        }
    }

    /// Realization `k` uses `realization_seed(base_seed, k)` at every level,
    /// and reductions run in index order, so the output does not depend on
    /// scheduling.
    pub fn run(&self) -> Result<Vec<SweepRecord>> {
        if self.levels.is_empty() || self.realizations == 0 {
            return Err(Error::InvalidParameter(
                "disorder sweep needs at least one level and one realization".into(),
            ));
        }
        let chain = ChainSpec::abc_with_ratio(self.n_sites, self.ratio)?;
        let t_e = match self.t_e {
            Some(t) => t,
            None => {
                let clean = ChainModel::clean(chain.clone())?;
                find_entangling_time(&clean, self.protocol, &self.search)?.t_e
            }
        };
        let n = self.realizations;
        let jobs: Vec<(usize, usize)> = (0..self.levels.len())
            .flat_map(|l| (0..n).map(move |k| (l, k)))
            .collect();
        let samples = jobs
            .par_iter()
            .map(|&(l, k)| {
                let seed = realization_seed(self.base_seed, k as u64);
                let disorder =
                    DisorderRealization::sample(&chain, self.kind, self.levels[l], seed)?;
                let model = ChainModel::new(chain.clone(), &disorder)?;
                let psi = model.initial_state(self.protocol)?;
                model.eof(&model.spectrum().evolve(&psi, t_e)?)
            })
            .collect::<Result<Vec<f64>>>()?;

        Ok(self
            .levels
            .iter()
            .zip(samples.chunks(n))
            .map(|(&strength, values)| {
                let (mean_eof, std_eof) = mean_and_std(values);
                SweepRecord {
                    protocol: self.protocol,
                    ratio: self.ratio,
                    kind: self.kind,
                    strength,
                    realizations: n,
                    mean_eof,
                    std_eof,
                    base_seed: self.base_seed,
                    t_e,
                }
            })
            .collect())
    }
}

/// Welford mean and sample standard deviation, accumulated in order.
fn mean_and_std(values: &[f64]) -> (f64, f64) {
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for (i, &x) in values.iter().enumerate() {
        let d = x - mean;
        mean += d / (i + 1) as f64;
        m2 += d * (x - mean);
    }
    let var = if values.len() > 1 {
        m2 / (values.len() - 1) as f64
    } else {
        0.0
    };
    (mean, var.max(0.0).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DelayPoint {
    /// Delay as a fraction of `t_E`.
    pub delay: f64,
    pub eof: f64,
    /// Occupation of C just before the second injection.
    pub occupation_c: f64,
    /// Norm² of the final state.
    pub norm_sqr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DelaySweep {
    pub protocol: Protocol,
    pub clean: PeakResult,
    pub points: Vec<DelayPoint>,
}

/// EOF at the clean `t_E` (measured from the first injection) against the
/// delay of the second injection.
pub fn delay_sweep(
    n_sites: usize,
    protocol: Protocol,
    ratio: f64,
    delays: &[f64],
    search: &PeakSearch,
    options: &DelayOptions,
) -> Result<DelaySweep> {
    if !protocol.has_two_injections() {
        return Err(Error::InvalidParameter(format!(
            "protocol {protocol} has a single injection and cannot be delayed"
        )));
    }
    let model = ChainModel::clean(ChainSpec::abc_with_ratio(n_sites, ratio)?)?;
    let clean = find_entangling_time(&model, protocol, search)?;
    let points = delays
        .par_iter()
        .map(|&delay| {
            let out = delayed_protocol_state(
                model.chain(),
                model.spectrum(),
                protocol,
                delay,
                clean.t_e,
                options,
            )?;
            Ok(DelayPoint {
                delay,
                eof: model.reducer().reduce_subnormalized(&out.state)?.eof()?,
                occupation_c: out.occupation_c,
                norm_sqr: out.norm_sqr,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DelaySweep {
        protocol,
        clean,
        points,
    })
}
