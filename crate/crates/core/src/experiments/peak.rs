use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::search::golden_section_max;
use super::ChainModel;
use crate::error::{Error, Result};
use crate::hamiltonian::ChainSpec;
use crate::protocol::Protocol;

/// Entangling time and the EOF reached there.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeakResult {
    pub ratio: f64,
    pub t_e: f64,
    pub eof: f64,
}

/// Window end, in units of the perturbative mirroring-time scale.
///
/// For the 7-site chain the first entanglement maximum sits near
/// `(π/√2)·Δ/δ²` for protocol (i) and half that for (ii)/(iii); the next one
/// is three times further out. `1.5π` times that scale keeps exactly one.
pub const DEFAULT_WINDOW_FACTOR: f64 = 1.5 * PI;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PeakSearch {
    /// Explicit `[start, end]`; overrides `window_factor`.
    pub window: Option<(f64, f64)>,
    pub window_factor: f64,
    pub grid_points: usize,
    /// Relative tolerance on `t_E`.
    pub rel_tol: f64,
    /// Coarse-grid local maxima refined before picking the best.
    pub candidates: usize,
}

impl Default for PeakSearch {
    fn default() -> Self {
        Self {
            window: None,
            window_factor: DEFAULT_WINDOW_FACTOR,
            grid_points: 4000,
            rel_tol: 1e-6,
            candidates: 3,
        }
    }
}

impl PeakSearch {
    /// `[0, f·s·(Δ/δ)^(2+m)/Δ]` with `s` the protocol's mirror fraction and
    /// `m` the number of added dimer pairs.
    pub fn window_for(&self, chain: &ChainSpec, protocol: Protocol) -> (f64, f64) {
        if let Some(w) = self.window {
            return w;
        }
        let inv_ratio = chain.big_delta() / chain.delta();
        let end = self.window_factor
            * protocol.mirror_fraction()
            * inv_ratio.powi(2 + chain.extension() as i32)
            / chain.big_delta();
        (0.0, end)
    }

    fn validate(&self, window: (f64, f64)) -> Result<()> {
        let (start, end) = window;
        if !(start.is_finite() && end.is_finite() && 0.0 <= start && start < end) {
            return Err(Error::InvalidParameter(format!(
                "search window [{start}, {end}] must be finite, non-negative and non-empty"
            )));
        }
        if self.grid_points < 3 {
            return Err(Error::InvalidParameter(
                "peak search needs at least 3 grid points".into(),
            ));
        }
        if !(self.rel_tol > 0.0) || self.candidates == 0 {
            return Err(Error::InvalidParameter(
                "peak search needs a positive tolerance and at least one candidate".into(),
            ));
        }
        Ok(())
    }
}

/// Global EOF maximum of `protocol` on the clean `model` within the window.
///
/// A coarse uniform grid locates candidate maxima; the best few are refined
/// by golden-section search on their neighbouring grid cells.
pub fn find_entangling_time(
    model: &ChainModel,
    protocol: Protocol,
    search: &PeakSearch,
) -> Result<PeakResult> {
    let window = search.window_for(model.chain(), protocol);
    search.validate(window)?;
    let (start, end) = window;
    let curve = model.eof_curve(protocol)?;
    let n = search.grid_points;
    let step = (end - start) / (n - 1) as f64;
    let times: Vec<f64> = (0..n).map(|k| start + k as f64 * step).collect();
    let values = times
        .iter()
        .map(|&t| curve.eof_at(t))
        .collect::<Result<Vec<_>>>()?;

    let (best, &best_val) = values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1).then(b.0.cmp(&a.0)))
        .expect("grid is non-empty");
    if best == 0 || best == n - 1 || best_val <= 0.0 {
        return Err(Error::PeakNotFound { start, end });
    }

    let mut interior: Vec<usize> = (1..n - 1)
        .filter(|&k| values[k] >= values[k - 1] && values[k] >= values[k + 1])
        .collect();
    interior.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    interior.truncate(search.candidates);

    let mut peak: Option<(f64, f64)> = None;
    for k in interior {
        let tol = search.rel_tol * times[k];
        let (t, eof) = golden_section_max(|t| curve.eof_at(t), times[k - 1], times[k + 1], tol)?;
        let (t, eof) = if eof >= values[k] {
            (t, eof)
        } else {
            (times[k], values[k])
        };
        if peak.is_none_or(|(_, e)| eof > e) {
            peak = Some((t, eof));
        }
    }
    let (t_e, eof) = peak.ok_or(Error::PeakNotFound { start, end })?;
    Ok(PeakResult {
        ratio: model.chain().ratio(),
        t_e,
        eof,
    })
}

/// EOF along an ascending, non-negative time grid.
pub fn eof_trace(model: &ChainModel, protocol: Protocol, times: &[f64]) -> Result<Vec<(f64, f64)>> {
    if times.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
        return Err(Error::InvalidParameter(
            "trace times must be finite and non-negative".into(),
        ));
    }
    if times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidParameter(
            "trace times must be ascending".into(),
        ));
    }
    let curve = model.eof_curve(protocol)?;
    times.iter().map(|&t| Ok((t, curve.eof_at(t)?))).collect()
}
