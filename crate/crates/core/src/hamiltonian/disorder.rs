use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::ChainSpec;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DisorderKind {
    None,
    /// Random on-site energies.
    Diagonal,
    /// Random bond couplings.
    OffDiagonal,
}

impl fmt::Display for DisorderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DisorderKind::None => "none",
            DisorderKind::Diagonal => "diagonal",
            DisorderKind::OffDiagonal => "off-diagonal",
        })
    }
}

impl FromStr for DisorderKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(DisorderKind::None),
            "diagonal" | "diag" => Ok(DisorderKind::Diagonal),
            "off-diagonal" | "offdiagonal" | "off" => Ok(DisorderKind::OffDiagonal),
            other => Err(Error::InvalidParameter(format!(
                "unknown disorder kind {other:?} (expected none, diagonal or off-diagonal)"
            ))),
        }
    }
}

/// One static draw of on-site energies and bond perturbations.
///
/// Non-zero entries are `E·r·δ` with `r` uniform on `[-1/2, 1/2)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DisorderRealization {
    pub kind: DisorderKind,
    pub strength: f64,
    pub seed: u64,
    pub onsite: Vec<f64>,
    pub bond_shifts: Vec<f64>,
}

impl DisorderRealization {
    pub fn none(n_sites: usize) -> Self {
        Self {
            kind: DisorderKind::None,
            strength: 0.0,
            seed: 0,
            onsite: vec![0.0; n_sites],
            bond_shifts: vec![0.0; n_sites.saturating_sub(1)],
        }
    }

    /// Deterministic in `(chain, kind, strength, seed)`.
    pub fn sample(chain: &ChainSpec, kind: DisorderKind, strength: f64, seed: u64) -> Result<Self> {
        if !(strength.is_finite() && strength >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "disorder strength must be finite and non-negative, got {strength}"
            )));
        }
        let n = chain.n_sites();
        let mut out = Self {
            kind,
            strength,
            seed,
            ..Self::none(n)
        };
        if strength == 0.0 {
            return Ok(out);
        }

        let scale = strength * chain.delta();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut draw = || scale * (rng.random::<f64>() - 0.5);
        match kind {
            DisorderKind::None => {}
            DisorderKind::Diagonal => out.onsite.iter_mut().for_each(|e| *e = draw()),
            DisorderKind::OffDiagonal => out.bond_shifts.iter_mut().for_each(|j| *j = draw()),
        }
        Ok(out)
    }

    pub fn n_sites(&self) -> usize {
        self.onsite.len()
    }
}

/// Seed for realization `index` of a sweep with base seed `base`.
///
/// SplitMix64 finaliser applied to `base + (index + 1)·φ`, where `φ` is the
/// 64-bit golden-ratio increment. Depends only on `(base, index)`.
pub fn realization_seed(base: u64, index: u64) -> u64 {
    const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;
    let mut z = base.wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
