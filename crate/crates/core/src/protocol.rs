use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::basis::{Mask, SectorBasis};
use crate::error::{Error, Result};
use crate::hamiltonian::ChainSpec;
use crate::state::QuantumState;

/// The three injection schemes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Protocol {
    /// (i) `|+⟩` injected at both ends; yields the cluster-state building block.
    #[serde(rename = "i")]
    Cluster,
    /// (ii) `|1⟩` injected at both ends; yields a Bell state.
    #[serde(rename = "ii")]
    BellPair,
    /// (iii) `|1⟩` injected at the centre; yields a Bell state.
    #[serde(rename = "iii")]
    BellCentre,
}

impl Protocol {
    pub const ALL: [Protocol; 3] = [Protocol::Cluster, Protocol::BellPair, Protocol::BellCentre];

    /// Excitation sectors the protocol ever populates.
    pub fn sectors(self) -> &'static [usize] {
        match self {
            Protocol::Cluster => &[0, 1, 2],
            Protocol::BellPair => &[2],
            Protocol::BellCentre => &[1],
        }
    }

    /// Whether the protocol injects at both ends (and so can be delayed).
    pub fn has_two_injections(self) -> bool {
        matches!(self, Protocol::Cluster | Protocol::BellPair)
    }

    /// Entangling time in units of the mirroring time: `1` for the cluster
    /// protocol, `1/2` for the Bell protocols.
    pub fn mirror_fraction(self) -> f64 {
        match self {
            Protocol::Cluster => 1.0,
            Protocol::BellPair | Protocol::BellCentre => 0.5,
        }
    }

    /// The `t = 0` state of the chain.
    pub fn initial_state(self, basis: Arc<SectorBasis>, chain: &ChainSpec) -> Result<QuantumState> {
        if basis.n_sites() != chain.n_sites() {
            return Err(Error::InvalidInput(format!(
                "basis has {} sites, chain has {}",
                basis.n_sites(),
                chain.n_sites()
            )));
        }
        let s = chain.defects();
        let (a, b, c): (Mask, Mask, Mask) = (1 << s.a, 1 << s.b, 1 << s.c);
        match self {
            Protocol::Cluster => {
                let half = Complex64::new(0.5, 0.0);
                QuantumState::from_terms(basis, [(0, half), (a, half), (c, half), (a | c, half)])
            }
            Protocol::BellPair => QuantumState::basis_state(basis, a | c),
            Protocol::BellCentre => QuantumState::basis_state(basis, b),
        }
    }

    /// State right after the first of two delayed injections (site A only).
    pub fn first_injection_state(
        self,
        basis: Arc<SectorBasis>,
        chain: &ChainSpec,
    ) -> Result<QuantumState> {
        let a: Mask = 1 << chain.defects().a;
        match self {
            Protocol::Cluster => {
                let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
                QuantumState::from_terms(basis, [(0, h), (a, h)])
            }
            Protocol::BellPair => QuantumState::basis_state(basis, a),
            Protocol::BellCentre => Err(Error::InvalidParameter(
                "protocol iii has a single injection".into(),
            )),
        }
    }
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Protocol::Cluster => "i",
            Protocol::BellPair => "ii",
            Protocol::BellCentre => "iii",
        })
    }
}

impl FromStr for Protocol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "i" | "1" | "cluster" => Ok(Protocol::Cluster),
            "ii" | "2" | "bell-pair" => Ok(Protocol::BellPair),
            "iii" | "3" | "bell-centre" | "bell-center" => Ok(Protocol::BellCentre),
            other => Err(Error::InvalidParameter(format!(
                "unknown protocol {other:?} (expected i, ii or iii)"
            ))),
        }
    }
}
