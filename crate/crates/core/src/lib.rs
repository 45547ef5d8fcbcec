//! Exact simulation of entangling protocols in ABC-type dimerised spin chains.
//!
//! A chain of `N = 7 + 4m` spins with alternating weak (`δ`) and strong (`Δ`)
//! couplings leaves three sites (A at the left end, B at the centre, C at the
//! right end) weakly coupled to the rest. Injecting excitations at A and C,
//! or at B, and letting the XY Hamiltonian act generates an entangled pair
//! on A and C.
//!
//! ```
//! use abc_chain::{ChainModel, ChainSpec, PeakSearch, Protocol, find_entangling_time};
//!
//! let chain = ChainSpec::abc_with_ratio(7, 0.26)?;
//! let model = ChainModel::clean(chain)?;
//! let peak = find_entangling_time(&model, Protocol::BellPair, &PeakSearch::default())?;
//! assert!(peak.eof > 0.99);
//! # Ok::<(), abc_chain::Error>(())
//! ```

// `!(x <= tol)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod basis;
pub mod dynamics;
pub mod entanglement;
mod error;
pub mod experiments;
pub mod hamiltonian;
mod protocol;
mod state;

pub use nalgebra;
pub use num_complex;

pub use basis::{Mask, SectorBasis};
pub use dynamics::{
    delayed_protocol_state, inject_at_c, DelayOptions, DelayedState, SpectralDecomposition,
};
pub use entanglement::{
    binary_entropy, eof_from_concurrence, reduce_to_ac, PairReducer, TwoQubitDensity,
};
pub use error::{Error, Result};
pub use experiments::{
    delay_sweep, eof_trace, find_entangling_time, ratio_sweep, ChainModel, DelayPoint, DelaySweep,
    DisorderSweep, PeakResult, PeakSearch, RatioSweep, SweepRecord,
};
pub use hamiltonian::{
    realization_seed, ChainSpec, DefectSites, DisorderKind, DisorderRealization, SectorHamiltonian,
};
pub use protocol::Protocol;
pub use state::QuantumState;

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
mod readme {}

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/chain.md")]
    mod chain {}
    #[doc = include_str!("../../../book/src/dynamics.md")]
    mod dynamics {}
    #[doc = include_str!("../../../book/src/entanglement.md")]
    mod entanglement {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
