use std::sync::Arc;

use num_complex::Complex64;

use crate::basis::SectorBasis;
use crate::dynamics::{SpectralDecomposition, Trajectory};
use crate::entanglement::PairReducer;
use crate::error::Result;
use crate::hamiltonian::{ChainSpec, DisorderRealization, SectorHamiltonian};
use crate::protocol::Protocol;
use crate::state::QuantumState;

/// A chain with its Hamiltonian diagonalised and the A–C partial trace
/// prepared.
#[derive(Debug, Clone)]
pub struct ChainModel {
    chain: ChainSpec,
    hamiltonian: SectorHamiltonian,
    spectrum: SpectralDecomposition,
    reducer: PairReducer,
}

impl ChainModel {
    pub fn new(chain: ChainSpec, disorder: &DisorderRealization) -> Result<Self> {
        let basis = Arc::new(SectorBasis::new(chain.n_sites(), 2)?);
        let hamiltonian = SectorHamiltonian::build(&chain, disorder, basis.clone())?;
        let spectrum = SpectralDecomposition::new(&hamiltonian)?;
        let reducer = PairReducer::for_chain(&basis, &chain)?;
        Ok(Self {
            chain,
            hamiltonian,
            spectrum,
            reducer,
        })
    }

    pub fn clean(chain: ChainSpec) -> Result<Self> {
        let n = chain.n_sites();
        Self::new(chain, &DisorderRealization::none(n))
    }

    pub fn chain(&self) -> &ChainSpec {
        &self.chain
    }

    pub fn basis(&self) -> &Arc<SectorBasis> {
        self.hamiltonian.basis()
    }

    pub fn hamiltonian(&self) -> &SectorHamiltonian {
        &self.hamiltonian
    }

    pub fn spectrum(&self) -> &SpectralDecomposition {
        &self.spectrum
    }

    pub fn reducer(&self) -> &PairReducer {
        &self.reducer
    }

    pub fn initial_state(&self, protocol: Protocol) -> Result<QuantumState> {
        protocol.initial_state(self.basis().clone(), &self.chain)
    }

    /// A–C entanglement of formation of `psi`.
    pub fn eof(&self, psi: &QuantumState) -> Result<f64> {
        self.reducer.reduce(psi)?.eof()
    }

    /// EOF along the clean evolution of `protocol`'s initial state.
    pub fn eof_curve(&self, protocol: Protocol) -> Result<EofCurve<'_>> {
        let psi = self.initial_state(protocol)?;
        Ok(EofCurve {
            trajectory: self.spectrum.trajectory(&psi)?,
            reducer: &self.reducer,
        })
    }
}

/// `t ↦ EOF(ρ_AC(t))` for one initial state.
#[derive(Debug, Clone)]
pub struct EofCurve<'a> {
    trajectory: Trajectory<'a>,
    reducer: &'a PairReducer,
}

impl EofCurve<'_> {
    pub fn eof_at(&self, t: f64) -> Result<f64> {
        let mut buf = vec![Complex64::new(0.0, 0.0); self.trajectory.basis().dim()];
        self.trajectory.write_at(t, &mut buf);
        self.reducer.reduce_amplitudes(&buf)?.eof()
    }

    pub fn state_at(&self, t: f64) -> QuantumState {
        self.trajectory.state_at(t)
    }
}
