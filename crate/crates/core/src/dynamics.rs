//! Exact time evolution by per-sector spectral decomposition, and the
//! delayed second injection at site C.

use std::f64::consts::FRAC_1_SQRT_2;
use std::sync::Arc;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::basis::SectorBasis;
use crate::error::{Error, Result};
use crate::hamiltonian::{ChainSpec, SectorHamiltonian};
use crate::protocol::Protocol;
use crate::state::QuantumState;

const EIGEN_MAX_ITERATIONS: usize = 10_000;

/// Eigenvalues (ascending) and orthonormal eigenvectors (columns) of one block.
#[derive(Debug, Clone)]
pub struct SectorSpectrum {
    pub values: Vec<f64>,
    pub vectors: DMatrix<f64>,
}

#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    basis: Arc<SectorBasis>,
    sectors: Vec<SectorSpectrum>,
}

impl SpectralDecomposition {
    pub fn new(h: &SectorHamiltonian) -> Result<Self> {
        let sectors = h
            .blocks()
            .iter()
            .enumerate()
            .map(|(k, block)| {
                decompose_block(block).map_err(|e| match e {
                    Error::NumericalFailure(msg) => {
                        Error::NumericalFailure(format!("sector {k}: {msg}"))
                    }
                    other => other,
                })
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            basis: h.basis().clone(),
            sectors,
        })
    }

    pub fn basis(&self) -> &Arc<SectorBasis> {
        &self.basis
    }

    pub fn sector(&self, k: usize) -> &SectorSpectrum {
        &self.sectors[k]
    }

    /// `ψ(t) = V e^{-iΛt} Vᵀ ψ(0)` sector by sector. `t = 0` returns `psi`
    /// unchanged.
    pub fn evolve(&self, psi: &QuantumState, t: f64) -> Result<QuantumState> {
        check_time(t)?;
        psi.check_basis(&self.basis)?;
        if t == 0.0 {
            return Ok(psi.clone());
        }
        Ok(self.trajectory(psi)?.state_at(t))
    }

    /// Precomputes eigenbasis coefficients of `psi` for repeated evaluation.
    pub fn trajectory(&self, psi: &QuantumState) -> Result<Trajectory<'_>> {
        psi.check_basis(&self.basis)?;
        let coefficients = self
            .sectors
            .iter()
            .enumerate()
            .map(|(k, s)| {
                let c = psi.sector(k);
                (0..s.values.len())
                    .map(|j| {
                        s.vectors
                            .column(j)
                            .iter()
                            .zip(c)
                            .map(|(v, a)| a * *v)
                            .sum::<Complex64>()
                    })
                    .collect()
            })
            .collect();
        Ok(Trajectory {
            spectrum: self,
            coefficients,
        })
    }
}

fn decompose_block(block: &DMatrix<f64>) -> Result<SectorSpectrum> {
    if block.iter().any(|x| !x.is_finite()) {
        return Err(Error::NumericalFailure(
            "block has non-finite entries".into(),
        ));
    }
    let eig = SymmetricEigen::try_new(block.clone(), f64::EPSILON, EIGEN_MAX_ITERATIONS)
        .ok_or_else(|| Error::NumericalFailure("symmetric eigensolver did not converge".into()))?;
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values: Vec<f64> = order.iter().map(|&j| eig.eigenvalues[j]).collect();
    let n = block.nrows();
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    if values.iter().chain(vectors.iter()).any(|x| !x.is_finite()) {
        return Err(Error::NumericalFailure(
            "eigensolver returned non-finite values".into(),
        ));
    }
    Ok(SectorSpectrum { values, vectors })
}

fn check_time(t: f64) -> Result<()> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::InvalidInput(format!(
            "time must be finite and non-negative, got {t}"
        )));
    }
    Ok(())
}

/// A state expanded in the eigenbasis, ready to be evaluated at any time.
#[derive(Debug, Clone)]
pub struct Trajectory<'a> {
    spectrum: &'a SpectralDecomposition,
    coefficients: Vec<Vec<Complex64>>,
}

impl Trajectory<'_> {
    pub fn basis(&self) -> &Arc<SectorBasis> {
        &self.spectrum.basis
    }

    pub fn state_at(&self, t: f64) -> QuantumState {
        let mut amps = vec![Complex64::new(0.0, 0.0); self.spectrum.basis.dim()];
        self.write_at(t, &mut amps);
        QuantumState::from_amplitudes(self.spectrum.basis.clone(), amps)
            .expect("length matches basis")
    }

    /// Writes the amplitudes at time `t` into `out` (length = basis dimension).
    pub fn write_at(&self, t: f64, out: &mut [Complex64]) {
        let mut phased = Vec::new();
        for (k, (s, coeffs)) in self
            .spectrum
            .sectors
            .iter()
            .zip(&self.coefficients)
            .enumerate()
        {
            let range = self.spectrum.basis.sector_range(k);
            let dst = &mut out[range];
            phased.clear();
            phased.extend(
                s.values
                    .iter()
                    .zip(coeffs)
                    .map(|(&e, &c)| c * Complex64::from_polar(1.0, -e * t)),
            );
            dst.iter_mut().for_each(|a| *a = Complex64::new(0.0, 0.0));
            for (j, p) in phased.iter().enumerate() {
                if p.re == 0.0 && p.im == 0.0 {
                    continue;
                }
                for (a, v) in dst.iter_mut().zip(s.vectors.column(j).iter()) {
                    *a += p * *v;
                }
            }
        }
    }
}

/// Knobs for the two-step injection of protocols (i) and (ii).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DelayOptions {
    /// Largest admissible delay as a fraction of `t_E`.
    pub max_fraction: f64,
    /// Largest admissible occupation of site C just before the second
    /// injection.
    pub occupation_threshold: f64,
    /// Rescale the injected state to unit norm. Off by default: the
    /// injection map is applied as is and its norm deficit, of the order of
    /// the amplitude on C, is carried into the reduced state.
    pub renormalize: bool,
}

impl Default for DelayOptions {
    fn default() -> Self {
        Self {
            max_fraction: 0.1,
            occupation_threshold: 1e-3,
            renormalize: false,
        }
    }
}

/// Applies the delayed injection at site C to a state that so far carries
/// at most one excitation.
///
/// Protocol (ii) flips C up: every component with C empty gains an
/// excitation there. Protocol (i) applies `|0⟩_C → (|0⟩_C + |1⟩_C)/√2`.
/// Components that already had C occupied (weight below the threshold) are
/// dropped for (ii) and kept with a `1/√2` factor for (i). The result is not
/// rescaled, so its norm differs from 1 by an amount that vanishes with the
/// occupation of C.
pub fn inject_at_c(
    psi: &QuantumState,
    chain: &ChainSpec,
    protocol: Protocol,
    occupation_threshold: f64,
) -> Result<QuantumState> {
    if !protocol.has_two_injections() {
        return Err(Error::InvalidParameter(format!(
            "protocol {protocol} has a single injection"
        )));
    }
    let basis = psi.basis().clone();
    if basis.n_sites() != chain.n_sites() {
        return Err(Error::InvalidInput(
            "state and chain differ in length".into(),
        ));
    }
    if basis.max_excitations() < 2 {
        return Err(Error::InvalidInput(
            "the second injection needs the two-excitation sector".into(),
        ));
    }
    let two_ex = psi.sector_norm_sqr(2);
    if two_ex > 0.0 {
        return Err(Error::InvalidInput(format!(
            "state already has two-excitation weight {two_ex:e}; a further injection would leave the basis"
        )));
    }
    let c = chain.defects().c;
    let occupation = psi.occupation_probability(c)?;
    if !(occupation <= occupation_threshold) {
        return Err(Error::InjectionInvalid {
            occupation,
            threshold: occupation_threshold,
        });
    }

    let c_bit = 1u64 << c;
    let mut out = QuantumState::zeros(basis.clone());
    let (keep, flip) = match protocol {
        Protocol::Cluster => (FRAC_1_SQRT_2, FRAC_1_SQRT_2),
        _ => (0.0, 1.0),
    };
    for (i, mask) in basis.masks().enumerate() {
        let a = psi.amplitudes()[i];
        if a.re == 0.0 && a.im == 0.0 {
            continue;
        }
        if mask & c_bit == 0 {
            let target = basis.state_index(mask | c_bit)?;
            out.amplitudes_mut()[target] += a * flip;
            out.amplitudes_mut()[i] += a * keep;
        } else {
            out.amplitudes_mut()[i] += a * keep;
        }
    }
    Ok(out)
}

/// State at total time `t_e` after injecting at A at `t = 0` and at C at
/// `t_D = delay·t_e`.
pub fn delayed_protocol_state(
    chain: &ChainSpec,
    spectrum: &SpectralDecomposition,
    protocol: Protocol,
    delay: f64,
    t_e: f64,
    options: &DelayOptions,
) -> Result<DelayedState> {
    if !(delay.is_finite() && (0.0..=options.max_fraction).contains(&delay)) {
        return Err(Error::InvalidParameter(format!(
            "delay fraction must lie in [0, {}], got {delay}",
            options.max_fraction
        )));
    }
    check_time(t_e)?;
    let basis = spectrum.basis().clone();
    let first = protocol.first_injection_state(basis, chain)?;
    let t_d = delay * t_e;
    let before = spectrum.evolve(&first, t_d)?;
    let occupation_c = before.occupation_probability(chain.defects().c)?;
    let mut after = inject_at_c(&before, chain, protocol, options.occupation_threshold)?;
    if options.renormalize {
        after.normalize()?;
    }
    let state = spectrum.evolve(&after, t_e - t_d)?;
    Ok(DelayedState {
        norm_sqr: state.norm_sqr(),
        state,
        occupation_c,
    })
}

#[derive(Debug, Clone)]
pub struct DelayedState {
    /// Not rescaled unless [`DelayOptions::renormalize`] is set.
    pub state: QuantumState,
    /// Occupation of site C immediately before the second injection.
    pub occupation_c: f64,
    pub norm_sqr: f64,
}
