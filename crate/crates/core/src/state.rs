use std::sync::Arc;

use num_complex::Complex64;

use crate::basis::{Mask, SectorBasis};
use crate::error::{Error, Result};

/// Complex amplitudes over the concatenated sectors of a [`SectorBasis`].
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    basis: Arc<SectorBasis>,
    amplitudes: Vec<Complex64>,
}

impl QuantumState {
    pub fn zeros(basis: Arc<SectorBasis>) -> Self {
        let amplitudes = vec![Complex64::new(0.0, 0.0); basis.dim()];
        Self { basis, amplitudes }
    }

    pub fn vacuum(basis: Arc<SectorBasis>) -> Self {
        Self::basis_state(basis, 0).expect("vacuum is in every basis")
    }

    pub fn basis_state(basis: Arc<SectorBasis>, mask: Mask) -> Result<Self> {
        let i = basis.state_index(mask)?;
        let mut state = Self::zeros(basis);
        state.amplitudes[i] = Complex64::new(1.0, 0.0);
        Ok(state)
    }

    pub fn from_amplitudes(basis: Arc<SectorBasis>, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != basis.dim() {
            return Err(Error::InvalidInput(format!(
                "{} amplitudes for a basis of dimension {}",
                amplitudes.len(),
                basis.dim()
            )));
        }
        Ok(Self { basis, amplitudes })
    }

    /// Builds a state from `(mask, amplitude)` terms; repeated masks add.
    pub fn from_terms(
        basis: Arc<SectorBasis>,
        terms: impl IntoIterator<Item = (Mask, Complex64)>,
    ) -> Result<Self> {
        let mut state = Self::zeros(basis);
        for (mask, amp) in terms {
            let i = state.basis.state_index(mask)?;
            state.amplitudes[i] += amp;
        }
        Ok(state)
    }

    pub fn basis(&self) -> &Arc<SectorBasis> {
        &self.basis
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn amplitude(&self, mask: Mask) -> Result<Complex64> {
        Ok(self.amplitudes[self.basis.state_index(mask)?])
    }

    pub fn sector(&self, k: usize) -> &[Complex64] {
        &self.amplitudes[self.basis.sector_range(k)]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(Complex64::norm_sqr).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn sector_norm_sqr(&self, k: usize) -> f64 {
        self.sector(k).iter().map(Complex64::norm_sqr).sum()
    }

    pub fn normalize(&mut self) -> Result<()> {
        let norm = self.norm();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "cannot normalise a state of norm {norm}"
            )));
        }
        self.amplitudes.iter_mut().for_each(|a| *a /= norm);
        Ok(())
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &QuantumState) -> Result<Complex64> {
        self.check_basis(other.basis())?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Probability that `site` holds an excitation.
    pub fn occupation_probability(&self, site: usize) -> Result<f64> {
        self.basis.check_site(site)?;
        Ok(self
            .basis
            .masks()
            .zip(&self.amplitudes)
            .filter(|(m, _)| m >> site & 1 == 1)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    pub(crate) fn check_basis(&self, basis: &SectorBasis) -> Result<()> {
        if *self.basis != *basis {
            return Err(Error::InvalidInput(format!(
                "state lives in a {}-site basis up to {} excitations, expected {} sites up to {}",
                self.basis.n_sites(),
                self.basis.max_excitations(),
                basis.n_sites(),
                basis.max_excitations()
            )));
        }
        Ok(())
    }
}
