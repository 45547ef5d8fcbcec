//! Chain layouts, static disorder and the sector-blocked XY Hamiltonian
//!
//! ```text
//! H = Σ ε_i |1⟩⟨1|_i + Σ J_{i,i+1} (|1⟩⟨0|_i ⊗ |0⟩⟨1|_{i+1} + h.c.)
//! ```
//!
//! Each excitation sector gets its own dense real symmetric block.

mod chain;
mod disorder;

use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

pub use chain::{ChainSpec, DefectSites};
pub use disorder::{realization_seed, DisorderKind, DisorderRealization};

use crate::basis::SectorBasis;
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct SectorHamiltonian {
    basis: Arc<SectorBasis>,
    blocks: Vec<DMatrix<f64>>,
}

impl SectorHamiltonian {
    pub fn build(
        chain: &ChainSpec,
        disorder: &DisorderRealization,
        basis: Arc<SectorBasis>,
    ) -> Result<Self> {
        let n = chain.n_sites();
        if basis.n_sites() != n {
            return Err(Error::InvalidInput(format!(
                "basis has {} sites, chain has {n}",
                basis.n_sites()
            )));
        }
        if disorder.onsite.len() != n || disorder.bond_shifts.len() != n - 1 {
            return Err(Error::InvalidInput(format!(
                "disorder sized for {} sites / {} bonds, chain has {n} sites",
                disorder.onsite.len(),
                disorder.bond_shifts.len()
            )));
        }
        let couplings: Vec<f64> = chain
            .bonds()
            .iter()
            .zip(&disorder.bond_shifts)
            .map(|(j, dj)| j + dj)
            .collect();

        let mut blocks = Vec::with_capacity(basis.n_sectors());
        for k in 0..basis.n_sectors() {
            let masks = basis.sector(k);
            let offset = basis.offset(k);
            let mut block = DMatrix::zeros(masks.len(), masks.len());
            for (row, &mask) in masks.iter().enumerate() {
                block[(row, row)] = (0..n)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| disorder.onsite[i])
                    .sum();
                for (i, &j) in couplings.iter().enumerate() {
                    let hop = (1u64 << i) | (1u64 << (i + 1));
                    // Hopping acts only when exactly one of the two sites is up.
                    if (mask & hop).count_ones() == 1 {
                        let col = basis.state_index(mask ^ hop)? - offset;
                        block[(row, col)] = j;
                    }
                }
            }
            blocks.push(block);
        }
        Ok(Self { basis, blocks })
    }

    /// Clean chain in a freshly built two-excitation basis.
    pub fn clean(chain: &ChainSpec) -> Result<Self> {
        let basis = Arc::new(SectorBasis::new(chain.n_sites(), 2)?);
        Self::build(chain, &DisorderRealization::none(chain.n_sites()), basis)
    }

    pub fn basis(&self) -> &Arc<SectorBasis> {
        &self.basis
    }

    pub fn block(&self, sector: usize) -> &DMatrix<f64> {
        &self.blocks[sector]
    }

    pub fn blocks(&self) -> &[DMatrix<f64>] {
        &self.blocks
    }

    /// `H·ψ` on a flat amplitude vector.
    pub fn apply(&self, amplitudes: &[Complex64]) -> Result<Vec<Complex64>> {
        if amplitudes.len() != self.basis.dim() {
            return Err(Error::InvalidInput(format!(
                "vector of length {} does not match basis dimension {}",
                amplitudes.len(),
                self.basis.dim()
            )));
        }
        let mut out = vec![Complex64::new(0.0, 0.0); amplitudes.len()];
        for (k, block) in self.blocks.iter().enumerate() {
            let range = self.basis.sector_range(k);
            let src = &amplitudes[range.clone()];
            for (r, dst) in out[range].iter_mut().enumerate() {
                *dst = src.iter().enumerate().map(|(c, a)| a * block[(r, c)]).sum();
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::Mask;

    /// The full `2^N` Hamiltonian, written straight from the operator form.
    #[allow(clippy::needless_range_loop)] // bit positions double as site indices
    fn full_space(n: usize, onsite: &[f64], bonds: &[f64]) -> DMatrix<f64> {
        let dim = 1usize << n;
        let mut h = DMatrix::zeros(dim, dim);
        for s in 0..dim {
            for i in 0..n {
                if s >> i & 1 == 1 {
                    h[(s, s)] += onsite[i];
                }
            }
            for i in 0..n - 1 {
                // |1⟩⟨0|_i ⊗ |0⟩⟨1|_{i+1} moves an excitation from i+1 to i.
                if s >> i & 1 == 0 && s >> (i + 1) & 1 == 1 {
                    let t = s ^ (1 << i) ^ (1 << (i + 1));
                    h[(t, s)] += bonds[i];
                    h[(s, t)] += bonds[i];
                }
            }
        }
        h
    }

    fn assert_blocks_match_full(h: &SectorHamiltonian, full: &DMatrix<f64>) {
        let basis = h.basis();
        for k in 0..basis.n_sectors() {
            let masks = basis.sector(k);
            for (r, &mr) in masks.iter().enumerate() {
                for (c, &mc) in masks.iter().enumerate() {
                    assert_eq!(h.block(k)[(r, c)], full[(mr as usize, mc as usize)]);
                }
            }
        }
        // Nothing in the full matrix couples different sectors.
        let dim = full.nrows();
        for s in 0..dim {
            for t in 0..dim {
                if (s as Mask).count_ones() != (t as Mask).count_ones() {
                    assert_eq!(full[(s, t)], 0.0);
                }
            }
        }
    }

    #[test]
    fn clean_seven_site_single_excitation_block() {
        let chain = ChainSpec::abc(7, 0.1, 1.0).unwrap();
        let h = SectorHamiltonian::clean(&chain).unwrap();
        let b = h.block(1);
        assert_eq!(b.shape(), (7, 7));
        let expected = [0.1, 1.0, 0.1, 0.1, 1.0, 0.1];
        for r in 0..7 {
            for c in 0..7 {
                let want = if c == r + 1 {
                    expected[r]
                } else if r == c + 1 {
                    expected[c]
                } else {
                    0.0
                };
                assert_eq!(b[(r, c)], want);
            }
        }
        assert_eq!(h.block(0)[(0, 0)], 0.0);
        let full = full_space(7, &[0.0; 7], chain.bonds());
        assert_blocks_match_full(&h, &full);
    }

    #[test]
    fn two_site_block() {
        let chain = ChainSpec::from_bonds(vec![0.37]).unwrap();
        let h = SectorHamiltonian::clean(&chain).unwrap();
        assert_eq!(
            h.block(1),
            &DMatrix::from_row_slice(2, 2, &[0.0, 0.37, 0.37, 0.0])
        );
        assert_eq!(h.block(2), &DMatrix::from_element(1, 1, 0.0));
    }

    #[test]
    fn disordered_blocks_match_full_space() {
        for (kind, seed) in [(DisorderKind::Diagonal, 3), (DisorderKind::OffDiagonal, 4)] {
            for n in [7, 5, 2] {
                let chain = if n == 7 {
                    ChainSpec::abc(7, 0.3, 1.0).unwrap()
                } else {
                    ChainSpec::from_bonds((0..n - 1).map(|i| 0.2 + 0.1 * i as f64).collect())
                        .unwrap()
                };
                let d = DisorderRealization::sample(&chain, kind, 0.8, seed).unwrap();
                let basis = Arc::new(SectorBasis::new(n, 2).unwrap());
                let h = SectorHamiltonian::build(&chain, &d, basis).unwrap();
                let bonds: Vec<f64> = chain
                    .bonds()
                    .iter()
                    .zip(&d.bond_shifts)
                    .map(|(a, b)| a + b)
                    .collect();
                let full = full_space(n, &d.onsite, &bonds);
                assert_blocks_match_full(&h, &full);
            }
        }
    }

    #[test]
    fn pair_diagonal_is_additive() {
        let chain = ChainSpec::abc(7, 0.1, 1.0).unwrap();
        let d = DisorderRealization::sample(&chain, DisorderKind::Diagonal, 1.0, 5).unwrap();
        let basis = Arc::new(SectorBasis::new(7, 2).unwrap());
        let h = SectorHamiltonian::build(&chain, &d, basis.clone()).unwrap();
        let idx = basis.pair_index(0, 6).unwrap() - basis.offset(2);
        assert_eq!(h.block(2)[(idx, idx)], d.onsite[0] + d.onsite[6]);
    }

    #[test]
    fn blocks_are_exactly_symmetric() {
        let chain = ChainSpec::abc(11, 0.25, 1.0).unwrap();
        let d = DisorderRealization::sample(&chain, DisorderKind::OffDiagonal, 1.0, 11).unwrap();
        let basis = Arc::new(SectorBasis::new(11, 2).unwrap());
        let h = SectorHamiltonian::build(&chain, &d, basis).unwrap();
        for b in h.blocks() {
            assert_eq!(b, &b.transpose());
        }
        assert_eq!(h.block(2).shape(), (55, 55));
    }

    #[test]
    fn single_excitation_block_commutes_with_reflection() {
        let chain = ChainSpec::abc(7, 0.2, 1.0).unwrap();
        let h = SectorHamiltonian::clean(&chain).unwrap();
        let n = 7;
        let p = DMatrix::from_fn(n, n, |r, c| if r + c == n - 1 { 1.0 } else { 0.0 });
        let b = h.block(1);
        assert_eq!(&p * b, b * &p);
    }

    #[test]
    fn mismatched_inputs() {
        let chain = ChainSpec::abc(7, 0.1, 1.0).unwrap();
        let basis = Arc::new(SectorBasis::new(11, 2).unwrap());
        assert!(matches!(
            SectorHamiltonian::build(&chain, &DisorderRealization::none(7), basis),
            Err(Error::InvalidInput(_))
        ));
        let basis = Arc::new(SectorBasis::new(7, 2).unwrap());
        assert!(matches!(
            SectorHamiltonian::build(&chain, &DisorderRealization::none(6), basis),
            Err(Error::InvalidInput(_))
        ));
    }
}
