//! Excitation-number sectors of an `N`-site chain.
//!
//! The XY Hamiltonian conserves the number of up spins, so states are stored
//! sector by sector: the vacuum, the `N` single-excitation states and the
//! `N(N-1)/2` pair states. Site `i` corresponds to bit `i` of a [`Mask`].

use std::collections::HashMap;
use std::ops::Range;

use crate::error::{Error, Result};

/// Occupation bitmask; bit `i` set means site `i` is in `|1⟩`.
pub type Mask = u64;

/// Largest sector this crate enumerates.
pub const MAX_EXCITATIONS: usize = 2;

#[derive(Debug, Clone)]
pub struct SectorBasis {
    n_sites: usize,
    sectors: Vec<Vec<Mask>>,
    offsets: Vec<usize>,
    index: HashMap<Mask, usize>,
}

impl PartialEq for SectorBasis {
    fn eq(&self, other: &Self) -> bool {
        // The enumeration is a pure function of these two numbers.
        self.n_sites == other.n_sites && self.sectors.len() == other.sectors.len()
    }
}

impl Eq for SectorBasis {}

impl SectorBasis {
    /// Enumerates sectors `0..=max_excitations`.
    ///
    /// Sector 1 is ordered by site, sector 2 lexicographically by
    /// `(lower site, higher site)`.
    pub fn new(n_sites: usize, max_excitations: usize) -> Result<Self> {
        if n_sites < 2 {
            return Err(Error::InvalidChain(format!(
                "a chain needs at least 2 sites, got {n_sites}"
            )));
        }
        if n_sites > Mask::BITS as usize {
            return Err(Error::InvalidChain(format!(
                "at most {} sites fit in a mask, got {n_sites}",
                Mask::BITS
            )));
        }
        if max_excitations > MAX_EXCITATIONS {
            return Err(Error::InvalidParameter(format!(
                "max_excitations must be at most {MAX_EXCITATIONS}, got {max_excitations}"
            )));
        }

        let mut sectors = vec![vec![0 as Mask]];
        if max_excitations >= 1 {
            sectors.push((0..n_sites).map(|i| 1 << i).collect());
        }
        if max_excitations >= 2 {
            let mut pairs = Vec::with_capacity(n_sites * (n_sites - 1) / 2);
            for lo in 0..n_sites {
                for hi in lo + 1..n_sites {
                    pairs.push((1 << lo) | (1 << hi));
                }
            }
            sectors.push(pairs);
        }

        let mut offsets = Vec::with_capacity(sectors.len());
        let mut index = HashMap::new();
        let mut next = 0;
        for sector in &sectors {
            offsets.push(next);
            for &mask in sector {
                index.insert(mask, next);
                next += 1;
            }
        }

        Ok(Self {
            n_sites,
            sectors,
            offsets,
            index,
        })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn max_excitations(&self) -> usize {
        self.sectors.len() - 1
    }

    pub fn n_sectors(&self) -> usize {
        self.sectors.len()
    }

    /// Total dimension of the concatenated amplitude vector.
    pub fn dim(&self) -> usize {
        self.index.len()
    }

    pub fn sector(&self, k: usize) -> &[Mask] {
        &self.sectors[k]
    }

    pub fn sector_sizes(&self) -> Vec<usize> {
        self.sectors.iter().map(Vec::len).collect()
    }

    pub fn offset(&self, k: usize) -> usize {
        self.offsets[k]
    }

    /// Flat index range occupied by sector `k`.
    pub fn sector_range(&self, k: usize) -> Range<usize> {
        let start = self.offsets[k];
        start..start + self.sectors[k].len()
    }

    /// Every mask in flat-index order.
    pub fn masks(&self) -> impl Iterator<Item = Mask> + '_ {
        self.sectors.iter().flatten().copied()
    }

    pub fn mask(&self, index: usize) -> Mask {
        let k = self
            .offsets
            .iter()
            .rposition(|&o| o <= index)
            .expect("offset 0 always matches");
        self.sectors[k][index - self.offsets[k]]
    }

    /// Position of `mask` in the concatenated amplitude vector.
    pub fn state_index(&self, mask: Mask) -> Result<usize> {
        if self.n_sites < Mask::BITS as usize && mask >> self.n_sites != 0 {
            return Err(Error::InvalidInput(format!(
                "mask {mask:#b} addresses sites beyond the {}-site chain",
                self.n_sites
            )));
        }
        let popcount = mask.count_ones();
        if popcount as usize > self.max_excitations() {
            return Err(Error::SectorOverflow {
                mask,
                popcount,
                max: self.max_excitations(),
            });
        }
        Ok(self.index[&mask])
    }

    /// Flat index of the state with a single excitation on `site`.
    pub fn site_index(&self, site: usize) -> Result<usize> {
        self.check_site(site)?;
        self.state_index(1 << site)
    }

    /// Flat index of the pair state `{a, b}`, `a != b`.
    pub fn pair_index(&self, a: usize, b: usize) -> Result<usize> {
        self.check_site(a)?;
        self.check_site(b)?;
        if a == b {
            return Err(Error::InvalidInput(format!(
                "pair ({a}, {b}) repeats a site"
            )));
        }
        self.state_index((1 << a) | (1 << b))
    }

    pub(crate) fn check_site(&self, site: usize) -> Result<()> {
        if site >= self.n_sites {
            return Err(Error::InvalidInput(format!(
                "site {site} outside the {}-site chain",
                self.n_sites
            )));
        }
        Ok(())
    }
}
