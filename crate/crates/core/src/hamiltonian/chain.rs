use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Indices of the three weakly coupled sites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DefectSites {
    pub a: usize,
    pub b: usize,
    pub c: usize,
}

/// Coupling layout of a chain.
///
/// Energies are in units of the strong coupling and `ħ = 1`, so times are in
/// units of `1/Δ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainSpec {
    n_sites: usize,
    delta: f64,
    big_delta: f64,
    bonds: Vec<f64>,
    defects: DefectSites,
}

impl ChainSpec {
    /// Builds the ABC layout for `n_sites = 7 + 4m`.
    ///
    /// Counting from either end, bonds alternate `δ, Δ, δ, …` and the two
    /// bonds meeting at the centre are both `δ`, so the end sites and the
    /// centre site touch only weak bonds.
    pub fn abc(n_sites: usize, delta: f64, big_delta: f64) -> Result<Self> {
        if n_sites < 7 || !(n_sites - 7).is_multiple_of(4) {
            return Err(Error::InvalidGeometry { n_sites });
        }
        if !(delta.is_finite() && big_delta.is_finite() && 0.0 < delta && delta < big_delta) {
            return Err(Error::InvalidCouplings { delta, big_delta });
        }
        let half: Vec<f64> = (0..(n_sites - 1) / 2)
            .map(|k| if k % 2 == 0 { delta } else { big_delta })
            .collect();
        let bonds = half.iter().chain(half.iter().rev()).copied().collect();
        Ok(Self {
            n_sites,
            delta,
            big_delta,
            bonds,
            defects: DefectSites::centred(n_sites),
        })
    }

    /// ABC layout at a given `δ/Δ` with `Δ = 1`.
    pub fn abc_with_ratio(n_sites: usize, ratio: f64) -> Result<Self> {
        Self::abc(n_sites, ratio, 1.0)
    }

    /// A chain with arbitrary bond couplings and no layout constraint.
    ///
    /// `delta`/`big_delta` are reported as the smallest and largest bond.
    /// Defect sites are placed at the ends and the centre.
    pub fn from_bonds(bonds: Vec<f64>) -> Result<Self> {
        if bonds.is_empty() {
            return Err(Error::InvalidChain(
                "a chain needs at least one bond".into(),
            ));
        }
        if bonds.iter().any(|j| !j.is_finite()) {
            return Err(Error::InvalidChain("bond couplings must be finite".into()));
        }
        let n_sites = bonds.len() + 1;
        let delta = bonds.iter().copied().fold(f64::INFINITY, f64::min);
        let big_delta = bonds.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Ok(Self {
            n_sites,
            delta,
            big_delta,
            bonds,
            defects: DefectSites::centred(n_sites),
        })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn big_delta(&self) -> f64 {
        self.big_delta
    }

    pub fn ratio(&self) -> f64 {
        self.delta / self.big_delta
    }

    /// `J[i]` couples sites `i` and `i + 1`.
    pub fn bonds(&self) -> &[f64] {
        &self.bonds
    }

    pub fn defects(&self) -> DefectSites {
        self.defects
    }

    /// Number of dimer pairs added on top of the 7-site chain.
    pub fn extension(&self) -> usize {
        self.n_sites.saturating_sub(7) / 4
    }
}

impl DefectSites {
    fn centred(n_sites: usize) -> Self {
        Self {
            a: 0,
            b: (n_sites - 1) / 2,
            c: n_sites - 1,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Exhaustive layout check: among the two alternating phases of each
    /// half, keep those whose mirror-symmetric chain leaves exactly sites
    /// `0`, `(N-1)/2` and `N-1` touching only weak bonds.
    fn brute_force_layout(n: usize, d: f64, big: f64) -> Vec<Vec<f64>> {
        let h = (n - 1) / 2;
        let mut found = Vec::new();
        for phase in 0..2 {
            let half: Vec<f64> = (0..h)
                .map(|k| if (k + phase) % 2 == 0 { d } else { big })
                .collect();
            let mut bonds = half.clone();
            bonds.extend(half.iter().rev());
            let weak_only: Vec<usize> = (0..n)
                .filter(|&s| {
                    let left = s.checked_sub(1).map(|i| bonds[i]);
                    let right = bonds.get(s).copied();
                    left.into_iter().chain(right).all(|j| j == d)
                })
                .collect();
            let strong_once = (0..n).filter(|s| !weak_only.contains(s)).all(|s| {
                let left = s.checked_sub(1).map(|i| bonds[i]);
                let right = bonds.get(s).copied();
                left.into_iter().chain(right).filter(|&j| j == big).count() == 1
            });
            if weak_only == [0, (n - 1) / 2, n - 1] && strong_once {
                found.push(bonds);
            }
        }
        found
    }

    #[test]
    fn seven_site_layout() {
        let chain = ChainSpec::abc(7, 0.1, 1.0).unwrap();
        assert_eq!(chain.bonds(), [0.1, 1.0, 0.1, 0.1, 1.0, 0.1]);
        assert_eq!(
            brute_force_layout(7, 0.1, 1.0),
            vec![chain.bonds().to_vec()]
        );
        assert_eq!(chain.defects(), DefectSites { a: 0, b: 3, c: 6 });
    }

    #[test]
    fn eleven_site_layout() {
        let chain = ChainSpec::abc(11, 0.1, 1.0).unwrap();
        assert_eq!(
            chain.bonds(),
            [0.1, 1.0, 0.1, 1.0, 0.1, 0.1, 1.0, 0.1, 1.0, 0.1]
        );
        assert_eq!(
            brute_force_layout(11, 0.1, 1.0),
            vec![chain.bonds().to_vec()]
        );
        assert_eq!(chain.extension(), 1);
    }

    #[test]
    fn layouts_are_mirror_symmetric() {
        for n in [7, 11, 15, 19] {
            let chain = ChainSpec::abc(n, 0.3, 1.0).unwrap();
            let j = chain.bonds();
            assert_eq!(j.len(), n - 1);
            for i in 0..j.len() {
                assert_eq!(j[i], j[n - 2 - i]);
            }
            assert_eq!(brute_force_layout(n, 0.3, 1.0), vec![j.to_vec()]);
        }
    }

    #[test]
    fn rejects_bad_geometry_and_couplings() {
        for n in [9, 8, 3, 13] {
            assert_eq!(
                ChainSpec::abc(n, 0.1, 1.0),
                Err(Error::InvalidGeometry { n_sites: n })
            );
        }
        assert!(matches!(
            ChainSpec::abc(7, 1.0, 1.0),
            Err(Error::InvalidCouplings { .. })
        ));
        assert!(matches!(
            ChainSpec::abc(7, 0.0, 1.0),
            Err(Error::InvalidCouplings { .. })
        ));
        assert!(matches!(
            ChainSpec::abc(7, f64::NAN, 1.0),
            Err(Error::InvalidCouplings { .. })
        ));
    }

    #[test]
    fn custom_bonds() {
        let chain = ChainSpec::from_bonds(vec![0.7]).unwrap();
        assert_eq!(chain.n_sites(), 2);
        assert_eq!(chain.defects(), DefectSites { a: 0, b: 0, c: 1 });
        assert!(ChainSpec::from_bonds(vec![]).is_err());
    }
}
