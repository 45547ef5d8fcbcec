//! Reduced state of the two end sites and its entanglement of formation.

use std::collections::HashMap;

use nalgebra::{Matrix4, SymmetricEigen};
use num_complex::Complex64;

use crate::basis::{Mask, SectorBasis};
use crate::error::{Error, Result};
use crate::hamiltonian::ChainSpec;
use crate::state::QuantumState;

const HERMITIAN_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-10;
/// Eigenvalues of ρ below this are rejected as non-physical.
const NEGATIVITY_TOL: f64 = 1e-8;

/// 4×4 density matrix in the order `|0_A 0_C⟩, |0_A 1_C⟩, |1_A 0_C⟩, |1_A 1_C⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitDensity {
    matrix: Matrix4<Complex64>,
}

impl TwoQubitDensity {
    /// Checks hermiticity and unit trace.
    pub fn new(matrix: Matrix4<Complex64>) -> Result<Self> {
        let trace = Self::checked_trace(&matrix)?;
        if !((trace - 1.0).abs() <= TRACE_TOL) {
            return Err(Error::InvalidState(format!("trace is {trace}, expected 1")));
        }
        Ok(Self { matrix })
    }

    /// Accepts a trace in `(0, 1]`, as left by a non-unitary injection.
    /// Concurrence is homogeneous in `ρ`, so it comes out scaled by the trace.
    pub fn new_subnormalized(matrix: Matrix4<Complex64>) -> Result<Self> {
        let trace = Self::checked_trace(&matrix)?;
        if !(trace > 0.0 && trace <= 1.0 + TRACE_TOL) {
            return Err(Error::InvalidState(format!(
                "trace is {trace}, expected (0, 1]"
            )));
        }
        Ok(Self { matrix })
    }

    fn checked_trace(matrix: &Matrix4<Complex64>) -> Result<f64> {
        let skew = (matrix - matrix.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if !(skew <= HERMITIAN_TOL) {
            return Err(Error::InvalidState(format!(
                "not Hermitian (max |ρ - ρ†| = {skew:e})"
            )));
        }
        let trace = matrix.trace();
        if !(trace.im.abs() <= TRACE_TOL) {
            return Err(Error::InvalidState(format!(
                "trace is {trace}, expected real"
            )));
        }
        Ok(trace.re)
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// `|ψ⟩⟨ψ|` for a normalised two-qubit vector.
    pub fn pure(psi: [Complex64; 4]) -> Result<Self> {
        let v = nalgebra::Vector4::from(psi);
        Self::new(v * v.adjoint())
    }

    pub fn matrix(&self) -> &Matrix4<Complex64> {
        &self.matrix
    }

    pub fn eigenvalues(&self) -> [f64; 4] {
        let e = SymmetricEigen::new(self.matrix).eigenvalues;
        let mut out = [e[0], e[1], e[2], e[3]];
        out.sort_by(f64::total_cmp);
        out
    }

    /// `⟨φ|ρ|φ⟩`, insensitive to the global phase of `φ`.
    pub fn fidelity_with_pure(&self, phi: [Complex64; 4]) -> f64 {
        let v = nalgebra::Vector4::from(phi);
        (v.adjoint() * self.matrix * v)[(0, 0)].re
    }

    /// Wootters concurrence `max(0, λ₁ - λ₂ - λ₃ - λ₄)`.
    ///
    /// The `λ`s (square roots of the eigenvalues of `ρ ρ̃`, with
    /// `ρ̃ = (σ_y⊗σ_y) ρ* (σ_y⊗σ_y)`) are taken as the singular values of
    /// `√ρ √ρ̃`, which keeps them real and non-negative.
    pub fn concurrence(&self) -> Result<f64> {
        let eig = SymmetricEigen::new(self.matrix);
        let min = eig
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        if min < -NEGATIVITY_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        let mut sqrt_rho = Matrix4::<Complex64>::zeros();
        for (j, &ev) in eig.eigenvalues.iter().enumerate() {
            let root = ev.max(0.0).sqrt();
            if root == 0.0 {
                continue;
            }
            let v = eig.eigenvectors.column(j);
            sqrt_rho += v * v.adjoint() * Complex64::new(root, 0.0);
        }
        let sqrt_tilde = spin_flip(&sqrt_rho);
        let mut lambdas: Vec<f64> = (sqrt_rho * sqrt_tilde)
            .singular_values()
            .iter()
            .copied()
            .collect();
        lambdas.sort_by(|a, b| b.total_cmp(a));
        let c = lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3];
        Ok(c.clamp(0.0, 1.0))
    }

    /// Entanglement of formation in ebits.
    pub fn eof(&self) -> Result<f64> {
        Ok(eof_from_concurrence(self.concurrence()?))
    }
}

/// `(σ_y⊗σ_y) M* (σ_y⊗σ_y)`.
fn spin_flip(m: &Matrix4<Complex64>) -> Matrix4<Complex64> {
    // σ_y⊗σ_y is real and anti-diagonal with signs (-, +, +, -).
    const SIGN: [f64; 4] = [-1.0, 1.0, 1.0, -1.0];
    Matrix4::from_fn(|r, c| m[(3 - r, 3 - c)].conj() * (SIGN[r] * SIGN[c]))
}

/// `h((1 + √(1 - C²))/2)` with `h` the binary entropy.
pub fn eof_from_concurrence(c: f64) -> f64 {
    let c = c.clamp(0.0, 1.0);
    if c == 0.0 {
        return 0.0;
    }
    binary_entropy((1.0 + (1.0 - c * c).max(0.0).sqrt()) / 2.0)
}

/// `-x log₂ x - (1-x) log₂(1-x)`, with `h(0) = h(1) = 0`.
pub fn binary_entropy(x: f64) -> f64 {
    let term = |p: f64| if p <= 0.0 { 0.0 } else { -p * p.log2() };
    term(x) + term(1.0 - x)
}

/// Precomputed partial trace onto two sites of a [`SectorBasis`].
#[derive(Debug, Clone)]
pub struct PairReducer {
    n_sites: usize,
    max_excitations: usize,
    n_groups: usize,
    /// Per flat index: (environment group, two-qubit index).
    slots: Vec<(usize, usize)>,
}

impl PairReducer {
    pub fn new(basis: &SectorBasis, site_a: usize, site_c: usize) -> Result<Self> {
        basis.check_site(site_a)?;
        basis.check_site(site_c)?;
        if site_a == site_c {
            return Err(Error::InvalidInput("the two sites must differ".into()));
        }
        let keep: Mask = (1 << site_a) | (1 << site_c);
        let mut groups: HashMap<Mask, usize> = HashMap::new();
        let slots = basis
            .masks()
            .map(|m| {
                let next = groups.len();
                let g = *groups.entry(m & !keep).or_insert(next);
                let two = 2 * ((m >> site_a & 1) as usize) + (m >> site_c & 1) as usize;
                (g, two)
            })
            .collect();
        Ok(Self {
            n_sites: basis.n_sites(),
            max_excitations: basis.max_excitations(),
            n_groups: groups.len(),
            slots,
        })
    }

    pub fn for_chain(basis: &SectorBasis, chain: &ChainSpec) -> Result<Self> {
        if basis.n_sites() != chain.n_sites() {
            return Err(Error::InvalidInput(format!(
                "basis has {} sites, chain has {}",
                basis.n_sites(),
                chain.n_sites()
            )));
        }
        let d = chain.defects();
        Self::new(basis, d.a, d.c)
    }

    /// `ρ[(a,c),(a',c')] = Σ_rest ψ(a,c,rest) ψ*(a',c',rest)`.
    pub fn reduce_amplitudes(&self, amplitudes: &[Complex64]) -> Result<TwoQubitDensity> {
        TwoQubitDensity::new(self.partial_trace(amplitudes)?)
    }

    fn partial_trace(&self, amplitudes: &[Complex64]) -> Result<Matrix4<Complex64>> {
        if amplitudes.len() != self.slots.len() {
            return Err(Error::InvalidInput(format!(
                "{} amplitudes for a reducer built on dimension {}",
                amplitudes.len(),
                self.slots.len()
            )));
        }
        let mut vecs = vec![[Complex64::new(0.0, 0.0); 4]; self.n_groups];
        for (&(g, i), &a) in self.slots.iter().zip(amplitudes) {
            vecs[g][i] += a;
        }
        let mut rho = Matrix4::<Complex64>::zeros();
        for v in &vecs {
            for r in 0..4 {
                if v[r].re == 0.0 && v[r].im == 0.0 {
                    continue;
                }
                for c in 0..4 {
                    rho[(r, c)] += v[r] * v[c].conj();
                }
            }
        }
        Ok(rho)
    }

    pub fn reduce(&self, psi: &QuantumState) -> Result<TwoQubitDensity> {
        self.check_state(psi)?;
        self.reduce_amplitudes(psi.amplitudes())
    }

    /// Like [`reduce`](Self::reduce) for states of norm at most 1.
    pub fn reduce_subnormalized(&self, psi: &QuantumState) -> Result<TwoQubitDensity> {
        self.check_state(psi)?;
        TwoQubitDensity::new_subnormalized(self.partial_trace(psi.amplitudes())?)
    }

    fn check_state(&self, psi: &QuantumState) -> Result<()> {
        let b = psi.basis();
        if b.n_sites() != self.n_sites || b.max_excitations() != self.max_excitations {
            return Err(Error::InvalidInput(
                "state basis differs from the reducer's".into(),
            ));
        }
        Ok(())
    }
}

/// Reduced density matrix of the chain's sites A and C.
pub fn reduce_to_ac(psi: &QuantumState, chain: &ChainSpec) -> Result<TwoQubitDensity> {
    PairReducer::for_chain(psi.basis(), chain)?.reduce(psi)
}
