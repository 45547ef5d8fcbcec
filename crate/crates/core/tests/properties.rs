use std::f64::consts::PI;
use std::sync::Arc;

use abc_chain::entanglement::binary_entropy;
use abc_chain::{
    ChainModel, ChainSpec, DisorderKind, DisorderRealization, QuantumState, SectorBasis,
    SectorHamiltonian, SpectralDecomposition, TwoQubitDensity,
};
use nalgebra::{DMatrix, Matrix2, Matrix4, Vector4};
use num_complex::Complex64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn random_state(basis: Arc<SectorBasis>, parts: &[(f64, f64)]) -> QuantumState {
    let amps = (0..basis.dim())
        .map(|i| {
            let (a, b) = parts[i % parts.len()];
            c(a + 0.01 * i as f64, b)
        })
        .collect();
    let mut s = QuantumState::from_amplitudes(basis, amps).unwrap();
    s.normalize().unwrap();
    s
}

fn energy(h: &SectorHamiltonian, psi: &QuantumState) -> f64 {
    let hpsi = h.apply(psi.amplitudes()).unwrap();
    psi.amplitudes()
        .iter()
        .zip(&hpsi)
        .map(|(a, b)| (a.conj() * b).re)
        .sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn basis_round_trip(n in 2usize..24, k in 0usize..3) {
        let basis = SectorBasis::new(n, k).unwrap();
        for (i, m) in basis.masks().enumerate() {
            prop_assert_eq!(basis.state_index(m).unwrap(), i);
            prop_assert_eq!(basis.mask(i), m);
        }
        if k == 2 {
            prop_assert_eq!(basis.dim(), 1 + n + n * (n - 1) / 2);
        }
    }

    #[test]
    fn evolution_is_unitary_and_composes(
        ratio in 0.05f64..0.9,
        t1 in 0.0f64..300.0,
        t2 in 0.0f64..300.0,
        parts in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 3..8),
        seed in any::<u64>(),
    ) {
        let chain = ChainSpec::abc_with_ratio(7, ratio).unwrap();
        let d = DisorderRealization::sample(&chain, DisorderKind::Diagonal, 0.7, seed).unwrap();
        let model = ChainModel::new(chain, &d).unwrap();
        let sd = model.spectrum();
        let psi = random_state(model.basis().clone(), &parts);
        let e0 = energy(model.hamiltonian(), &psi);

        let a = sd.evolve(&psi, t1).unwrap();
        prop_assert!((a.norm() - 1.0).abs() < 1e-10);
        prop_assert!((energy(model.hamiltonian(), &a) - e0).abs() < 1e-9);

        let ab = sd.evolve(&a, t2).unwrap();
        let direct = sd.evolve(&psi, t1 + t2).unwrap();
        for (x, y) in ab.amplitudes().iter().zip(direct.amplitudes()) {
            prop_assert!((x - y).norm() < 1e-9);
        }
    }

    #[test]
    fn centre_injection_stays_mirror_symmetric(ratio in 0.05f64..0.9, t in 0.0f64..500.0) {
        let model = ChainModel::clean(ChainSpec::abc_with_ratio(7, ratio).unwrap()).unwrap();
        let psi = model.initial_state(abc_chain::Protocol::BellCentre).unwrap();
        let out = model.spectrum().evolve(&psi, t).unwrap();
        for i in 0..7 {
            let left = out.occupation_probability(i).unwrap();
            let right = out.occupation_probability(6 - i).unwrap();
            prop_assert!((left - right).abs() < 1e-9);
        }
    }

    #[test]
    fn concurrence_is_local_unitary_invariant(
        entries in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 16),
        angles in prop::collection::vec(0.0f64..(2.0 * PI), 8),
    ) {
        // ρ = G G† / tr, a generic full-rank state.
        let g = Matrix4::from_fn(|r, col| {
            let (a, b) = entries[4 * r + col];
            c(a, b)
        });
        let m = g * g.adjoint();
        let rho = TwoQubitDensity::new(m / m.trace()).unwrap();
        let u = local_unitary(&angles[..4]).kronecker(&local_unitary(&angles[4..]));
        let rotated = TwoQubitDensity::new(u * rho.matrix() * u.adjoint()).unwrap();
        let (c0, c1) = (rho.concurrence().unwrap(), rotated.concurrence().unwrap());
        prop_assert!((c0 - c1).abs() < 1e-9, "{} vs {}", c0, c1);
    }

    #[test]
    fn pure_reduced_states_match_entropy(
        amps in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 4),
    ) {
        // A and C in an arbitrary pure state, the rest of the chain empty.
        let chain = ChainSpec::abc_with_ratio(7, 0.2).unwrap();
        let basis = Arc::new(SectorBasis::new(7, 2).unwrap());
        let masks = [0u64, 1 << 6, 1, 1 | 1 << 6];
        let norm = amps.iter().map(|(a, b)| a * a + b * b).sum::<f64>().sqrt();
        prop_assume!(norm > 1e-3);
        let v: Vec<Complex64> = amps.iter().map(|&(a, b)| c(a, b) / norm).collect();
        let psi = QuantumState::from_terms(basis, masks.iter().copied().zip(v.iter().copied())).unwrap();
        let rho = abc_chain::reduce_to_ac(&psi, &chain).unwrap();

        // Entropy of A from the 2×2 reduced state, eigenvalues in closed form.
        let rho_a = Matrix2::new(
            c(v[0].norm_sqr() + v[1].norm_sqr(), 0.0),
            v[0] * v[2].conj() + v[1] * v[3].conj(),
            v[2] * v[0].conj() + v[3] * v[1].conj(),
            c(v[2].norm_sqr() + v[3].norm_sqr(), 0.0),
        );
        let det: f64 = rho_a.determinant().re;
        let p = 0.5 + (0.25 - det).max(0.0).sqrt();
        let entropy = binary_entropy(p);
        prop_assert!((rho.eof().unwrap() - entropy).abs() < 1e-8);
        // Pure-state concurrence 2|ad - bc|.
        let pure_c = 2.0 * (v[0] * v[3] - v[1] * v[2]).norm();
        prop_assert!((rho.concurrence().unwrap() - pure_c).abs() < 1e-9);
    }
}

fn local_unitary(a: &[f64]) -> Matrix2<Complex64> {
    let (theta, phi, lambda, gamma) = (a[0], a[1], a[2], a[3]);
    let g = Complex64::from_polar(1.0, gamma);
    Matrix2::new(
        c((theta / 2.0).cos(), 0.0),
        -Complex64::from_polar((theta / 2.0).sin(), lambda),
        Complex64::from_polar((theta / 2.0).sin(), phi),
        Complex64::from_polar((theta / 2.0).cos(), phi + lambda),
    ) * g
}

/// Characteristic polynomial coefficients by Faddeev–LeVerrier;
/// `coeffs[k]` multiplies `λ^(n-k)`.
fn char_poly(a: &DMatrix<f64>) -> Vec<f64> {
    let n = a.nrows();
    let mut coeffs = vec![1.0];
    let mut m = DMatrix::<f64>::zeros(n, n);
    for k in 1..=n {
        m = a * &m + DMatrix::identity(n, n) * coeffs[k - 1];
        let am = a * &m;
        coeffs.push(-am.trace() / k as f64);
    }
    coeffs
}

#[test]
fn clean_spectrum_is_chiral() {
    for ratio in [0.1, 0.26, 0.5] {
        let chain = ChainSpec::abc_with_ratio(7, ratio).unwrap();
        let h = SectorHamiltonian::clean(&chain).unwrap();
        let sd = SpectralDecomposition::new(&h).unwrap();
        let vals = &sd.sector(1).values;
        for i in 0..7 {
            assert!((vals[i] + vals[6 - i]).abs() < 1e-10);
        }
        assert!(vals[3].abs() < 1e-10);

        // Bipartite hopping: only odd powers of λ survive for odd N, and
        // the constant term (the determinant) vanishes.
        let p = char_poly(h.block(1));
        for (k, coeff) in p.iter().enumerate() {
            if k % 2 == 1 {
                assert!(coeff.abs() < 1e-12, "λ^{} coefficient {coeff}", 7 - k);
            }
        }
        assert!(p[7].abs() < 1e-12);
    }
}

#[test]
fn werner_family_matches_closed_form() {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let phi = Vector4::new(c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s, 0.0));
    for k in 0..=20 {
        let p = k as f64 / 20.0;
        let m = phi * phi.adjoint() * c(p, 0.0) + Matrix4::identity() * c((1.0 - p) / 4.0, 0.0);
        let rho = TwoQubitDensity::new(m).unwrap();
        let want = ((3.0 * p - 1.0) / 2.0).max(0.0);
        assert!((rho.concurrence().unwrap() - want).abs() < 1e-9, "p = {p}");
    }
}
