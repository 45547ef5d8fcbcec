#![allow(dead_code)]

use num_complex::Complex64;

/// `H|s⟩` for the full `2^N` space, written directly from the operator form.
#[allow(clippy::needless_range_loop)] // bit positions double as site indices
pub fn full_apply(n: usize, onsite: &[f64], bonds: &[f64], psi: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); psi.len()];
    for (s, &a) in psi.iter().enumerate() {
        if a.re == 0.0 && a.im == 0.0 {
            continue;
        }
        for i in 0..n {
            if s >> i & 1 == 1 {
                out[s] += a * onsite[i];
            }
        }
        for i in 0..n - 1 {
            let (x, y) = (s >> i & 1, s >> (i + 1) & 1);
            if x != y {
                out[s ^ (1 << i) ^ (1 << (i + 1))] += a * bonds[i];
            }
        }
    }
    out
}

/// `e^{-iHt}ψ` by a truncated Taylor series on short substeps.
pub fn full_evolve(
    n: usize,
    onsite: &[f64],
    bonds: &[f64],
    psi: &[Complex64],
    t: f64,
) -> Vec<Complex64> {
    let norm_bound: f64 = 2.0 * bonds.iter().map(|j| j.abs()).sum::<f64>()
        + onsite.iter().map(|e| e.abs()).sum::<f64>();
    let steps = ((t * norm_bound / 0.5).ceil() as usize).max(1);
    let dt = t / steps as f64;
    let mut state = psi.to_vec();
    for _ in 0..steps {
        let mut term = state.clone();
        let mut acc = state.clone();
        for k in 1..40 {
            let h = full_apply(n, onsite, bonds, &term);
            let factor = Complex64::new(0.0, -dt / k as f64);
            term = h.into_iter().map(|x| x * factor).collect();
            let size: f64 = term.iter().map(|z| z.norm()).sum();
            acc.iter_mut().zip(&term).for_each(|(a, t)| *a += t);
            if size < 1e-18 {
                break;
            }
        }
        state = acc;
    }
    state
}
