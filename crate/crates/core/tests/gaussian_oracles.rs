mod common;

use common::fock_basis::{fock_moments, FockState};
use nalgebra::{DMatrix, DVector};
use qir_core::gaussian::{symplectic_form, thermal_closed_forms};
use qir_core::{rel_entropy, rel_entropy_variance, scenario_states, GaussianState, ThermalScenario};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const DIM: usize = 160;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

#[test]
fn thermal_pairs_match_diagonal_sums() {
    for (n0, n1) in [(0.3, 1.0), (2.0, 0.5), (1.0, 1.5), (4.0, 4.5)] {
        let r0: f64 = n0 / (n0 + 1.0);
        let r1: f64 = n1 / (n1 + 1.0);
        let (mut d, mut second) = (0.0f64, 0.0f64);
        for k in 0..4000 {
            let p = (1.0 - r0) * r0.powi(k);
            let z = ((1.0 - r0) / (1.0 - r1)).ln() + k as f64 * (r0 / r1).ln();
            d += p * z;
            second += p * z * z;
        }
        let v = second - d * d;
        let s0 = GaussianState::thermal(n0, [0.0, 0.0]).unwrap();
        let s1 = GaussianState::thermal(n1, [0.0, 0.0]).unwrap();
        assert!(rel(rel_entropy(&s0, &s1).unwrap(), d) < 1e-11, "D at ({n0}, {n1})");
        assert!(rel(rel_entropy_variance(&s0, &s1).unwrap(), v) < 1e-10, "V at ({n0}, {n1})");
    }
}

#[test]
fn squeezed_displaced_states_match_fock_basis() {
    let cases = [
        // (nbar, alpha, squeeze) for ρ₀ and ρ₁
        ((0.7, 0.8, 0.3), (1.2, 0.0, 0.0)),
        ((1.2, 0.0, 0.0), (0.7, -0.5, 0.25)),
        ((0.4, 0.3, -0.2), (0.9, 0.6, 0.35)),
        ((2.0, 1.0, 0.0), (2.0, 0.0, 0.0)),
    ];
    for ((n0, a0, s0), (n1, a1, s1)) in cases {
        let f0 = FockState::new(DIM, n0, a0, s0);
        let f1 = FockState::new(DIM, n1, a1, s1);
        let (d_ref, v_ref) = fock_moments(&f0, &f1);
        let (g0, g1) = (f0.gaussian(), f1.gaussian());
        let d = rel_entropy(&g0, &g1).unwrap();
        let v = rel_entropy_variance(&g0, &g1).unwrap();
        assert!(rel(d, d_ref) < 1e-6, "D {d} vs {d_ref}");
        assert!(rel(v, v_ref) < 1e-6, "V {v} vs {v_ref}");
    }
}

#[test]
fn scenario_states_match_fock_basis() {
    // A displaced thermal state against the thermal background, both orders.
    let (nb, gamma) = (1.5f64, 0.4f64);
    let s = ThermalScenario::from_snr(nb, gamma).unwrap();
    let (rho0, rho1) = scenario_states(&s);
    let alpha = (gamma * nb).sqrt();
    let f0 = FockState::new(DIM, nb, 0.0, 0.0);
    let f1 = FockState::new(DIM, nb, alpha, 0.0);
    let (d_ref, v_ref) = fock_moments(&f0, &f1);
    assert!(rel(rel_entropy(&rho0, &rho1).unwrap(), d_ref) < 1e-8);
    assert!(rel(rel_entropy_variance(&rho0, &rho1).unwrap(), v_ref) < 1e-8);
    let closed = thermal_closed_forms(&s);
    assert!(rel(closed.d, d_ref) < 1e-8 && rel(closed.v, v_ref) < 1e-8);
    let (d_rev, v_rev) = fock_moments(&f1, &f0);
    assert!(rel(rel_entropy(&rho1, &rho0).unwrap(), d_rev) < 1e-8);
    assert!(rel(rel_entropy_variance(&rho1, &rho0).unwrap(), v_rev) < 1e-8);
}

fn rotation(theta: f64) -> DMatrix<f64> {
    let (s, c) = theta.sin_cos();
    DMatrix::from_row_slice(2, 2, &[c, -s, s, c])
}

fn block_diag(blocks: &[DMatrix<f64>]) -> DMatrix<f64> {
    let n: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = DMatrix::zeros(n, n);
    let mut o = 0;
    for b in blocks {
        out.view_mut((o, o), (b.nrows(), b.ncols())).copy_from(b);
        o += b.nrows();
    }
    out
}

fn random_single_mode_symplectic(rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    let r: f64 = rng.gen_range(-0.8..0.8);
    let squeeze = DMatrix::from_row_slice(2, 2, &[r.exp(), 0.0, 0.0, (-r).exp()]);
    rotation(rng.gen_range(0.0..6.3)) * squeeze * rotation(rng.gen_range(0.0..6.3))
}

/// Beam splitter on the ordering (q₁, p₁, q₂, p₂).
fn beam_splitter(theta: f64) -> DMatrix<f64> {
    let (s, c) = theta.sin_cos();
    DMatrix::from_row_slice(
        4,
        4,
        &[c, 0.0, s, 0.0, 0.0, c, 0.0, s, -s, 0.0, c, 0.0, 0.0, -s, 0.0, c],
    )
}

fn random_state(rng: &mut ChaCha8Rng, modes: usize) -> GaussianState {
    let nus: Vec<f64> = (0..modes).map(|_| 0.5 + rng.gen_range(0.05..3.0)).collect();
    let diag = DMatrix::from_diagonal(&DVector::from_iterator(
        2 * modes,
        nus.iter().flat_map(|&nu| [nu, nu]),
    ));
    let mut s = block_diag(&(0..modes).map(|_| random_single_mode_symplectic(rng)).collect::<Vec<_>>());
    if modes == 2 {
        s = &s * beam_splitter(rng.gen_range(0.0..1.5))
            * block_diag(&[random_single_mode_symplectic(rng), random_single_mode_symplectic(rng)]);
    }
    let omega = symplectic_form(modes);
    assert!((&s * &omega * s.transpose() - &omega).abs().max() < 1e-12);
    let cm = &s * diag * s.transpose();
    let mean = DVector::from_fn(2 * modes, |_, _| rng.gen_range(-2.0..2.0));
    GaussianState::new(mean, (&cm + cm.transpose()) * 0.5).unwrap()
}

#[test]
fn random_pairs_have_nonnegative_moments() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for modes in [1usize, 2] {
        for _ in 0..100 {
            let a = random_state(&mut rng, modes);
            let b = random_state(&mut rng, modes);
            let d = rel_entropy(&a, &b).unwrap();
            let v = rel_entropy_variance(&a, &b).unwrap();
            assert!(d >= 0.0 && v >= 0.0, "D = {d}, V = {v}");
            assert_eq!(rel_entropy(&a, &a).unwrap(), 0.0);
            assert_eq!(rel_entropy_variance(&a, &a).unwrap(), 0.0);
        }
    }
}

#[test]
fn symplectic_eigenvalues_are_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let nu = 0.5 + rng.gen_range(0.1..2.0);
        let s = random_single_mode_symplectic(&mut rng);
        let cm = &s * DMatrix::identity(2, 2) * nu * s.transpose();
        let st = GaussianState::new(DVector::zeros(2), (&cm + cm.transpose()) * 0.5).unwrap();
        let got = st.symplectic_eigenvalues().unwrap();
        assert!((got[0] - nu).abs() < 1e-10, "{got:?} vs {nu}");
    }
}

#[test]
fn closed_forms_agree_on_grid() {
    for nb in [0.5, 1.0, 10.0, 600.0] {
        for gamma in [0.1, 1.0, 10.0] {
            let s = ThermalScenario::from_snr(nb, gamma).unwrap();
            let (r0, r1) = scenario_states(&s);
            let c = thermal_closed_forms(&s);
            assert!(rel(rel_entropy(&r0, &r1).unwrap(), c.d) < 1e-9);
            assert!(rel(rel_entropy_variance(&r0, &r1).unwrap(), c.v) < 1e-9);
        }
    }
}
