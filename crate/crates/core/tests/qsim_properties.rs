mod common;

use common::*;
use nalgebra::DMatrix;
use proptest::prelude::*;
use vqec::noise::{build_noise_channel, NoiseKind, NoiseSpec};
use vqec::qsim::{sequence_matrix, DensityMatrix, KrausChannel, C64};

fn noise_kind() -> impl Strategy<Value = NoiseKind> {
    prop_oneof![
        Just(NoiseKind::BitFlip),
        Just(NoiseKind::PhaseFlip),
        Just(NoiseKind::YFlip)
    ]
}

/// `H` on the qubits in `keep`, identity elsewhere, built entry by entry.
fn embed(h: &DMatrix<C64>, keep: &[usize], n: usize) -> DMatrix<C64> {
    let bit = |i: usize, q: usize| (i >> (n - 1 - q)) & 1;
    let sub = |i: usize| keep.iter().fold(0, |acc, &q| (acc << 1) | bit(i, q));
    let dim = 1 << n;
    DMatrix::from_fn(dim, dim, |r, c| {
        let same_rest = (0..n).filter(|q| !keep.contains(q)).all(|q| bit(r, q) == bit(c, q));
        if same_rest {
            h[(sub(r), sub(c))]
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn unitary_conjugation_keeps_the_spectrum(seed in any::<u64>()) {
        let mut r = rng(seed);
        let rho = random_state(3, &mut r);
        let before = sorted(rho.eigenvalues());

        let gate = random_gate(&[0, 1, 2], &mut r);
        let after_gate = sorted(rho.apply_unitary(&gate).unwrap().eigenvalues());
        let after_u = sorted(rho.conjugate(&random_unitary(8, &mut r)).unwrap().eigenvalues());
        for i in 0..8 {
            prop_assert!((before[i] - after_gate[i]).abs() < 1e-10);
            prop_assert!((before[i] - after_u[i]).abs() < 1e-10);
        }
    }

    #[test]
    fn channel_output_is_a_density_matrix(seed in any::<u64>(), kind in noise_kind(), p in 0.0..=1.0f64) {
        let mut r = rng(seed);
        let rho = random_state(3, &mut r);
        let channel = build_noise_channel(&NoiseSpec::new(kind, p, 3).unwrap()).unwrap();
        let out = rho.apply_channel(&channel).unwrap();
        prop_assert!(out.validate().is_ok());
        prop_assert!((out.trace().re - 1.0).abs() < 1e-12);
        prop_assert!(out.hermitian_error() < 1e-12);
    }

    #[test]
    fn partial_trace_is_dual_to_embedding(seed in any::<u64>(), mask in 1u32..15) {
        let mut r = rng(seed);
        let rho = random_state(4, &mut r);
        let keep: Vec<usize> = (0..4).filter(|q| mask & (1 << q) != 0).collect();
        let h = random_hermitian(1 << keep.len(), &mut r);
        let reduced = rho.partial_trace(&keep).unwrap();
        let lhs = (reduced.matrix() * &h).trace();
        let rhs = (rho.matrix() * embed(&h, &keep, 4)).trace();
        prop_assert!((lhs - rhs).norm() < 1e-10);
    }

    #[test]
    fn leading_block_matches_kronecker_embedding(seed in any::<u64>(), k in 1usize..4) {
        let mut r = rng(seed);
        let rho = random_state(4, &mut r);
        let keep: Vec<usize> = (0..k).collect();
        let h = random_hermitian(1 << k, &mut r);
        let lifted = h.kronecker(&DMatrix::<C64>::identity(1 << (4 - k), 1 << (4 - k)));
        let lhs = (rho.partial_trace(&keep).unwrap().matrix() * &h).trace();
        let rhs = (rho.matrix() * lifted).trace();
        prop_assert!((lhs - rhs).norm() < 1e-10);
    }

    #[test]
    fn gates_on_kept_qubits_commute_with_the_trace(seed in any::<u64>(), len in 1usize..8) {
        let mut r = rng(seed);
        let rho = random_state(3, &mut r);
        let gates: Vec<_> = (0..len).map(|_| random_gate(&[0, 1], &mut r)).collect();

        let mut global = rho.clone();
        for g in &gates {
            global = global.apply_unitary(g).unwrap();
        }
        let traced_after = global.partial_trace(&[0, 1]).unwrap();

        let u = sequence_matrix(&gates, 2).unwrap();
        let traced_first = rho.partial_trace(&[0, 1]).unwrap().conjugate(&u).unwrap();
        prop_assert!(max_abs_diff(traced_after.matrix(), traced_first.matrix()) < 1e-10);
    }
}

#[test]
fn noise_channels_are_complete_on_a_grid() {
    for kind in [NoiseKind::BitFlip, NoiseKind::PhaseFlip, NoiseKind::YFlip] {
        for n in 1..=3 {
            for i in 0..=10 {
                let p = i as f64 / 10.0;
                let ch = build_noise_channel(&NoiseSpec::new(kind, p, n).unwrap()).unwrap();
                assert!(ch.completeness_error() < 1e-12, "{kind} n={n} p={p}");
                let sum = ch
                    .operators()
                    .iter()
                    .fold(DMatrix::<C64>::zeros(1 << n, 1 << n), |acc, k| acc + k.adjoint() * k);
                let id = DMatrix::<C64>::identity(1 << n, 1 << n);
                assert!(max_abs_diff(&sum, &id) < 1e-12);
            }
        }
    }
}

#[test]
fn noise_preserves_trace_on_random_states() {
    let mut r = rng(2024);
    for kind in [NoiseKind::BitFlip, NoiseKind::PhaseFlip, NoiseKind::YFlip] {
        let ch = build_noise_channel(&NoiseSpec::new(kind, 0.8, 3).unwrap()).unwrap();
        for _ in 0..100 {
            let out = random_state(3, &mut r).apply_channel(&ch).unwrap();
            assert!((out.trace() - C64::new(1.0, 0.0)).norm() < 1e-12);
        }
    }
}

#[test]
fn noise_is_unital() {
    for kind in [NoiseKind::BitFlip, NoiseKind::PhaseFlip, NoiseKind::YFlip] {
        for p in [0.0, 0.3, 0.8, 1.0] {
            let ch = build_noise_channel(&NoiseSpec::new(kind, p, 3).unwrap()).unwrap();
            let mixed = DMatrix::<C64>::identity(8, 8) / C64::new(8.0, 0.0);
            let out = DensityMatrix::new(mixed.clone()).unwrap().apply_channel(&ch).unwrap();
            assert!(max_abs_diff(out.matrix(), &mixed) < 1e-12);
        }
    }
}

#[test]
fn incomplete_kraus_set_is_rejected() {
    let half = DMatrix::<C64>::identity(2, 2) * C64::new(0.5, 0.0);
    assert!(KrausChannel::new(vec![half]).is_err());
}

#[test]
fn qubit_zero_is_the_most_significant_bit() {
    let rho = vqec::qsim::pure_state(3, &[1, 0, 0]).unwrap();
    assert_eq!(rho.population(0b100), 1.0);
}
