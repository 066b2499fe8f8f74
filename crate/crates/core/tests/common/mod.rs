#![allow(dead_code)]

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vqec::qsim::{Control, DensityMatrix, Mat2, Pauli, Rotation, UnitaryGate, C64};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_complex(d: usize, rng: &mut ChaCha8Rng) -> DMatrix<C64> {
    DMatrix::from_fn(d, d, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

/// Full-rank mixed state `G G^dag / Tr`.
pub fn random_state(n: usize, rng: &mut ChaCha8Rng) -> DensityMatrix {
    let g = random_complex(1 << n, rng);
    let rho = &g * g.adjoint();
    let tr = rho.trace();
    DensityMatrix::new(rho / tr).unwrap()
}

pub fn random_pure(n: usize, rng: &mut ChaCha8Rng) -> Vec<C64> {
    let v: Vec<C64> = (0..1 << n)
        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

pub fn random_hermitian(d: usize, rng: &mut ChaCha8Rng) -> DMatrix<C64> {
    let a = random_complex(d, rng);
    (&a + a.adjoint()) * C64::new(0.5, 0.0)
}

/// Haar-ish unitary from the QR factor of a Gaussian-like matrix.
pub fn random_unitary(d: usize, rng: &mut ChaCha8Rng) -> DMatrix<C64> {
    random_complex(d, rng).qr().q()
}

fn random_mat2(rng: &mut ChaCha8Rng) -> Mat2 {
    let axes = [Pauli::X, Pauli::Y, Pauli::Z];
    let mut m = Mat2::identity();
    for _ in 0..3 {
        let r = Mat2::rotation(axes[rng.gen_range(0..3)], rng.gen_range(0.0..6.3));
        m = r.mul(&m);
    }
    m
}

/// A random gate on `qubits`, which must hold at least two entries.
pub fn random_gate(qubits: &[usize], rng: &mut ChaCha8Rng) -> UnitaryGate {
    let pick = |rng: &mut ChaCha8Rng| qubits[rng.gen_range(0..qubits.len())];
    let target = pick(rng);
    let mut control = pick(rng);
    while control == target {
        control = pick(rng);
    }
    let c = if rng.gen_bool(0.5) {
        Control::on_one(control)
    } else {
        Control::on_zero(control)
    };
    let axis = [Pauli::X, Pauli::Y, Pauli::Z][rng.gen_range(0..3)];
    match rng.gen_range(0..3) {
        0 => UnitaryGate::single(target, random_mat2(rng)),
        1 => UnitaryGate::Controlled {
            controls: vec![c],
            target,
            matrix: random_mat2(rng),
        },
        _ => UnitaryGate::rotation(Rotation::conditional(vec![c], target, axis), rng.gen_range(0.0..6.3)),
    }
}

pub fn max_abs_diff(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

/// Design-averaged code-block output built from dense matrices only:
/// `U|0> (x) |0..0>` through encoder, noise, recovery and decoder, then `U^dag`
/// on the logical qubit.
pub fn reference_output(
    pipeline: &vqec::cost::Pipeline,
    alpha: &[f64],
    beta: &[f64],
) -> DMatrix<C64> {
    let layout = pipeline.layout();
    let n = layout.code_len();
    let r = layout.recovery_ancillas;
    let v = pipeline.encoder().instantiate(alpha).unwrap();
    let w = pipeline.recovery().instantiate(beta).unwrap();
    let id = |k: usize| DMatrix::<C64>::identity(1 << k, 1 << k);
    let v_dag = v.adjoint().kronecker(&id(r));
    let design = vqec::ansatz::two_design_states();
    let mut acc = DMatrix::<C64>::zeros(1 << n, 1 << n);
    for u in design.elements {
        let u2 = DMatrix::from_fn(2, 2, |i, j| u.0[i][j]);
        let mut psi = DMatrix::<C64>::zeros(1 << n, 1);
        psi[(0, 0)] = u2[(0, 0)];
        psi[(1 << (n - 1), 0)] = u2[(1, 0)];
        let encoded = &v * &psi;
        let rho = &encoded * encoded.adjoint();
        let noisy = pipeline
            .channel()
            .operators()
            .iter()
            .fold(DMatrix::<C64>::zeros(1 << n, 1 << n), |s, k| s + k * &rho * k.adjoint());
        let mut anc = DMatrix::<C64>::zeros(1 << r, 1 << r);
        anc[(0, 0)] = C64::new(1.0, 0.0);
        let big = noisy.kronecker(&anc);
        let out = &v_dag * &w * big * w.adjoint() * v_dag.adjoint();
        let reduced = DensityMatrix::new(out).unwrap().partial_trace(&(0..n).collect::<Vec<_>>()).unwrap();
        let undo = u2.adjoint().kronecker(&id(n - 1));
        acc += &undo * reduced.matrix() * undo.adjoint();
    }
    acc / C64::new(6.0, 0.0)
}
