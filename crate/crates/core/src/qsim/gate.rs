//! Gates on a qubit register and the kernels that apply them in place.
//!
//! Qubit 0 is the most significant bit of a computational-basis index.

use nalgebra::{Complex, DMatrix};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

/// Single-qubit Pauli axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn matrix(self) -> Mat2 {
        match self {
            Pauli::X => Mat2([[ZERO, ONE], [ONE, ZERO]]),
            Pauli::Y => Mat2([[ZERO, -I], [I, ZERO]]),
            Pauli::Z => Mat2([[ONE, ZERO], [ZERO, -ONE]]),
        }
    }
}

/// Row-major 2x2 complex matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[C64; 2]; 2]);

impl Mat2 {
    pub fn identity() -> Self {
        Mat2([[ONE, ZERO], [ZERO, ONE]])
    }

    pub fn hadamard() -> Self {
        let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Mat2([[h, h], [h, -h]])
    }

    /// `diag(1, e^{i phi})`
    pub fn phase(phi: f64) -> Self {
        Mat2([[ONE, ZERO], [ZERO, C64::from_polar(1.0, phi)]])
    }

    /// `exp(-i theta sigma)`
    pub fn rotation(axis: Pauli, theta: f64) -> Self {
        Self::signed_rotation(axis, theta, 1.0)
    }

    /// `cos(theta) I - i sign sin(theta) sigma`
    fn signed_rotation(axis: Pauli, theta: f64, sign: f64) -> Self {
        let c = C64::new(theta.cos(), 0.0);
        let s = C64::new(0.0, -sign * theta.sin());
        let p = axis.matrix().0;
        Mat2([
            [c + s * p[0][0], s * p[0][1]],
            [s * p[1][0], c + s * p[1][1]],
        ])
    }

    pub fn mul(&self, rhs: &Mat2) -> Mat2 {
        let a = &self.0;
        let b = &rhs.0;
        Mat2([
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ])
    }

    pub fn adjoint(&self) -> Mat2 {
        let a = &self.0;
        Mat2([
            [a[0][0].conj(), a[1][0].conj()],
            [a[0][1].conj(), a[1][1].conj()],
        ])
    }

    pub fn det(&self) -> C64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn apply(&self, v: [C64; 2]) -> [C64; 2] {
        [
            self.0[0][0] * v[0] + self.0[0][1] * v[1],
            self.0[1][0] * v[0] + self.0[1][1] * v[1],
        ]
    }

    /// Max-abs deviation of `M M^dagger` from the identity.
    pub fn unitarity_error(&self) -> f64 {
        let p = self.mul(&self.adjoint()).0;
        let id = Mat2::identity().0;
        let mut err = 0.0f64;
        for r in 0..2 {
            for c in 0..2 {
                err = err.max((p[r][c] - id[r][c]).norm());
            }
        }
        err
    }

    /// Distance to `other` after removing the best global phase.
    pub fn phase_distance(&self, other: &Mat2) -> f64 {
        let mut overlap = ZERO;
        for r in 0..2 {
            for c in 0..2 {
                overlap += other.0[r][c].conj() * self.0[r][c];
            }
        }
        let phase = if overlap.norm() > 0.0 {
            overlap / overlap.norm()
        } else {
            ONE
        };
        let mut err = 0.0f64;
        for r in 0..2 {
            for c in 0..2 {
                err = err.max((self.0[r][c] - phase * other.0[r][c]).norm());
            }
        }
        err
    }
}

/// Which computational state of a control qubit activates the gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Polarity {
    /// Full circle: active on `|1>`.
    One,
    /// Empty circle: active on `|0>`.
    Zero,
}

impl Polarity {
    pub fn flipped(self) -> Self {
        match self {
            Polarity::One => Polarity::Zero,
            Polarity::Zero => Polarity::One,
        }
    }

    fn active_bit(self) -> bool {
        matches!(self, Polarity::One)
    }

    /// Eigenvalue of `P_active - P_inactive` expressed as a multiple of `Z`.
    fn z_sign(self) -> f64 {
        match self {
            Polarity::One => -1.0,
            Polarity::Zero => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Control {
    pub qubit: usize,
    pub active: Polarity,
}

impl Control {
    pub fn on_one(qubit: usize) -> Self {
        Control {
            qubit,
            active: Polarity::One,
        }
    }

    pub fn on_zero(qubit: usize) -> Self {
        Control {
            qubit,
            active: Polarity::Zero,
        }
    }
}

/// A Pauli rotation `exp(-i theta G)` whose generator squares to the identity.
///
/// Without controls `G = sigma` on the target. With controls
/// `G = prod_c (P_active(c) - P_inactive(c)) (x) sigma`: the target turns by
/// `exp(-i theta sigma)` when an even number of controls sit in their inactive
/// state and by `exp(+i theta sigma)` otherwise. With one control this is a
/// ZX-type interaction; combined with a target rotation of the same angle it
/// reproduces the plain controlled rotation `C-exp(-i 2 theta sigma)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rotation {
    pub target: usize,
    pub axis: Pauli,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub controls: Vec<Control>,
}

impl Rotation {
    pub fn single(target: usize, axis: Pauli) -> Self {
        Rotation {
            target,
            axis,
            controls: Vec::new(),
        }
    }

    pub fn conditional(controls: Vec<Control>, target: usize, axis: Pauli) -> Self {
        Rotation {
            target,
            axis,
            controls,
        }
    }

    pub fn qubits(&self) -> impl Iterator<Item = usize> + '_ {
        std::iter::once(self.target).chain(self.controls.iter().map(|c| c.qubit))
    }
}

/// A unitary acting on a few qubits of a register.
#[derive(Debug, Clone, PartialEq)]
pub enum UnitaryGate {
    /// Fixed single-qubit unitary.
    Single { target: usize, matrix: Mat2 },
    /// Fixed unitary applied to `target` only when every control is active.
    Controlled {
        controls: Vec<Control>,
        target: usize,
        matrix: Mat2,
    },
    /// `exp(-i angle G)` for a Pauli-string generator, see [`Rotation`].
    Rotation { rotation: Rotation, angle: f64 },
}

impl UnitaryGate {
    pub fn single(target: usize, matrix: Mat2) -> Self {
        UnitaryGate::Single { target, matrix }
    }

    pub fn rotation(rotation: Rotation, angle: f64) -> Self {
        UnitaryGate::Rotation { rotation, angle }
    }

    /// Controlled bit flip.
    pub fn cnot(control: Control, target: usize) -> Self {
        UnitaryGate::Controlled {
            controls: vec![control],
            target,
            matrix: Pauli::X.matrix(),
        }
    }

    pub fn target(&self) -> usize {
        match self {
            UnitaryGate::Single { target, .. } | UnitaryGate::Controlled { target, .. } => *target,
            UnitaryGate::Rotation { rotation, .. } => rotation.target,
        }
    }

    fn controls(&self) -> &[Control] {
        match self {
            UnitaryGate::Single { .. } => &[],
            UnitaryGate::Controlled { controls, .. } => controls,
            UnitaryGate::Rotation { rotation, .. } => &rotation.controls,
        }
    }

    pub fn adjoint(&self) -> UnitaryGate {
        match self {
            UnitaryGate::Single { target, matrix } => UnitaryGate::Single {
                target: *target,
                matrix: matrix.adjoint(),
            },
            UnitaryGate::Controlled {
                controls,
                target,
                matrix,
            } => UnitaryGate::Controlled {
                controls: controls.clone(),
                target: *target,
                matrix: matrix.adjoint(),
            },
            UnitaryGate::Rotation { rotation, angle } => UnitaryGate::Rotation {
                rotation: rotation.clone(),
                angle: -angle,
            },
        }
    }

    /// Compiles the gate for an `num_qubits` register, checking qubit indices.
    pub(crate) fn kernel(&self, num_qubits: usize) -> Result<Kernel> {
        let target = self.target();
        let controls = self.controls();
        for q in std::iter::once(target).chain(controls.iter().map(|c| c.qubit)) {
            if q >= num_qubits {
                return Err(Error::QubitOutOfRange {
                    qubit: q,
                    size: num_qubits,
                });
            }
        }
        if controls.iter().any(|c| c.qubit == target) {
            return Err(Error::InvalidGate(format!(
                "qubit {target} is both control and target"
            )));
        }
        let bit = bit_of(target, num_qubits);
        Ok(match self {
            UnitaryGate::Single { matrix, .. } => Kernel::Local { bit, m: *matrix },
            UnitaryGate::Controlled { matrix, .. } => {
                let mut mask = 0usize;
                let mut value = 0usize;
                for c in controls {
                    let b = bit_of(c.qubit, num_qubits);
                    mask |= b;
                    if c.active.active_bit() {
                        value |= b;
                    }
                }
                Kernel::Controlled {
                    bit,
                    mask,
                    value,
                    m: *matrix,
                }
            }
            UnitaryGate::Rotation { rotation, angle } => {
                if rotation.controls.is_empty() {
                    Kernel::Local {
                        bit,
                        m: Mat2::rotation(rotation.axis, *angle),
                    }
                } else {
                    let mut zmask = 0usize;
                    let mut sign = 1.0;
                    for c in &rotation.controls {
                        zmask |= bit_of(c.qubit, num_qubits);
                        sign *= c.active.z_sign();
                    }
                    Kernel::Parity {
                        bit,
                        zmask,
                        even: Mat2::signed_rotation(rotation.axis, *angle, sign),
                        odd: Mat2::signed_rotation(rotation.axis, *angle, -sign),
                    }
                }
            }
        })
    }

    /// Full `2^n x 2^n` matrix of the gate on an `num_qubits` register.
    pub fn matrix(&self, num_qubits: usize) -> Result<DMatrix<C64>> {
        let kernel = self.kernel(num_qubits)?;
        let mut u = DMatrix::<C64>::identity(1 << num_qubits, 1 << num_qubits);
        kernel.apply_columns(&mut u);
        Ok(u)
    }
}

#[inline]
pub(crate) fn bit_of(qubit: usize, num_qubits: usize) -> usize {
    1 << (num_qubits - 1 - qubit)
}

/// A gate compiled against a fixed register size.
#[derive(Debug, Clone, Copy)]
pub(crate) enum Kernel {
    Local {
        bit: usize,
        m: Mat2,
    },
    Controlled {
        bit: usize,
        mask: usize,
        value: usize,
        m: Mat2,
    },
    /// Uses `even` where the Z-parity over `zmask` is even, `odd` otherwise.
    Parity {
        bit: usize,
        zmask: usize,
        even: Mat2,
        odd: Mat2,
    },
}

impl Kernel {
    pub(crate) fn apply(&self, psi: &mut [C64]) {
        let dim = psi.len();
        match *self {
            Kernel::Local { bit, m } => {
                for i in 0..dim {
                    if i & bit == 0 {
                        let j = i | bit;
                        let [a, b] = m.apply([psi[i], psi[j]]);
                        psi[i] = a;
                        psi[j] = b;
                    }
                }
            }
            Kernel::Controlled {
                bit,
                mask,
                value,
                m,
            } => {
                for i in 0..dim {
                    if i & bit == 0 && i & mask == value {
                        let j = i | bit;
                        let [a, b] = m.apply([psi[i], psi[j]]);
                        psi[i] = a;
                        psi[j] = b;
                    }
                }
            }
            Kernel::Parity {
                bit,
                zmask,
                even,
                odd,
            } => {
                for i in 0..dim {
                    if i & bit == 0 {
                        let j = i | bit;
                        let m = if (i & zmask).count_ones() % 2 == 0 {
                            &even
                        } else {
                            &odd
                        };
                        let [a, b] = m.apply([psi[i], psi[j]]);
                        psi[i] = a;
                        psi[j] = b;
                    }
                }
            }
        }
    }

    /// Applies the kernel to every column of `m` (left multiplication).
    pub(crate) fn apply_columns(&self, m: &mut DMatrix<C64>) {
        let rows = m.nrows();
        for col in m.as_mut_slice().chunks_mut(rows) {
            self.apply(col);
        }
    }

    pub(crate) fn adjoint(&self) -> Kernel {
        match *self {
            Kernel::Local { bit, m } => Kernel::Local {
                bit,
                m: m.adjoint(),
            },
            Kernel::Controlled {
                bit,
                mask,
                value,
                m,
            } => Kernel::Controlled {
                bit,
                mask,
                value,
                m: m.adjoint(),
            },
            Kernel::Parity {
                bit,
                zmask,
                even,
                odd,
            } => Kernel::Parity {
                bit,
                zmask,
                even: even.adjoint(),
                odd: odd.adjoint(),
            },
        }
    }

    /// Merges `next` (applied after `self`) into one kernel when both are local on the same qubit.
    pub(crate) fn fuse(&self, next: &Kernel) -> Option<Kernel> {
        match (self, next) {
            (Kernel::Local { bit: a, m: first }, Kernel::Local { bit: b, m: second }) if a == b => {
                Some(Kernel::Local {
                    bit: *a,
                    m: second.mul(first),
                })
            }
            _ => None,
        }
    }
}

/// Compiles a gate sequence, fusing runs of single-qubit gates on the same qubit.
pub(crate) fn compile(gates: &[UnitaryGate], num_qubits: usize) -> Result<Vec<Kernel>> {
    let mut out: Vec<Kernel> = Vec::with_capacity(gates.len());
    for g in gates {
        let k = g.kernel(num_qubits)?;
        if let Some(last) = out.last_mut() {
            if let Some(f) = last.fuse(&k) {
                *last = f;
                continue;
            }
        }
        out.push(k);
    }
    Ok(out)
}

/// Adjoint of a compiled sequence: reversed order, each kernel inverted.
pub(crate) fn adjoint_sequence(kernels: &[Kernel]) -> Vec<Kernel> {
    kernels.iter().rev().map(Kernel::adjoint).collect()
}

/// Dense matrix of a gate sequence applied left to right in time.
pub fn sequence_matrix(gates: &[UnitaryGate], num_qubits: usize) -> Result<DMatrix<C64>> {
    let kernels = compile(gates, num_qubits)?;
    let dim = 1 << num_qubits;
    let mut u = DMatrix::<C64>::identity(dim, dim);
    for k in &kernels {
        k.apply_columns(&mut u);
    }
    Ok(u)
}

/// Max-abs deviation of `U U^dagger` from the identity.
pub fn unitarity_error(u: &DMatrix<C64>) -> f64 {
    let p = u * u.adjoint();
    let id = DMatrix::<C64>::identity(u.nrows(), u.ncols());
    (p - id).iter().fold(0.0f64, |acc, z| acc.max(z.norm()))
}

/// Max-abs distance between `a` and `b` after removing the best global phase.
pub fn phase_distance(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    let overlap: C64 = b.iter().zip(a.iter()).map(|(x, y)| x.conj() * y).sum();
    let phase = if overlap.norm() > 0.0 {
        overlap / overlap.norm()
    } else {
        ONE
    };
    a.iter()
        .zip(b.iter())
        .fold(0.0f64, |acc, (x, y)| acc.max((x - phase * y).norm()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    #[test]
    fn rotation_matrices_are_unitary() {
        for axis in [Pauli::X, Pauli::Y, Pauli::Z] {
            for k in 0..16 {
                let m = Mat2::rotation(axis, 0.37 * k as f64);
                assert!(m.unitarity_error() < 1e-14);
            }
        }
    }

    #[test]
    fn half_pi_x_rotation_is_a_bit_flip() {
        let m = Mat2::rotation(Pauli::X, FRAC_PI_2);
        assert!(m.phase_distance(&Pauli::X.matrix()) < 1e-15);
    }

    #[test]
    fn single_control_rotation_plus_target_turn_is_controlled_rotation() {
        // exp(-i t X_1) exp(-i t (P1-P0)_0 X_1) == |0><0| I + |1><1| exp(-i 2t X)
        let t = 0.731;
        let gates = [
            UnitaryGate::rotation(Rotation::single(1, Pauli::X), t),
            UnitaryGate::rotation(
                Rotation::conditional(vec![Control::on_one(0)], 1, Pauli::X),
                t,
            ),
        ];
        let u = sequence_matrix(&gates, 2).unwrap();
        let reference = UnitaryGate::Controlled {
            controls: vec![Control::on_one(0)],
            target: 1,
            matrix: Mat2::rotation(Pauli::X, 2.0 * t),
        }
        .matrix(2)
        .unwrap();
        assert!(phase_distance(&u, &reference) < 1e-14);
    }

    #[test]
    fn conditional_rotation_at_quarter_pi_is_cnot_up_to_locals() {
        // CX = exp(i pi/4 Z_c X_t) S_c Rx_t(pi/4)
        let gates = [
            UnitaryGate::single(0, Mat2::phase(FRAC_PI_2)),
            UnitaryGate::rotation(Rotation::single(1, Pauli::X), FRAC_PI_4),
            UnitaryGate::rotation(
                Rotation::conditional(vec![Control::on_one(0)], 1, Pauli::X),
                FRAC_PI_4,
            ),
        ];
        let u = sequence_matrix(&gates, 2).unwrap();
        let cx = UnitaryGate::cnot(Control::on_one(0), 1).matrix(2).unwrap();
        assert!(phase_distance(&u, &cx) < 1e-14);
    }

    #[test]
    fn negative_polarity_flips_the_generator_sign() {
        let t = 0.42;
        let a = UnitaryGate::rotation(
            Rotation::conditional(vec![Control::on_zero(0)], 1, Pauli::Y),
            t,
        )
        .matrix(2)
        .unwrap();
        let b = UnitaryGate::rotation(
            Rotation::conditional(vec![Control::on_one(0)], 1, Pauli::Y),
            -t,
        )
        .matrix(2)
        .unwrap();
        assert!(phase_distance(&a, &b) < 1e-15);
    }

    #[test]
    fn fused_sequence_matches_gate_by_gate() {
        let gates: Vec<UnitaryGate> = (0..3)
            .flat_map(|q| {
                [Pauli::Z, Pauli::Y, Pauli::Z]
                    .into_iter()
                    .enumerate()
                    .map(move |(i, a)| {
                        UnitaryGate::rotation(Rotation::single(q, a), 0.3 * (q + i) as f64 + 0.1)
                    })
            })
            .chain([UnitaryGate::rotation(
                Rotation::conditional(vec![Control::on_one(2)], 0, Pauli::X),
                PI / 7.0,
            )])
            .collect();
        let fused = sequence_matrix(&gates, 3).unwrap();
        let mut unfused = DMatrix::<C64>::identity(8, 8);
        for g in &gates {
            unfused = g.matrix(3).unwrap() * unfused;
        }
        assert!((fused - unfused).iter().all(|z| z.norm() < 1e-14));
    }

    #[test]
    fn out_of_range_qubit_is_rejected() {
        let g = UnitaryGate::single(3, Mat2::hadamard());
        assert!(matches!(
            g.matrix(3),
            Err(Error::QubitOutOfRange { qubit: 3, size: 3 })
        ));
    }
}
