//! Layered encoder and recovery circuits, the six-element input set, and
//! the repetition-code reference angles.

use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::noise::NoiseKind;
use crate::qsim::{sequence_matrix, Control, Mat2, Pauli, Polarity, QubitLayout, Rotation, UnitaryGate, C64};

/// A rotation whose angle is read from parameter `slot`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundGate {
    pub layer: usize,
    pub slot: usize,
    #[serde(flatten)]
    pub rotation: Rotation,
}

/// Ordered list of parameterized Pauli rotations on a register.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParametricCircuit {
    pub layout: QubitLayout,
    pub num_qubits: usize,
    pub param_count: usize,
    pub gates: Vec<BoundGate>,
}

impl ParametricCircuit {
    fn new(layout: QubitLayout, num_qubits: usize) -> Self {
        ParametricCircuit {
            layout,
            num_qubits,
            param_count: 0,
            gates: Vec::new(),
        }
    }

    fn push(&mut self, layer: usize, rotation: Rotation) {
        self.gates.push(BoundGate {
            layer,
            slot: self.param_count,
            rotation,
        });
        self.param_count += 1;
    }

    fn push_triple(&mut self, layer: usize, qubit: usize) {
        for axis in [Pauli::Z, Pauli::Y, Pauli::Z] {
            self.push(layer, Rotation::single(qubit, axis));
        }
    }

    /// Checks qubit ranges and that every slot is bound at least once.
    pub fn validate(&self) -> Result<()> {
        let mut used = vec![false; self.param_count];
        for g in &self.gates {
            if g.slot >= self.param_count {
                return Err(Error::SlotOutOfRange {
                    slot: g.slot,
                    count: self.param_count,
                });
            }
            used[g.slot] = true;
            UnitaryGate::rotation(g.rotation.clone(), 0.0).matrix(self.num_qubits)?;
        }
        if let Some(slot) = used.iter().position(|u| !u) {
            return Err(Error::InvalidGate(format!("slot {slot} is not bound to any gate")));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let c: ParametricCircuit = serde_json::from_str(s)?;
        c.validate()?;
        Ok(c)
    }

    fn check_len(&self, angles: &[f64]) -> Result<()> {
        if angles.len() != self.param_count {
            return Err(Error::ParamCount {
                expected: self.param_count,
                got: angles.len(),
            });
        }
        Ok(())
    }

    /// Angle of each gate occurrence, in gate order.
    pub fn gate_angles(&self, angles: &[f64]) -> Result<Vec<f64>> {
        self.check_len(angles)?;
        Ok(self.gates.iter().map(|g| angles[g.slot]).collect())
    }

    /// Indices of the gates bound to `slot`.
    pub fn occurrences(&self, slot: usize) -> Result<Vec<usize>> {
        if slot >= self.param_count {
            return Err(Error::SlotOutOfRange {
                slot,
                count: self.param_count,
            });
        }
        Ok(self
            .gates
            .iter()
            .enumerate()
            .filter(|(_, g)| g.slot == slot)
            .map(|(i, _)| i)
            .collect())
    }

    /// Concrete gates for one angle per gate occurrence.
    pub fn gates_with(&self, gate_angles: &[f64]) -> Result<Vec<UnitaryGate>> {
        if gate_angles.len() != self.gates.len() {
            return Err(Error::ParamCount {
                expected: self.gates.len(),
                got: gate_angles.len(),
            });
        }
        Ok(self
            .gates
            .iter()
            .zip(gate_angles)
            .map(|(g, &a)| UnitaryGate::rotation(g.rotation.clone(), a))
            .collect())
    }

    pub fn gates_at(&self, angles: &[f64]) -> Result<Vec<UnitaryGate>> {
        self.gates_with(&self.gate_angles(angles)?)
    }

    /// Full-register unitary at the given slot angles.
    pub fn instantiate(&self, angles: &[f64]) -> Result<DMatrix<C64>> {
        sequence_matrix(&self.gates_at(angles)?, self.num_qubits)
    }
}

fn polarity(layer: usize) -> Polarity {
    if layer.is_multiple_of(2) {
        Polarity::One
    } else {
        Polarity::Zero
    }
}

/// Entangler layout of the recovery layers.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnsatzStructure {
    /// Nearest-neighbour ring over all qubits, like the encoder.
    Ring,
    /// Code-to-ancilla and ancilla-to-code couplers plus rotations conditioned
    /// on all ancillas; contains the repetition-code recovery.
    #[default]
    Syndrome,
}

impl std::str::FromStr for AnsatzStructure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ring" => Ok(AnsatzStructure::Ring),
            "syndrome" => Ok(AnsatzStructure::Syndrome),
            other => Err(Error::Config(format!("unknown ansatz structure `{other}`"))),
        }
    }
}

fn push_ring(circ: &mut ParametricCircuit, layer: usize, qubits: usize) {
    if qubits < 2 {
        return;
    }
    let pol = polarity(layer);
    for q in 0..qubits {
        let c = Control { qubit: q, active: pol };
        circ.push(layer, Rotation::conditional(vec![c], (q + 1) % qubits, Pauli::X));
    }
}

/// Builds the encoder on `QA` and the recovery on `QAB`.
///
/// Each layer starts with a Z-Y-Z triple on every qubit. Encoder layers end
/// with a ring of X-axis conditional rotations `i -> i+1 (mod n)`. Recovery
/// layers end either with the same ring over all qubits, or with
/// code-to-ancilla couplers, ancilla-to-code couplers and, with two or more
/// ancillas, one rotation per code qubit conditioned on all ancillas.
/// Control polarity alternates with the layer.
pub fn build_ansatz(
    layout: QubitLayout,
    layers: usize,
    structure: AnsatzStructure,
) -> Result<(ParametricCircuit, ParametricCircuit)> {
    if layers == 0 {
        return Err(Error::ZeroLayers);
    }
    let n = layout.code_len();
    let mut enc = ParametricCircuit::new(layout, n);
    for layer in 0..layers {
        for q in 0..n {
            enc.push_triple(layer, q);
        }
        push_ring(&mut enc, layer, n);
    }

    let total = layout.total();
    let mut rec = ParametricCircuit::new(layout, total);
    for layer in 0..layers {
        let pol = polarity(layer);
        for q in 0..total {
            rec.push_triple(layer, q);
        }
        if structure == AnsatzStructure::Ring {
            push_ring(&mut rec, layer, total);
            continue;
        }
        for q in layout.code_qubits() {
            for b in layout.recovery_qubits() {
                let c = Control { qubit: q, active: pol };
                rec.push(layer, Rotation::conditional(vec![c], b, Pauli::X));
            }
        }
        for b in layout.recovery_qubits() {
            for q in layout.code_qubits() {
                let c = Control { qubit: b, active: pol };
                rec.push(layer, Rotation::conditional(vec![c], q, Pauli::X));
            }
        }
        if layout.recovery_ancillas >= 2 {
            for q in layout.code_qubits() {
                let cs = layout
                    .recovery_qubits()
                    .map(|b| Control { qubit: b, active: pol })
                    .collect();
                rec.push(layer, Rotation::conditional(cs, q, Pauli::X));
            }
        }
    }
    Ok((enc, rec))
}

/// Angles `(a, b, c)` with `M = Rz(c) Ry(b) Rz(a)` up to global phase.
pub fn zyz_angles(m: &Mat2) -> (f64, f64, f64) {
    let det = m.det();
    let norm = det.sqrt();
    let u = m.0;
    let alpha = u[0][0] / norm;
    let beta = u[1][0] / norm;
    let b = beta.norm().atan2(alpha.norm());
    let arg = |z: C64| if z.norm() < 1e-12 { 0.0 } else { z.arg() };
    let (aa, ab) = (arg(alpha), arg(beta));
    ((-aa - ab) / 2.0, b, (ab - aa) / 2.0)
}

/// `Rz(c) Ry(b) Rz(a)`
pub fn zyz_matrix(a: f64, b: f64, c: f64) -> Mat2 {
    Mat2::rotation(Pauli::Z, c)
        .mul(&Mat2::rotation(Pauli::Y, b))
        .mul(&Mat2::rotation(Pauli::Z, a))
}

/// The six single-qubit inputs used to average over states.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoDesign {
    pub elements: [Mat2; 6],
}

impl TwoDesign {
    /// `|0>` mapped through each element.
    pub fn images_of_zero(&self) -> [[C64; 2]; 6] {
        self.elements
            .map(|m| m.apply([C64::new(1.0, 0.0), C64::new(0.0, 0.0)]))
    }
}

/// `I, X, e^{+i pi/4 X}, e^{-i pi/4 X}, e^{+i pi/4 Y}, e^{-i pi/4 Y}` in that order.
pub fn two_design_states() -> TwoDesign {
    TwoDesign {
        elements: [
            Mat2::identity(),
            Pauli::X.matrix(),
            Mat2::rotation(Pauli::X, -FRAC_PI_4),
            Mat2::rotation(Pauli::X, FRAC_PI_4),
            Mat2::rotation(Pauli::Y, -FRAC_PI_4),
            Mat2::rotation(Pauli::Y, FRAC_PI_4),
        ],
    }
}

/// Local unitary and coupler angles for one layer of the reference circuits.
struct LayerTarget {
    locals: Vec<Mat2>,
    /// `(controls, target) -> angle`; absent couplers stay at zero.
    couplers: HashMap<(Vec<usize>, usize), f64>,
}

impl LayerTarget {
    fn identity(num_qubits: usize) -> Self {
        LayerTarget {
            locals: vec![Mat2::identity(); num_qubits],
            couplers: HashMap::new(),
        }
    }
}

fn fill(circ: &ParametricCircuit, layers: &[LayerTarget]) -> Vec<f64> {
    let mut angles = vec![0.0; circ.param_count];
    let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
    for g in &circ.gates {
        let Some(target) = layers.get(g.layer) else {
            continue;
        };
        let r = &g.rotation;
        if r.controls.is_empty() {
            let pos = seen.entry((g.layer, r.target)).or_insert(0);
            let (a, b, c) = zyz_angles(&target.locals[r.target]);
            angles[g.slot] = [a, b, c][*pos];
            *pos += 1;
        } else {
            let key = (r.controls.iter().map(|c| c.qubit).collect(), r.target);
            angles[g.slot] = target.couplers.get(&key).copied().unwrap_or(0.0);
        }
    }
    angles
}

/// Encoder and recovery angles realizing the three-qubit repetition code and
/// its ancilla-assisted correction, for the layout returned by
/// [`QubitLayout::three_qubit_code`] and at least two layers.
///
/// A CNOT is realized as a quarter-turn conditional rotation together with an
/// `S` on the control and `Rx(pi/4)` on the target. In the recovery, ancilla
/// `3` collects `x0 ^ x1` and ancilla `4` collects `x1 ^ x2`; each code qubit is
/// then flipped by a syndrome indicator expanded into one-body, two-body and
/// three-body rotations of angle `pi/8`.
pub fn exact_code_params(
    kind: NoiseKind,
    layout: QubitLayout,
    layers: usize,
) -> Result<(Vec<f64>, Vec<f64>)> {
    if layout != QubitLayout::three_qubit_code() {
        return Err(Error::UnsupportedLayout(format!(
            "reference circuits need (1, 2, 2), got ({}, {}, {})",
            layout.logical, layout.code_ancillas, layout.recovery_ancillas
        )));
    }
    if layers < 2 {
        return Err(Error::UnsupportedLayout(
            "reference circuits need at least two layers".into(),
        ));
    }
    if kind == NoiseKind::YFlip {
        return Err(Error::UnsupportedLayout(
            "reference circuits exist for bit and phase flips only".into(),
        ));
    }
    let (enc, rec) = build_ansatz(layout, layers, AnsatzStructure::Syndrome)?;
    let h = Mat2::hadamard();
    let s = Mat2::phase(FRAC_PI_2);
    let z = Pauli::Z.matrix();
    let id = Mat2::identity();
    let rx = |t: f64| Mat2::rotation(Pauli::X, t);
    let q = FRAC_PI_4;

    // Encoder: even layers use active-on-one controls, so +pi/4 gives
    // exp(i pi/4 Z X); odd layers flip the sign.
    let mut e0 = LayerTarget::identity(3);
    let mut e1 = LayerTarget::identity(3);
    match kind {
        NoiseKind::BitFlip => {
            // CX01 . (H0 H2 . CX20 . H0 H2)
            e0.locals = vec![rx(q).mul(&h), id, s.mul(&h)];
            e0.couplers.insert((vec![2], 0), q);
            e1.locals = vec![s.mul(&h), rx(q), h];
            e1.couplers.insert((vec![0], 1), -q);
        }
        _ => {
            // CX20 . H0 H1 . CX01 . H2
            e0.locals = vec![s, rx(q), h];
            e0.couplers.insert((vec![0], 1), q);
            e1.locals = vec![rx(q).mul(&h), h, s];
            e1.couplers.insert((vec![2], 0), -q);
        }
    }

    let mut r0 = LayerTarget::identity(5);
    let mut r1 = LayerTarget::identity(5);
    r0.locals = vec![s, z, s, rx(FRAC_PI_2), rx(FRAC_PI_2)];
    for (c, t) in [(0, 3), (1, 3), (1, 4), (2, 4)] {
        r0.couplers.insert((vec![c], t), q);
    }
    // Flip indicator of each code qubit as (1 + c0 z3 + c1 z4 + c01 z3 z4) / 4.
    let indicator = [(-1.0, 1.0, -1.0), (-1.0, -1.0, 1.0), (1.0, -1.0, -1.0)];
    for (target, (c0, c1, c01)) in indicator.into_iter().enumerate() {
        r0.couplers.insert((vec![3], target), -FRAC_PI_8 * c0);
        r0.couplers.insert((vec![4], target), -FRAC_PI_8 * c1);
        r0.couplers.insert((vec![3, 4], target), FRAC_PI_8 * c01);
        r1.locals[target] = rx(FRAC_PI_8);
    }
    if kind == NoiseKind::PhaseFlip {
        for t in 0..3 {
            r0.locals[t] = r0.locals[t].mul(&h);
            r1.locals[t] = h.mul(&r1.locals[t]);
        }
    }

    Ok((fill(&enc, &[e0, e1]), fill(&rec, &[r0, r1])))
}
