//! Cost observables, the averaged error-correction pipeline, and the
//! no-correction baselines.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::ansatz::{build_ansatz, AnsatzStructure, two_design_states, ParametricCircuit, TwoDesign};
use crate::error::{Error, Result};
use crate::noise::{build_noise_channel, NoiseSpec};
use crate::qsim::{
    adjoint_sequence, compile, DensityMatrix, Kernel, KrausChannel, Mat2, QubitLayout, C64,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CostKind {
    Fid,
    Wass,
    Full,
}

impl CostKind {
    pub fn name(self) -> &'static str {
        match self {
            CostKind::Fid => "fid",
            CostKind::Wass => "wass",
            CostKind::Full => "full",
        }
    }
}

impl std::str::FromStr for CostKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fid" => Ok(CostKind::Fid),
            "wass" => Ok(CostKind::Wass),
            "full" => Ok(CostKind::Full),
            other => Err(Error::Config(format!("unknown cost kind `{other}`"))),
        }
    }
}

impl std::fmt::Display for CostKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Diagonal observable on the code block with `|0..0>` as unique zero-energy state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostHamiltonian {
    pub kind: CostKind,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
    pub diagonal: Vec<f64>,
}

impl CostHamiltonian {
    pub fn new(kind: CostKind, n: usize) -> Self {
        match kind {
            CostKind::Fid => Self::fid(n),
            CostKind::Wass => Self::wass(n),
            CostKind::Full => Self::full(n, None).expect("default weights are positive"),
        }
    }

    /// `I - |0..0><0..0|`
    pub fn fid(n: usize) -> Self {
        let diagonal = (0..1usize << n).map(|b| if b == 0 { 0.0 } else { 1.0 }).collect();
        CostHamiltonian {
            kind: CostKind::Fid,
            n,
            weights: None,
            diagonal,
        }
    }

    /// Number of ones in each basis string.
    pub fn wass(n: usize) -> Self {
        let diagonal = (0..1usize << n).map(|b| b.count_ones() as f64).collect();
        CostHamiltonian {
            kind: CostKind::Wass,
            n,
            weights: None,
            diagonal,
        }
    }

    /// Weighted count of ones; defaults to `w = 1 + l/n` for qubit `l - 1`.
    pub fn full(n: usize, weights: Option<Vec<f64>>) -> Result<Self> {
        let w = weights.unwrap_or_else(|| (1..=n).map(|l| 1.0 + l as f64 / n as f64).collect());
        if w.len() != n {
            return Err(Error::Dimension {
                expected: n,
                got: w.len(),
            });
        }
        if let Some(bad) = w.iter().find(|x| !x.is_finite() || **x <= 0.0) {
            return Err(Error::Config(format!("weight {bad} is not positive")));
        }
        let diagonal = (0..1usize << n)
            .map(|b| {
                (0..n)
                    .filter(|&q| b & (1 << (n - 1 - q)) != 0)
                    .fold(0.0, |acc, q| acc + w[q])
            })
            .collect();
        Ok(CostHamiltonian {
            kind: CostKind::Full,
            n,
            weights: Some(w),
            diagonal,
        })
    }

    pub fn matrix(&self) -> DMatrix<C64> {
        DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            self.diagonal.len(),
            self.diagonal.iter().map(|&d| C64::new(d, 0.0)),
        ))
    }

    pub fn expectation(&self, rho: &DensityMatrix) -> Result<f64> {
        rho.expectation_diagonal(&self.diagonal)
    }

    /// Distinct eigenvalues with multiplicities, ascending.
    pub fn spectrum(&self) -> Vec<(f64, usize)> {
        let mut vals = self.diagonal.clone();
        vals.sort_by(f64::total_cmp);
        let mut out: Vec<(f64, usize)> = Vec::new();
        for v in vals {
            match out.last_mut() {
                Some((last, count)) if (*last - v).abs() < 1e-12 => *count += 1,
                _ => out.push((v, 1)),
            }
        }
        out
    }
}

/// Cost and average fidelity from one pipeline evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub cost: f64,
    pub fidelity: f64,
}

/// Encode, corrupt, recover, decode, averaged over the six logical inputs.
#[derive(Debug, Clone)]
pub struct Pipeline {
    layout: QubitLayout,
    encoder: ParametricCircuit,
    recovery: ParametricCircuit,
    noise: NoiseSpec,
    channel: KrausChannel,
    design: TwoDesign,
}

impl Pipeline {
    pub fn new(
        layout: QubitLayout,
        encoder: ParametricCircuit,
        recovery: ParametricCircuit,
        noise: NoiseSpec,
    ) -> Result<Self> {
        if layout.logical != 1 {
            return Err(Error::UnsupportedLayout(
                "input averaging needs exactly one logical qubit".into(),
            ));
        }
        let n = layout.code_len();
        if encoder.num_qubits != n {
            return Err(Error::Dimension {
                expected: n,
                got: encoder.num_qubits,
            });
        }
        if recovery.num_qubits != layout.total() {
            return Err(Error::Dimension {
                expected: layout.total(),
                got: recovery.num_qubits,
            });
        }
        if noise.n != n {
            return Err(Error::Dimension {
                expected: n,
                got: noise.n,
            });
        }
        let channel = build_noise_channel(&noise)?;
        Ok(Pipeline {
            layout,
            encoder,
            recovery,
            noise,
            channel,
            design: two_design_states(),
        })
    }

    /// Pipeline over the default layered circuits.
    pub fn with_layers(layout: QubitLayout, layers: usize, noise: NoiseSpec) -> Result<Self> {
        Self::with_structure(layout, layers, AnsatzStructure::default(), noise)
    }

    pub fn with_structure(
        layout: QubitLayout,
        layers: usize,
        structure: AnsatzStructure,
        noise: NoiseSpec,
    ) -> Result<Self> {
        let (v, w) = build_ansatz(layout, layers, structure)?;
        Self::new(layout, v, w, noise)
    }

    pub fn layout(&self) -> QubitLayout {
        self.layout
    }

    pub fn encoder(&self) -> &ParametricCircuit {
        &self.encoder
    }

    pub fn recovery(&self) -> &ParametricCircuit {
        &self.recovery
    }

    pub fn noise(&self) -> &NoiseSpec {
        &self.noise
    }

    pub fn channel(&self) -> &KrausChannel {
        &self.channel
    }

    /// Averaged output state on the code block, by explicit density-matrix evolution.
    pub fn averaged_output_state(&self, alpha: &[f64], beta: &[f64]) -> Result<DensityMatrix> {
        let n = self.layout.code_len();
        let r = self.layout.recovery_ancillas;
        let v = self.encoder.instantiate(alpha)?;
        let w = self.recovery.instantiate(beta)?;
        let v_dag = v.adjoint();
        let keep: Vec<usize> = self.layout.code_qubits().collect();
        let dim = 1usize << n;
        let mut acc = DMatrix::<C64>::zeros(dim, dim);
        for u in &self.design.elements {
            let u_gate = crate::qsim::UnitaryGate::single(0, *u);
            let mut rho = DensityMatrix::basis(n, 0)?.apply_unitary(&u_gate)?;
            rho = rho.conjugate(&v)?.apply_channel(&self.channel)?;
            if r > 0 {
                rho = rho
                    .extend_with_ancilla(r)?
                    .conjugate(&w)?
                    .partial_trace(&keep)?;
            }
            rho = rho.conjugate(&v_dag)?.apply_unitary(&u_gate.adjoint())?;
            acc += rho.into_matrix();
        }
        acc /= C64::new(self.design.elements.len() as f64, 0.0);
        DensityMatrix::from_matrix_unchecked(acc)
    }

    pub fn cost_value(&self, alpha: &[f64], beta: &[f64], h: &CostHamiltonian) -> Result<f64> {
        Ok(self.evaluate(alpha, beta, h)?.cost)
    }

    pub fn average_fidelity(&self, alpha: &[f64], beta: &[f64]) -> Result<f64> {
        let h = CostHamiltonian::fid(self.layout.code_len());
        Ok(self.evaluate(alpha, beta, &h)?.fidelity)
    }

    pub fn evaluate(&self, alpha: &[f64], beta: &[f64], h: &CostHamiltonian) -> Result<Evaluation> {
        let a = self.encoder.gate_angles(alpha)?;
        let b = self.recovery.gate_angles(beta)?;
        self.evaluate_split(&a, &a, &b, h)
    }

    /// Evaluates with separate per-gate angles for the encoder, for the
    /// decoder (the encoder's adjoint) and for the recovery.
    pub fn evaluate_split(
        &self,
        enc_angles: &[f64],
        dec_angles: &[f64],
        rec_angles: &[f64],
        h: &CostHamiltonian,
    ) -> Result<Evaluation> {
        let n = self.layout.code_len();
        let r = self.layout.recovery_ancillas;
        let total = n + r;
        if h.diagonal.len() != 1 << n {
            return Err(Error::Dimension {
                expected: 1 << n,
                got: h.diagonal.len(),
            });
        }
        let enc = compile(&self.encoder.gates_with(enc_angles)?, n)?;
        let dec = adjoint_sequence(&compile(&self.encoder.gates_with(dec_angles)?, total)?);
        let rec = compile(&self.recovery.gates_with(rec_angles)?, total)?;

        let code_dim = 1usize << n;
        let full_dim = 1usize << total;
        let top = 1usize << (n - 1);
        let top_full = top << r;

        let mut encoded = [vec![C64::new(0.0, 0.0); code_dim], vec![C64::new(0.0, 0.0); code_dim]];
        for (a, psi) in encoded.iter_mut().enumerate() {
            psi[a * top] = C64::new(1.0, 0.0);
            run(&enc, psi);
        }

        let images = self.design.images_of_zero();
        let undo: Vec<Mat2> = self.design.elements.iter().map(Mat2::adjoint).collect();
        let mut cost = 0.0;
        let mut fidelity = 0.0;
        let mut branch = [vec![C64::new(0.0, 0.0); full_dim], vec![C64::new(0.0, 0.0); full_dim]];
        let mut mixed = vec![C64::new(0.0, 0.0); full_dim];
        for k in self.channel.operators() {
            for (a, out) in branch.iter_mut().enumerate() {
                let hit = k * nalgebra::DVector::from_column_slice(&encoded[a]);
                out.iter_mut().for_each(|z| *z = C64::new(0.0, 0.0));
                for (i, z) in hit.iter().enumerate() {
                    out[i << r] = *z;
                }
                run(&rec, out);
                run(&dec, out);
            }
            for (img, u) in images.iter().zip(&undo) {
                for i in 0..full_dim {
                    mixed[i] = img[0] * branch[0][i] + img[1] * branch[1][i];
                }
                for i in 0..full_dim {
                    if i & top_full == 0 {
                        let j = i | top_full;
                        let [x, y] = u.apply([mixed[i], mixed[j]]);
                        let (px, py) = (x.norm_sqr(), y.norm_sqr());
                        cost += px * h.diagonal[i >> r] + py * h.diagonal[j >> r];
                        if i >> r == 0 {
                            fidelity += px;
                        }
                    }
                }
            }
        }
        let m = images.len() as f64;
        Ok(Evaluation {
            cost: cost / m,
            fidelity: fidelity / m,
        })
    }
}

fn run(kernels: &[Kernel], psi: &mut [C64]) {
    for k in kernels {
        k.apply(psi);
    }
}

fn identity_pipeline(noise: &NoiseSpec) -> Result<(Pipeline, usize, usize)> {
    if noise.n == 0 {
        return Err(Error::UnsupportedLayout("empty code block".into()));
    }
    let layout = QubitLayout::new(1, noise.n - 1, 0)?;
    let p = Pipeline::with_layers(layout, 1, *noise)?;
    let a = p.encoder.param_count;
    let b = p.recovery.param_count;
    Ok((p, a, b))
}

/// Fidelity on the whole code block with no encoding and no recovery.
pub fn baseline_f0(noise: &NoiseSpec) -> Result<f64> {
    let (p, a, b) = identity_pipeline(noise)?;
    let rho = p.averaged_output_state(&vec![0.0; a], &vec![0.0; b])?;
    Ok(rho.population(0))
}

/// Fidelity of the logical qubit alone with no encoding and no recovery.
pub fn baseline_f0_strong(noise: &NoiseSpec) -> Result<f64> {
    let (p, a, b) = identity_pipeline(noise)?;
    let rho = p.averaged_output_state(&vec![0.0; a], &vec![0.0; b])?;
    Ok(rho.partial_trace(&[0])?.population(0))
}

/// `(1 - p) + (p/n) (1/3 + (n - 1) |<0|sigma|0>|^2)`
pub fn baseline_f0_closed(noise: &NoiseSpec) -> f64 {
    let n = noise.n as f64;
    (1.0 - noise.p) + noise.p / n * (1.0 / 3.0 + (n - 1.0) * noise.kind.zero_overlap())
}

/// `F0 + ((n - 1)/n) p (1 - |<0|sigma|0>|^2)`
pub fn baseline_f0_strong_closed(noise: &NoiseSpec) -> f64 {
    let n = noise.n as f64;
    baseline_f0_closed(noise) + (n - 1.0) / n * noise.p * (1.0 - noise.kind.zero_overlap())
}
