//! Single-qubit Pauli noise on the code block.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qsim::{KrausChannel, Pauli, UnitaryGate, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseKind {
    BitFlip,
    PhaseFlip,
    YFlip,
}

impl NoiseKind {
    pub fn pauli(self) -> Pauli {
        match self {
            NoiseKind::BitFlip => Pauli::X,
            NoiseKind::PhaseFlip => Pauli::Z,
            NoiseKind::YFlip => Pauli::Y,
        }
    }

    /// `|<0|sigma|0>|^2`
    pub fn zero_overlap(self) -> f64 {
        match self {
            NoiseKind::PhaseFlip => 1.0,
            NoiseKind::BitFlip | NoiseKind::YFlip => 0.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            NoiseKind::BitFlip => "bit_flip",
            NoiseKind::PhaseFlip => "phase_flip",
            NoiseKind::YFlip => "y_flip",
        }
    }
}

impl std::str::FromStr for NoiseKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bit_flip" => Ok(NoiseKind::BitFlip),
            "phase_flip" => Ok(NoiseKind::PhaseFlip),
            "y_flip" => Ok(NoiseKind::YFlip),
            other => Err(Error::Config(format!("unknown noise kind `{other}`"))),
        }
    }
}

impl std::fmt::Display for NoiseKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// With probability `p` one of the `n` qubits, chosen uniformly, gets hit by `sigma`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub kind: NoiseKind,
    pub p: f64,
    pub n: usize,
}

impl NoiseSpec {
    pub fn new(kind: NoiseKind, p: f64, n: usize) -> Result<Self> {
        let spec = NoiseSpec { kind, p, n };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.p) {
            return Err(Error::Probability(self.p));
        }
        if self.n == 0 {
            return Err(Error::UnsupportedLayout("noise needs at least one qubit".into()));
        }
        Ok(())
    }

    /// Probability weights of the Kraus terms: identity first, then qubit `0..n`.
    pub fn weights(&self) -> Vec<f64> {
        std::iter::once(1.0 - self.p)
            .chain(std::iter::repeat_n(self.p / self.n as f64, self.n))
            .collect()
    }
}

/// Kraus operators `sqrt(1-p) I` and `sqrt(p/n) sigma_l` for each qubit `l`.
pub fn build_noise_channel(spec: &NoiseSpec) -> Result<KrausChannel> {
    spec.validate()?;
    let n = spec.n;
    let dim = 1usize << n;
    let weights = spec.weights();
    let mut ops = Vec::with_capacity(n + 1);
    ops.push(DMatrix::<C64>::identity(dim, dim) * C64::new(weights[0].sqrt(), 0.0));
    for q in 0..n {
        let sigma = UnitaryGate::single(q, spec.kind.pauli().matrix()).matrix(n)?;
        ops.push(sigma * C64::new(weights[q + 1].sqrt(), 0.0));
    }
    KrausChannel::new(ops)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::pure_state;

    #[test]
    fn single_qubit_bit_flip_channel() {
        let ch = build_noise_channel(&NoiseSpec::new(NoiseKind::BitFlip, 1.0, 1).unwrap()).unwrap();
        let out = pure_state(1, &[0]).unwrap().apply_channel(&ch).unwrap();
        assert!((out.population(1) - 1.0).abs() < 1e-15);

        let ch = build_noise_channel(&NoiseSpec::new(NoiseKind::BitFlip, 0.5, 1).unwrap()).unwrap();
        let out = pure_state(1, &[0]).unwrap().apply_channel(&ch).unwrap();
        assert!((out.population(0) - 0.5).abs() < 1e-15);
        assert!((out.population(1) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn three_qubit_bit_flip_populations() {
        let ch = build_noise_channel(&NoiseSpec::new(NoiseKind::BitFlip, 0.8, 3).unwrap()).unwrap();
        let out = pure_state(3, &[0, 0, 0]).unwrap().apply_channel(&ch).unwrap();
        // 1 - p on |000>, p/3 on each weight-one string
        assert!((out.population(0) - 0.2).abs() < 1e-12);
        for idx in [0b100, 0b010, 0b001] {
            assert!((out.population(idx) - 0.8 / 3.0).abs() < 1e-12);
        }
        assert_eq!(out.population(0b111), 0.0);
    }

    #[test]
    fn phase_flip_leaves_all_zero_state_alone() {
        for p in [0.0, 0.3, 1.0] {
            let ch =
                build_noise_channel(&NoiseSpec::new(NoiseKind::PhaseFlip, p, 3).unwrap()).unwrap();
            let rho = pure_state(3, &[0, 0, 0]).unwrap();
            let out = rho.apply_channel(&ch).unwrap();
            assert!((out.matrix() - rho.matrix()).iter().all(|z| z.norm() < 1e-15));
        }
    }

    #[test]
    fn probability_out_of_range() {
        assert!(matches!(
            NoiseSpec::new(NoiseKind::BitFlip, 1.2, 3),
            Err(Error::Probability(_))
        ));
        assert!(NoiseSpec::new(NoiseKind::BitFlip, -0.1, 3).is_err());
    }

    #[test]
    fn kind_names_round_trip() {
        for k in [NoiseKind::BitFlip, NoiseKind::PhaseFlip, NoiseKind::YFlip] {
            assert_eq!(k.name().parse::<NoiseKind>().unwrap(), k);
        }
    }
}
