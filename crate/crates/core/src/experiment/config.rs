use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::ansatz::AnsatzStructure;
use crate::cost::{CostHamiltonian, CostKind, Pipeline};
use crate::error::{Error, Result};
use crate::noise::{NoiseKind, NoiseSpec};
use crate::optim::OptimizerConfig;
use crate::qsim::QubitLayout;

/// Fidelity a run must reach to count as a success.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThresholdMode {
    /// No-correction fidelity of the whole code block.
    F0,
    /// No-correction fidelity of the logical qubit alone.
    F0Strong,
    Custom(f64),
}

impl Serialize for ThresholdMode {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ThresholdMode::F0 => s.serialize_str("f0"),
            ThresholdMode::F0Strong => s.serialize_str("f0_strong"),
            ThresholdMode::Custom(v) => s.serialize_f64(*v),
        }
    }
}

impl<'de> Deserialize<'de> for ThresholdMode {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Name(String),
            Value(f64),
        }
        match Raw::deserialize(d)? {
            Raw::Value(v) => Ok(ThresholdMode::Custom(v)),
            Raw::Name(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

impl std::str::FromStr for ThresholdMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "f0" => Ok(ThresholdMode::F0),
            "f0_strong" => Ok(ThresholdMode::F0Strong),
            other => other
                .parse::<f64>()
                .map(ThresholdMode::Custom)
                .map_err(|_| Error::Config(format!("unknown threshold mode `{other}`"))),
        }
    }
}

impl std::fmt::Display for ThresholdMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ThresholdMode::F0 => f.write_str("f0"),
            ThresholdMode::F0Strong => f.write_str("f0_strong"),
            ThresholdMode::Custom(v) => write!(f, "{v}"),
        }
    }
}

/// Everything a batch or two-stage experiment needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub noise: NoiseSpec,
    pub layout: QubitLayout,
    pub layers: usize,
    #[serde(default)]
    pub structure: AnsatzStructure,
    pub optimizer: OptimizerConfig,
    pub cost_kinds: Vec<CostKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub full_weights: Option<Vec<f64>>,
    pub num_restarts: usize,
    pub threshold_mode: ThresholdMode,
    pub master_seed: u64,
    pub output: PathBuf,
    /// Worker threads; 0 uses every available core.
    pub workers: usize,
    pub fidelity_bins: usize,
    pub iteration_bins: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let layout = QubitLayout::three_qubit_code();
        ExperimentConfig {
            noise: NoiseSpec {
                kind: NoiseKind::PhaseFlip,
                p: 0.8,
                n: layout.code_len(),
            },
            layout,
            layers: 2,
            structure: AnsatzStructure::default(),
            optimizer: OptimizerConfig::default(),
            cost_kinds: vec![CostKind::Fid, CostKind::Wass],
            full_weights: None,
            num_restarts: 500,
            threshold_mode: ThresholdMode::F0Strong,
            master_seed: 0,
            output: PathBuf::from("out"),
            workers: 0,
            fidelity_bins: 20,
            iteration_bins: 20,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        self.noise.validate()?;
        if self.noise.n != self.layout.code_len() {
            return Err(Error::Config(format!(
                "noise acts on {} qubits but the code block has {}",
                self.noise.n,
                self.layout.code_len()
            )));
        }
        if self.layout.logical != 1 {
            return Err(Error::Config("exactly one logical qubit is supported".into()));
        }
        if self.layers == 0 {
            return Err(Error::Config("ansatz.layers must be at least 1".into()));
        }
        self.optimizer.validate()?;
        if self.num_restarts == 0 {
            return Err(Error::Config("experiment.num_restarts must be at least 1".into()));
        }
        if self.cost_kinds.is_empty() {
            return Err(Error::Config("no cost kinds selected".into()));
        }
        if let ThresholdMode::Custom(v) = self.threshold_mode {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::Config(format!("threshold {v} outside [0, 1]")));
            }
        }
        if self.fidelity_bins == 0 || self.iteration_bins == 0 {
            return Err(Error::Config("histograms need at least one bin".into()));
        }
        self.hamiltonian(CostKind::Full).map(|_| ())
    }

    pub fn hamiltonian(&self, kind: CostKind) -> Result<CostHamiltonian> {
        let n = self.layout.code_len();
        match kind {
            CostKind::Full => CostHamiltonian::full(n, self.full_weights.clone()),
            k => Ok(CostHamiltonian::new(k, n)),
        }
    }

    pub fn pipeline(&self) -> Result<Pipeline> {
        Pipeline::with_structure(self.layout, self.layers, self.structure, self.noise)
    }

    /// Reads a TOML file; absent keys keep their defaults.
    pub fn from_toml_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text)
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let file: FileConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let mut cfg = ExperimentConfig::default();
        file.apply(&mut cfg)?;
        cfg.validate()?;
        Ok(cfg)
    }
}

/// On-disk layout of the config file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(default)]
    pub noise: NoiseSection,
    #[serde(default)]
    pub layout: LayoutSection,
    #[serde(default)]
    pub ansatz: AnsatzSection,
    #[serde(default)]
    pub opt: OptSection,
    #[serde(default)]
    pub cost: CostSection,
    #[serde(default)]
    pub experiment: ExperimentSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseSection {
    pub kind: Option<NoiseKind>,
    pub p: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayoutSection {
    pub k: Option<usize>,
    pub n_minus_k: Option<usize>,
    pub r: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnsatzSection {
    pub layers: Option<usize>,
    pub structure: Option<AnsatzStructure>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptSection {
    pub learning_rate: Option<f64>,
    pub momentum: Option<f64>,
    pub max_iters: Option<usize>,
    pub convergence_window: Option<usize>,
    pub cost_tolerance: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CostSection {
    pub kinds: Option<Vec<CostKind>>,
    pub full_weights: Option<Vec<f64>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSection {
    pub num_restarts: Option<usize>,
    pub threshold_mode: Option<ThresholdMode>,
    pub master_seed: Option<u64>,
    pub output: Option<PathBuf>,
    pub workers: Option<usize>,
    pub fidelity_bins: Option<usize>,
    pub iteration_bins: Option<usize>,
}

impl FileConfig {
    pub fn apply(self, cfg: &mut ExperimentConfig) -> Result<()> {
        let l = self.layout;
        cfg.layout = QubitLayout::new(
            l.k.unwrap_or(cfg.layout.logical),
            l.n_minus_k.unwrap_or(cfg.layout.code_ancillas),
            l.r.unwrap_or(cfg.layout.recovery_ancillas),
        )?;
        cfg.noise.n = cfg.layout.code_len();
        set(&mut cfg.noise.kind, self.noise.kind);
        set(&mut cfg.noise.p, self.noise.p);
        set(&mut cfg.layers, self.ansatz.layers);
        set(&mut cfg.structure, self.ansatz.structure);
        let o = self.opt;
        set(&mut cfg.optimizer.learning_rate, o.learning_rate);
        set(&mut cfg.optimizer.momentum, o.momentum);
        set(&mut cfg.optimizer.max_iters, o.max_iters);
        set(&mut cfg.optimizer.convergence_window, o.convergence_window);
        set(&mut cfg.optimizer.cost_tolerance, o.cost_tolerance);
        set(&mut cfg.cost_kinds, self.cost.kinds);
        if self.cost.full_weights.is_some() {
            cfg.full_weights = self.cost.full_weights;
        }
        let e = self.experiment;
        set(&mut cfg.num_restarts, e.num_restarts);
        set(&mut cfg.threshold_mode, e.threshold_mode);
        set(&mut cfg.master_seed, e.master_seed);
        set(&mut cfg.output, e.output);
        set(&mut cfg.workers, e.workers);
        set(&mut cfg.fidelity_bins, e.fidelity_bins);
        set(&mut cfg.iteration_bins, e.iteration_bins);
        Ok(())
    }
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}
