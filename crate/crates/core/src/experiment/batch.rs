use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, ThresholdMode};
use crate::cost::{
    baseline_f0, baseline_f0_closed, baseline_f0_strong, baseline_f0_strong_closed, CostKind,
};
use crate::error::{Error, Result};
use crate::noise::NoiseSpec;
use crate::optim::{descend, OptimizerConfig, RunRecord};

/// SplitMix64 finalizer.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of restart `i`, derived from the master seed.
pub fn run_seed(master: u64, i: usize) -> u64 {
    splitmix64(master.wrapping_add(i as u64))
}

/// No-correction fidelities and the residual of the identity linking them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Baselines {
    pub noise: NoiseSpec,
    pub f0: f64,
    pub f0_strong: f64,
    pub f0_closed: f64,
    pub f0_strong_closed: f64,
    /// `F0 - (F0_strong - ((n-1)/n) p (1 - |<0|sigma|0>|^2))`
    pub identity_residual: f64,
}

pub fn report_baselines(noise: &NoiseSpec) -> Result<Baselines> {
    let f0 = baseline_f0(noise)?;
    let f0_strong = baseline_f0_strong(noise)?;
    let n = noise.n as f64;
    let gap = (n - 1.0) / n * noise.p * (1.0 - noise.kind.zero_overlap());
    Ok(Baselines {
        noise: *noise,
        f0,
        f0_strong,
        f0_closed: baseline_f0_closed(noise),
        f0_strong_closed: baseline_f0_strong_closed(noise),
        identity_residual: f0 - (f0_strong - gap),
    })
}

/// Resolves a threshold mode to a fidelity value.
pub fn threshold_value(mode: ThresholdMode, noise: &NoiseSpec) -> Result<f64> {
    match mode {
        ThresholdMode::F0 => baseline_f0(noise),
        ThresholdMode::F0Strong => baseline_f0_strong(noise),
        ThresholdMode::Custom(v) => Ok(v),
    }
}

/// Equal-width bins over `[lo, hi]`; the last bin is closed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<usize>,
}

impl Histogram {
    pub fn new(values: impl IntoIterator<Item = f64>, lo: f64, hi: f64, bins: usize) -> Self {
        let bins = bins.max(1);
        let hi = if hi > lo { hi } else { lo + 1.0 };
        let width = (hi - lo) / bins as f64;
        let edges = (0..=bins).map(|i| lo + width * i as f64).collect();
        let mut counts = vec![0; bins];
        for v in values {
            let idx = (((v - lo) / width).floor().max(0.0) as usize).min(bins - 1);
            counts[idx] += 1;
        }
        Histogram { edges, counts }
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }
}

/// Restarts under one cost kind and their statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchSummary {
    pub cost_kind: CostKind,
    pub threshold: f64,
    pub num_runs: usize,
    pub successes: usize,
    pub success_rate: f64,
    pub converged_runs: usize,
    pub mean_fidelity: f64,
    pub median_fidelity: f64,
    pub best_fidelity: f64,
    /// Fidelities of successful runs over `[threshold, 1]`.
    pub fidelity_histogram: Histogram,
    /// Iteration counts of successful runs over `[0, max_iters]`.
    pub iteration_histogram: Histogram,
    #[serde(skip)]
    pub runs: Vec<RunRecord>,
}

impl BatchSummary {
    pub fn from_runs(
        cost_kind: CostKind,
        threshold: f64,
        runs: Vec<RunRecord>,
        max_iters: usize,
        fidelity_bins: usize,
        iteration_bins: usize,
    ) -> Self {
        let fids: Vec<f64> = runs.iter().map(|r| r.final_fidelity).collect();
        let passing: Vec<&RunRecord> = runs.iter().filter(|r| r.final_fidelity >= threshold).collect();
        let num_runs = runs.len();
        let successes = passing.len();
        BatchSummary {
            cost_kind,
            threshold,
            num_runs,
            successes,
            success_rate: if num_runs == 0 { 0.0 } else { successes as f64 / num_runs as f64 },
            converged_runs: runs.iter().filter(|r| r.converged).count(),
            mean_fidelity: if num_runs == 0 { 0.0 } else { fids.iter().sum::<f64>() / num_runs as f64 },
            median_fidelity: median(&fids),
            best_fidelity: fids.iter().copied().fold(0.0, f64::max),
            fidelity_histogram: Histogram::new(
                passing.iter().map(|r| r.final_fidelity),
                threshold,
                1.0,
                fidelity_bins,
            ),
            iteration_histogram: Histogram::new(
                passing.iter().map(|r| r.iterations as f64),
                0.0,
                max_iters as f64,
                iteration_bins,
            ),
            runs,
        }
    }
}

pub fn median(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Config(format!("worker pool: {e}")))
}

fn run_config(cfg: &ExperimentConfig, seed: u64) -> OptimizerConfig {
    OptimizerConfig {
        seed,
        ..cfg.optimizer.clone()
    }
}

/// Independent random restarts under `kind`. Results are ordered by restart index.
pub fn run_batch(cfg: &ExperimentConfig, kind: CostKind) -> Result<BatchSummary> {
    run_batch_from(cfg, kind, None)
}

/// As [`run_batch`], optionally starting every restart from the same point.
pub fn run_batch_from(
    cfg: &ExperimentConfig,
    kind: CostKind,
    init: Option<(Vec<f64>, Vec<f64>)>,
) -> Result<BatchSummary> {
    cfg.validate()?;
    let pipeline = cfg.pipeline()?;
    let h = cfg.hamiltonian(kind)?;
    let threshold = threshold_value(cfg.threshold_mode, &cfg.noise)?;
    let runs: Vec<RunRecord> = pool(cfg.workers)?.install(|| {
        (0..cfg.num_restarts)
            .into_par_iter()
            .map(|i| {
                let oc = run_config(cfg, run_seed(cfg.master_seed, i));
                descend(&pipeline, &h, &oc, init.clone())
            })
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(BatchSummary::from_runs(
        kind,
        threshold,
        runs,
        cfg.optimizer.max_iters,
        cfg.fidelity_bins,
        cfg.iteration_bins,
    ))
}

/// One restart of the cost-switching experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoStageRecord {
    pub seed: u64,
    pub first_fidelity: f64,
    pub second_fidelity: f64,
    pub improvement: f64,
    pub first_iterations: usize,
    pub second_iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoStageSummary {
    pub first: CostKind,
    pub second: CostKind,
    pub num_runs: usize,
    pub max_improvement: f64,
    pub median_improvement: f64,
    pub min_improvement: f64,
    pub negative_runs: usize,
    pub records: Vec<TwoStageRecord>,
}

/// Descends under `first`, then under `second` from the point the first descent reached.
pub fn run_two_stage(
    cfg: &ExperimentConfig,
    first: CostKind,
    second: CostKind,
) -> Result<TwoStageSummary> {
    if first == second {
        return Err(Error::Config(format!(
            "two-stage run needs two different costs, got {first} twice"
        )));
    }
    cfg.validate()?;
    let pipeline = cfg.pipeline()?;
    let h1 = cfg.hamiltonian(first)?;
    let h2 = cfg.hamiltonian(second)?;
    let records: Vec<TwoStageRecord> = pool(cfg.workers)?.install(|| {
        (0..cfg.num_restarts)
            .into_par_iter()
            .map(|i| {
                let oc = run_config(cfg, run_seed(cfg.master_seed, i));
                let a = descend(&pipeline, &h1, &oc, None)?;
                let b = descend(
                    &pipeline,
                    &h2,
                    &oc,
                    Some((a.final_alpha.clone(), a.final_beta.clone())),
                )?;
                Ok(TwoStageRecord {
                    seed: oc.seed,
                    first_fidelity: a.final_fidelity,
                    second_fidelity: b.final_fidelity,
                    improvement: b.final_fidelity - a.final_fidelity,
                    first_iterations: a.iterations,
                    second_iterations: b.iterations,
                })
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let imp: Vec<f64> = records.iter().map(|r| r.improvement).collect();
    Ok(TwoStageSummary {
        first,
        second,
        num_runs: records.len(),
        max_improvement: imp.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        median_improvement: median(&imp),
        min_improvement: imp.iter().copied().fold(f64::INFINITY, f64::min),
        negative_runs: imp.iter().filter(|&&x| x < 0.0).count(),
        records,
    })
}
