//! Parameter-shift gradients and momentum descent.

use std::f64::consts::{FRAC_PI_4, TAU};
use std::sync::atomic::{AtomicU64, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cost::{CostHamiltonian, CostKind, Evaluation, Pipeline};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub learning_rate: f64,
    pub momentum: f64,
    pub max_iters: usize,
    pub convergence_window: usize,
    pub cost_tolerance: f64,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            learning_rate: 0.05,
            momentum: 0.9,
            max_iters: 2000,
            convergence_window: 10,
            cost_tolerance: 1e-6,
            seed: 0,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.learning_rate.is_finite() || self.learning_rate <= 0.0 {
            return Err(Error::Config(format!(
                "learning rate must be positive, got {}",
                self.learning_rate
            )));
        }
        if !(0.0..1.0).contains(&self.momentum) {
            return Err(Error::Config(format!(
                "momentum must lie in [0, 1), got {}",
                self.momentum
            )));
        }
        if self.max_iters == 0 {
            return Err(Error::Config("max_iters must be at least 1".into()));
        }
        if self.convergence_window == 0 {
            return Err(Error::Config("convergence window must be at least 1".into()));
        }
        if !self.cost_tolerance.is_finite() || self.cost_tolerance <= 0.0 {
            return Err(Error::Config("cost tolerance must be positive".into()));
        }
        Ok(())
    }
}

/// Outcome of one descent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub seed: u64,
    pub cost_kind: CostKind,
    /// Cost at the start and after every iteration.
    pub cost_history: Vec<f64>,
    /// Lowest-cost point visited.
    pub final_alpha: Vec<f64>,
    pub final_beta: Vec<f64>,
    pub final_cost: f64,
    pub final_fidelity: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// A pipeline paired with a cost observable, counting evaluations.
pub struct Objective<'a> {
    pipeline: &'a Pipeline,
    hamiltonian: &'a CostHamiltonian,
    evaluations: AtomicU64,
}

impl<'a> Objective<'a> {
    pub fn new(pipeline: &'a Pipeline, hamiltonian: &'a CostHamiltonian) -> Self {
        Objective {
            pipeline,
            hamiltonian,
            evaluations: AtomicU64::new(0),
        }
    }

    pub fn pipeline(&self) -> &Pipeline {
        self.pipeline
    }

    pub fn hamiltonian(&self) -> &CostHamiltonian {
        self.hamiltonian
    }

    /// Pipeline evaluations made so far.
    pub fn evaluations(&self) -> u64 {
        self.evaluations.load(Ordering::Relaxed)
    }

    pub fn reset_evaluations(&self) {
        self.evaluations.store(0, Ordering::Relaxed);
    }

    pub fn evaluate(&self, alpha: &[f64], beta: &[f64]) -> Result<Evaluation> {
        self.evaluations.fetch_add(1, Ordering::Relaxed);
        self.pipeline.evaluate(alpha, beta, self.hamiltonian)
    }

    pub fn cost(&self, alpha: &[f64], beta: &[f64]) -> Result<f64> {
        Ok(self.evaluate(alpha, beta)?.cost)
    }

    fn cost_split(&self, enc: &[f64], dec: &[f64], rec: &[f64]) -> Result<f64> {
        self.evaluations.fetch_add(1, Ordering::Relaxed);
        Ok(self
            .pipeline
            .evaluate_split(enc, dec, rec, self.hamiltonian)?
            .cost)
    }

    /// `C(beta_j + pi/4) - C(beta_j - pi/4)` summed over the gates bound to slot `j`.
    pub fn grad_beta(&self, alpha: &[f64], beta: &[f64], j: usize) -> Result<f64> {
        let rec = self.pipeline.recovery();
        let gates = rec.occurrences(j)?;
        let enc = self.pipeline.encoder().gate_angles(alpha)?;
        let mut angles = rec.gate_angles(beta)?;
        let mut grad = 0.0;
        for g in gates {
            let base = angles[g];
            angles[g] = base + FRAC_PI_4;
            let plus = self.cost_split(&enc, &enc, &angles)?;
            angles[g] = base - FRAC_PI_4;
            let minus = self.cost_split(&enc, &enc, &angles)?;
            angles[g] = base;
            grad += plus - minus;
        }
        Ok(grad)
    }

    /// Four-term rule: the slot is shifted separately in the encoder and in
    /// its adjoint, summed over the gates bound to slot `j`.
    pub fn grad_alpha(&self, alpha: &[f64], beta: &[f64], j: usize) -> Result<f64> {
        let enc_circ = self.pipeline.encoder();
        let gates = enc_circ.occurrences(j)?;
        let rec = self.pipeline.recovery().gate_angles(beta)?;
        let base_angles = enc_circ.gate_angles(alpha)?;
        let mut enc = base_angles.clone();
        let mut dec = base_angles.clone();
        let mut grad = 0.0;
        for g in gates {
            let base = base_angles[g];
            enc[g] = base + FRAC_PI_4;
            let a = self.cost_split(&enc, &dec, &rec)?;
            enc[g] = base - FRAC_PI_4;
            let b = self.cost_split(&enc, &dec, &rec)?;
            enc[g] = base;
            dec[g] = base + FRAC_PI_4;
            let c = self.cost_split(&enc, &dec, &rec)?;
            dec[g] = base - FRAC_PI_4;
            let d = self.cost_split(&enc, &dec, &rec)?;
            dec[g] = base;
            grad += a - b + c - d;
        }
        Ok(grad)
    }

    pub fn gradient(&self, alpha: &[f64], beta: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        let ga = (0..alpha.len())
            .map(|j| self.grad_alpha(alpha, beta, j))
            .collect::<Result<Vec<_>>>()?;
        let gb = (0..beta.len())
            .map(|j| self.grad_beta(alpha, beta, j))
            .collect::<Result<Vec<_>>>()?;
        Ok((ga, gb))
    }
}

/// Uniform angles in `[0, 2 pi)` for both circuits, drawn from `seed`.
pub fn random_angles(pipeline: &Pipeline, seed: u64) -> (Vec<f64>, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alpha = (0..pipeline.encoder().param_count)
        .map(|_| rng.gen_range(0.0..TAU))
        .collect();
    let beta = (0..pipeline.recovery().param_count)
        .map(|_| rng.gen_range(0.0..TAU))
        .collect();
    (alpha, beta)
}

/// Momentum descent `v <- mu v - eta grad`, `theta <- theta + v`.
///
/// Stops once the best cost seen improved by less than `cost_tolerance` over
/// the last `convergence_window` iterations, or after `max_iters`.
pub fn descend(
    pipeline: &Pipeline,
    hamiltonian: &CostHamiltonian,
    config: &OptimizerConfig,
    init: Option<(Vec<f64>, Vec<f64>)>,
) -> Result<RunRecord> {
    config.validate()?;
    let objective = Objective::new(pipeline, hamiltonian);
    let (mut alpha, mut beta) = init.unwrap_or_else(|| random_angles(pipeline, config.seed));
    let na = pipeline.encoder().param_count;
    let nb = pipeline.recovery().param_count;
    if alpha.len() != na {
        return Err(Error::ParamCount {
            expected: na,
            got: alpha.len(),
        });
    }
    if beta.len() != nb {
        return Err(Error::ParamCount {
            expected: nb,
            got: beta.len(),
        });
    }

    let start = objective.evaluate(&alpha, &beta)?;
    let mut history = vec![start.cost];
    let mut best = start;
    let mut best_point = (alpha.clone(), beta.clone());
    let mut envelope = vec![start.cost];
    let mut va = vec![0.0; na];
    let mut vb = vec![0.0; nb];
    let mut converged = false;
    let mut iterations = 0;

    for t in 1..=config.max_iters {
        let (ga, gb) = objective.gradient(&alpha, &beta)?;
        for ((x, v), g) in alpha.iter_mut().zip(&mut va).zip(&ga) {
            *v = config.momentum * *v - config.learning_rate * g;
            *x += *v;
        }
        for ((x, v), g) in beta.iter_mut().zip(&mut vb).zip(&gb) {
            *v = config.momentum * *v - config.learning_rate * g;
            *x += *v;
        }
        let e = objective.evaluate(&alpha, &beta)?;
        history.push(e.cost);
        if e.cost < best.cost {
            best = e;
            best_point = (alpha.clone(), beta.clone());
        }
        envelope.push(best.cost);
        iterations = t;
        let w = config.convergence_window;
        if t >= w && envelope[t - w] - envelope[t] < config.cost_tolerance {
            converged = true;
            break;
        }
    }

    Ok(RunRecord {
        seed: config.seed,
        cost_kind: hamiltonian.kind,
        cost_history: history,
        final_alpha: best_point.0,
        final_beta: best_point.1,
        final_cost: best.cost,
        final_fidelity: best.fidelity.clamp(0.0, 1.0),
        iterations,
        converged,
    })
}
