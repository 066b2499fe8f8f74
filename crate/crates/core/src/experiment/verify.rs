use serde::Serialize;

use crate::ansatz::{exact_code_params, AnsatzStructure};
use crate::cost::{CostHamiltonian, CostKind, Pipeline};
use crate::error::Result;
use crate::noise::{NoiseKind, NoiseSpec};
use crate::optim::{random_angles, Objective};
use crate::qsim::QubitLayout;

#[derive(Debug, Clone, Serialize)]
pub struct ReferenceCheck {
    pub noise: NoiseSpec,
    pub fidelity: f64,
    pub fid_cost: f64,
    pub wass_cost: f64,
    pub passed: bool,
}

/// Repetition-code angles pushed through the full pipeline.
pub fn check_reference_code(kind: NoiseKind, p: f64, tol: f64) -> Result<ReferenceCheck> {
    let layout = QubitLayout::three_qubit_code();
    let noise = NoiseSpec::new(kind, p, layout.code_len())?;
    let pipeline = Pipeline::with_structure(layout, 2, AnsatzStructure::Syndrome, noise)?;
    let (alpha, beta) = exact_code_params(kind, layout, 2)?;
    let n = layout.code_len();
    let fid = pipeline.evaluate(&alpha, &beta, &CostHamiltonian::fid(n))?;
    let wass = pipeline.evaluate(&alpha, &beta, &CostHamiltonian::wass(n))?;
    Ok(ReferenceCheck {
        noise,
        fidelity: fid.fidelity,
        fid_cost: fid.cost,
        wass_cost: wass.cost,
        passed: (fid.fidelity - 1.0).abs() < tol && fid.cost.abs() < tol && wass.cost.abs() < tol,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct GradientCheck {
    pub cost_kind: CostKind,
    pub points: usize,
    /// Largest gap between shift-rule and central-difference derivatives.
    pub max_deviation: f64,
    pub evaluations_per_beta: f64,
    pub evaluations_per_alpha: f64,
    pub passed: bool,
}

/// Compares shift-rule gradients with central differences at random points.
pub fn check_gradients(
    pipeline: &Pipeline,
    kind: CostKind,
    points: usize,
    step: f64,
    tol: f64,
    seed: u64,
) -> Result<GradientCheck> {
    let h = CostHamiltonian::new(kind, pipeline.layout().code_len());
    let obj = Objective::new(pipeline, &h);
    let mut max_dev = 0.0f64;
    let mut beta_evals = 0u64;
    let mut alpha_evals = 0u64;
    let mut components = (0u64, 0u64);
    for i in 0..points {
        let (a, b) = random_angles(pipeline, seed.wrapping_add(i as u64));
        let ja = i % a.len();
        let jb = i % b.len();

        obj.reset_evaluations();
        let ga = obj.grad_alpha(&a, &b, ja)?;
        alpha_evals += obj.evaluations();
        obj.reset_evaluations();
        let gb = obj.grad_beta(&a, &b, jb)?;
        beta_evals += obj.evaluations();
        components.0 += 1;
        components.1 += 1;

        let fd = |alpha: &[f64], beta: &[f64]| pipeline.cost_value(alpha, beta, &h);
        let (mut ap, mut am) = (a.clone(), a.clone());
        ap[ja] += step;
        am[ja] -= step;
        let fa = (fd(&ap, &b)? - fd(&am, &b)?) / (2.0 * step);
        let (mut bp, mut bm) = (b.clone(), b.clone());
        bp[jb] += step;
        bm[jb] -= step;
        let fb = (fd(&a, &bp)? - fd(&a, &bm)?) / (2.0 * step);
        max_dev = max_dev.max((ga - fa).abs()).max((gb - fb).abs());
    }
    let per_alpha = alpha_evals as f64 / components.0.max(1) as f64;
    let per_beta = beta_evals as f64 / components.1.max(1) as f64;
    Ok(GradientCheck {
        cost_kind: kind,
        points,
        max_deviation: max_dev,
        evaluations_per_beta: per_beta,
        evaluations_per_alpha: per_alpha,
        passed: max_dev < tol && per_alpha == 4.0 && per_beta == 2.0,
    })
}
