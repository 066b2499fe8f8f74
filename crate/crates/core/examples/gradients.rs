//! Shift-rule gradients next to central differences, plus the evaluation count of each rule.

use vqec::cost::{CostHamiltonian, CostKind, Pipeline};
use vqec::noise::{NoiseKind, NoiseSpec};
use vqec::optim::{random_angles, Objective};
use vqec::qsim::QubitLayout;

fn main() -> vqec::Result<()> {
    let noise = NoiseSpec::new(NoiseKind::PhaseFlip, 0.8, 3)?;
    let pipeline = Pipeline::with_layers(QubitLayout::three_qubit_code(), 2, noise)?;
    let (alpha, beta) = random_angles(&pipeline, 7);
    let step = 1e-5;

    for kind in [CostKind::Fid, CostKind::Wass] {
        let h = CostHamiltonian::new(kind, 3);
        let obj = Objective::new(&pipeline, &h);
        println!("{kind}");
        for j in [0, 5, 11] {
            obj.reset_evaluations();
            let g = obj.grad_alpha(&alpha, &beta, j)?;
            let calls = obj.evaluations();
            let (mut up, mut down) = (alpha.clone(), alpha.clone());
            up[j] += step;
            down[j] -= step;
            let fd = (obj.cost(&up, &beta)? - obj.cost(&down, &beta)?) / (2.0 * step);
            println!("  encoder  {j:>2}: shift {g:+.9}  fd {fd:+.9}  ({calls} calls)");
        }
        for j in [0, 17, 59] {
            obj.reset_evaluations();
            let g = obj.grad_beta(&alpha, &beta, j)?;
            let calls = obj.evaluations();
            let (mut up, mut down) = (beta.clone(), beta.clone());
            up[j] += step;
            down[j] -= step;
            let fd = (obj.cost(&alpha, &up)? - obj.cost(&alpha, &down)?) / (2.0 * step);
            println!("  recovery {j:>2}: shift {g:+.9}  fd {fd:+.9}  ({calls} calls)");
        }
    }
    Ok(())
}
