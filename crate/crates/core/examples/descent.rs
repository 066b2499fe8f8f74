//! One descent from a random start under each cost.

use std::time::Instant;

use vqec::cost::{CostHamiltonian, CostKind, Pipeline};
use vqec::noise::{NoiseKind, NoiseSpec};
use vqec::optim::{descend, OptimizerConfig};
use vqec::qsim::QubitLayout;

fn main() -> vqec::Result<()> {
    let seed: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1);
    let noise = NoiseSpec::new(NoiseKind::PhaseFlip, 0.8, 3)?;
    let pipeline = Pipeline::with_layers(QubitLayout::three_qubit_code(), 2, noise)?;
    for kind in [CostKind::Fid, CostKind::Wass] {
        let h = CostHamiltonian::new(kind, 3);
        let cfg = OptimizerConfig { seed, ..Default::default() };
        let t = Instant::now();
        let r = descend(&pipeline, &h, &cfg, None)?;
        println!(
            "{kind:>4}: cost {:.6} -> {:.6}, fidelity {:.6}, {} iterations, converged {}, {:.2?}",
            r.cost_history[0], r.final_cost, r.final_fidelity, r.iterations, r.converged, t.elapsed()
        );
    }
    Ok(())
}
