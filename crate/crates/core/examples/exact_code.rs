//! The three-qubit repetition code expressed as ansatz angles.

use vqec::ansatz::exact_code_params;
use vqec::cost::{CostHamiltonian, Pipeline};
use vqec::noise::{NoiseKind, NoiseSpec};
use vqec::qsim::QubitLayout;

fn main() -> vqec::Result<()> {
    let layout = QubitLayout::three_qubit_code();
    for kind in [NoiseKind::BitFlip, NoiseKind::PhaseFlip] {
        let (alpha, beta) = exact_code_params(kind, layout, 2)?;
        for p in [0.0, 0.4, 0.8, 1.0] {
            let pipeline = Pipeline::with_layers(layout, 2, NoiseSpec::new(kind, p, 3)?)?;
            let fid = pipeline.evaluate(&alpha, &beta, &CostHamiltonian::fid(3))?;
            let wass = pipeline.cost_value(&alpha, &beta, &CostHamiltonian::wass(3))?;
            println!(
                "{:>10} p={p:.1}: fidelity {:.12}  fid cost {:+.1e}  wass cost {:+.1e}",
                kind.name(),
                fid.fidelity,
                fid.cost,
                wass
            );
        }
    }
    Ok(())
}
