//! Dumps one recovery layer as JSON and rebuilds it.

use vqec::ansatz::{build_ansatz, AnsatzStructure, ParametricCircuit};
use vqec::qsim::QubitLayout;

fn main() -> vqec::Result<()> {
    let layout = QubitLayout::three_qubit_code();
    let (_, recovery) = build_ansatz(layout, 1, AnsatzStructure::Syndrome)?;
    let json = recovery.to_json()?;
    println!("{json}");
    let back = ParametricCircuit::from_json(&json)?;
    eprintln!(
        "{} gates, {} parameters, round trip equal: {}",
        back.gates.len(),
        back.param_count,
        back == recovery
    );
    Ok(())
}
