//! Density-matrix primitives: gates, noise, ancillas and partial traces.

use vqec::noise::{build_noise_channel, NoiseKind, NoiseSpec};
use vqec::qsim::{pure_state, Control, Mat2, UnitaryGate};

fn main() -> vqec::Result<()> {
    let plus = pure_state(1, &[0])?.apply_unitary(&UnitaryGate::single(0, Mat2::hadamard()))?;
    let bell = plus
        .extend_with_ancilla(1)?
        .apply_unitary(&UnitaryGate::cnot(Control::on_one(0), 1))?;
    println!("Bell populations: {:?}", (0..4).map(|i| bell.population(i)).collect::<Vec<_>>());

    let reduced = bell.partial_trace(&[0])?;
    println!("reduced state eigenvalues: {:?}", reduced.eigenvalues());

    let channel = build_noise_channel(&NoiseSpec::new(NoiseKind::BitFlip, 0.3, 2)?)?;
    let noisy = bell.apply_channel(&channel)?;
    noisy.validate()?;
    println!(
        "after bit flips: populations {:?}, trace {:.12}",
        (0..4).map(|i| noisy.population(i)).collect::<Vec<_>>(),
        noisy.trace().re
    );
    Ok(())
}
