//! Eigenvalues and multiplicities of the cost observables.

use vqec::cost::CostHamiltonian;

fn main() -> vqec::Result<()> {
    for n in 1..=5 {
        println!("n = {n}");
        for h in [
            CostHamiltonian::fid(n),
            CostHamiltonian::wass(n),
            CostHamiltonian::full(n, None)?,
        ] {
            let levels: Vec<String> = h
                .spectrum()
                .iter()
                .map(|(e, m)| format!("{e:.3} x{m}"))
                .collect();
            println!("  {:>4}: {}", h.kind.name(), levels.join(", "));
        }
    }
    Ok(())
}
