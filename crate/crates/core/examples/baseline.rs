//! No-correction fidelities for every noise kind over a grid of flip probabilities.

use vqec::experiment::report_baselines;
use vqec::noise::{NoiseKind, NoiseSpec};

fn main() -> vqec::Result<()> {
    println!("{:>10} {:>5} {:>10} {:>10} {:>10}", "noise", "p", "f0", "f0_strong", "residual");
    for kind in [NoiseKind::BitFlip, NoiseKind::PhaseFlip, NoiseKind::YFlip] {
        for i in 0..=5 {
            let p = 0.2 * i as f64;
            let b = report_baselines(&NoiseSpec::new(kind, p, 3)?)?;
            println!(
                "{:>10} {p:>5.1} {:>10.6} {:>10.6} {:>10.1e}",
                kind.name(),
                b.f0,
                b.f0_strong,
                b.identity_residual
            );
        }
    }
    Ok(())
}
