//! Switching cost mid-descent, in both directions.
//!
//! Usage: `cargo run --release --example two_stage -- [restarts]`

use vqec::cost::CostKind;
use vqec::experiment::{run_two_stage, ExperimentConfig};

fn main() -> vqec::Result<()> {
    let restarts = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(4);
    let cfg = ExperimentConfig {
        num_restarts: restarts,
        ..Default::default()
    };
    for (first, second) in [(CostKind::Fid, CostKind::Wass), (CostKind::Wass, CostKind::Fid)] {
        let s = run_two_stage(&cfg, first, second)?;
        println!("{first} -> {second}");
        for r in &s.records {
            println!(
                "  {:.6} -> {:.6}  ({:+.3e})",
                r.first_fidelity, r.second_fidelity, r.improvement
            );
        }
        println!(
            "  median {:+.3e}, max {:+.3e}, {} negative",
            s.median_improvement, s.max_improvement, s.negative_runs
        );
    }
    Ok(())
}
