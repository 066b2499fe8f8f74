//! A small restart batch under both costs, written to a directory.
//!
//! Usage: `cargo run --release --example batch -- [restarts] [out_dir]`

use std::path::PathBuf;

use vqec::experiment::{run_batch, write_batch_outputs, ExperimentConfig};

fn main() -> vqec::Result<()> {
    let mut args = std::env::args().skip(1);
    let restarts = args.next().and_then(|s| s.parse().ok()).unwrap_or(8);
    let out = args.next().map(PathBuf::from).unwrap_or_else(|| "out/batch".into());

    let cfg = ExperimentConfig {
        num_restarts: restarts,
        output: out.clone(),
        ..Default::default()
    };
    let mut batches = Vec::new();
    for &kind in &cfg.cost_kinds {
        let b = run_batch(&cfg, kind)?;
        println!(
            "{:>4}: success {:.1}% over {} runs, median fidelity {:.6}, best {:.6}",
            kind.name(),
            100.0 * b.success_rate,
            b.num_runs,
            b.median_fidelity,
            b.best_fidelity
        );
        batches.push(b);
    }
    write_batch_outputs(&out, &cfg, &batches)?;
    println!("wrote {}", out.display());
    Ok(())
}
