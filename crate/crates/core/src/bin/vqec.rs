use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use vqec::ansatz::AnsatzStructure;
use vqec::cost::CostKind;
use vqec::experiment::{
    check_gradients, check_reference_code, report_baselines, run_batch, run_two_stage,
    write_batch_outputs, write_two_stage_outputs, ExperimentConfig, ThresholdMode,
};
use vqec::noise::{NoiseKind, NoiseSpec};
use vqec::{Error, Result};

#[derive(Parser)]
#[command(name = "vqec", version, about = "Variational error-correction search")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the no-correction fidelities for a noise model.
    Baseline {
        #[arg(long, default_value = "phase_flip")]
        noise: NoiseKind,
        #[arg(long, default_value_t = 0.8)]
        p: f64,
        #[arg(long, default_value_t = 3)]
        n: usize,
    },
    /// Random restarts for each selected cost.
    Run(ExperimentArgs),
    /// Descend under one cost, then continue under another.
    TwoStage {
        #[command(flatten)]
        args: ExperimentArgs,
        #[arg(long, default_value = "fid")]
        first: CostKind,
        #[arg(long, default_value = "wass")]
        second: CostKind,
    },
    /// Check the repetition code and the shift-rule gradients.
    Verify {
        #[arg(long, default_value_t = 20)]
        points: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct ExperimentArgs {
    /// TOML file; flags given on the command line take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    noise: Option<NoiseKind>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    layers: Option<usize>,
    #[arg(long)]
    structure: Option<AnsatzStructure>,
    #[arg(long)]
    learning_rate: Option<f64>,
    #[arg(long)]
    momentum: Option<f64>,
    #[arg(long)]
    max_iters: Option<usize>,
    #[arg(long)]
    convergence_window: Option<usize>,
    #[arg(long)]
    cost_tolerance: Option<f64>,
    /// Cost kinds to run, comma separated.
    #[arg(long, value_delimiter = ',')]
    cost: Option<Vec<CostKind>>,
    #[arg(long)]
    restarts: Option<usize>,
    /// `f0`, `f0_strong` or a number in [0, 1].
    #[arg(long)]
    threshold: Option<ThresholdMode>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    output: Option<PathBuf>,
    /// Worker threads; 0 uses every core.
    #[arg(long)]
    workers: Option<usize>,
}

impl ExperimentArgs {
    fn resolve(self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::from_toml_file(path).map_err(|e| match e {
                Error::Io(io) => Error::Config(format!("{}: {io}", path.display())),
                other => other,
            })?,
            None => ExperimentConfig::default(),
        };
        let o = &mut cfg.optimizer;
        set(&mut cfg.noise.kind, self.noise);
        set(&mut cfg.noise.p, self.p);
        set(&mut cfg.layers, self.layers);
        set(&mut cfg.structure, self.structure);
        set(&mut o.learning_rate, self.learning_rate);
        set(&mut o.momentum, self.momentum);
        set(&mut o.max_iters, self.max_iters);
        set(&mut o.convergence_window, self.convergence_window);
        set(&mut o.cost_tolerance, self.cost_tolerance);
        set(&mut cfg.cost_kinds, self.cost);
        set(&mut cfg.num_restarts, self.restarts);
        set(&mut cfg.threshold_mode, self.threshold);
        set(&mut cfg.master_seed, self.seed);
        set(&mut cfg.output, self.output);
        set(&mut cfg.workers, self.workers);
        cfg.validate()?;
        Ok(cfg)
    }
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse().command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn dispatch(command: Command) -> Result<bool> {
    match command {
        Command::Baseline { noise, p, n } => {
            let b = report_baselines(&NoiseSpec::new(noise, p, n)?)?;
            println!("{}", serde_json::to_string_pretty(&b)?);
        }
        Command::Run(args) => {
            let cfg = args.resolve()?;
            std::fs::create_dir_all(&cfg.output)?;
            let mut batches = Vec::new();
            for &kind in &cfg.cost_kinds {
                let b = run_batch(&cfg, kind)?;
                println!(
                    "{:>5}: {}/{} above {:.6} ({:.1}%), median fidelity {:.6}",
                    kind.name(),
                    b.successes,
                    b.num_runs,
                    b.threshold,
                    100.0 * b.success_rate,
                    b.median_fidelity
                );
                batches.push(b);
            }
            write_batch_outputs(&cfg.output, &cfg, &batches)?;
        }
        Command::TwoStage {
            args,
            first,
            second,
        } => {
            let cfg = args.resolve()?;
            std::fs::create_dir_all(&cfg.output)?;
            let s = run_two_stage(&cfg, first, second)?;
            println!(
                "{first} -> {second}: median improvement {:.3e}, max {:.3e}, {} of {} negative",
                s.median_improvement, s.max_improvement, s.negative_runs, s.num_runs
            );
            write_two_stage_outputs(&cfg.output, &cfg, &s)?;
        }
        Command::Verify { points, seed } => {
            let mut ok = true;
            for kind in [NoiseKind::BitFlip, NoiseKind::PhaseFlip] {
                for p in [0.4, 0.8] {
                    let r = check_reference_code(kind, p, 1e-9)?;
                    ok &= r.passed;
                    println!(
                        "{} code  {kind} p={p}: fidelity {:.12}",
                        status(r.passed),
                        r.fidelity
                    );
                }
            }
            let pipeline = ExperimentConfig::default().pipeline()?;
            for kind in [CostKind::Fid, CostKind::Wass] {
                let g = check_gradients(&pipeline, kind, points, 1e-5, 1e-6, seed)?;
                ok &= g.passed;
                println!(
                    "{} grad  {kind}: max deviation {:.2e}, {} / {} evaluations per component",
                    status(g.passed),
                    g.max_deviation,
                    g.evaluations_per_beta,
                    g.evaluations_per_alpha
                );
            }
            return Ok(ok);
        }
    }
    Ok(true)
}

fn status(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}
