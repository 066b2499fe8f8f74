//! Acceptance suite: eight criteria at pinned tolerances, one line each.

use std::fs;
use std::process::Command;
use std::time::{Duration, Instant};

use vqec::ansatz::exact_code_params;
use vqec::cost::{baseline_f0, baseline_f0_strong, CostHamiltonian, CostKind, Pipeline};
use vqec::experiment::{run_batch, run_two_stage, ExperimentConfig, ThresholdMode};
use vqec::noise::{NoiseKind, NoiseSpec};
use vqec::optim::{random_angles, Objective};
use vqec::qsim::QubitLayout;

struct Outcome {
    pass: bool,
    detail: String,
}

type Criterion = (&'static str, &'static str, fn() -> Outcome);

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn within(limit: Duration, elapsed: Duration) -> bool {
    elapsed < limit
}

fn pipeline(kind: NoiseKind, p: f64) -> Pipeline {
    let noise = NoiseSpec::new(kind, p, 3).unwrap();
    Pipeline::with_layers(QubitLayout::three_qubit_code(), 2, noise).unwrap()
}

fn ac1_baseline() -> Outcome {
    let t = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_vqec"))
        .args(["baseline", "--noise", "phase_flip", "--p", "0.8", "--n", "3"])
        .output()
        .unwrap();
    let elapsed = t.elapsed();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let f0 = v["f0"].as_f64().unwrap();
    let closed = (1.0 - 0.8) + (0.8 / 3.0) * (1.0 / 3.0 + 2.0);
    let pass = out.status.success()
        && (f0 - 0.82222).abs() < 1e-5
        && (f0 - closed).abs() < 1e-6
        && within(Duration::from_secs(1), elapsed);
    outcome(pass, format!("F0 = {f0:.8}, closed form {closed:.8}, {elapsed:.2?}"))
}

fn ac2_baseline_identity() -> Outcome {
    let t = Instant::now();
    let mut worst = 0.0f64;
    for kind in [NoiseKind::BitFlip, NoiseKind::PhaseFlip] {
        let m = kind.pauli().matrix();
        let overlap = m.0[0][0].norm_sqr();
        for i in 0..=5 {
            let p = 0.2 * i as f64;
            let noise = NoiseSpec::new(kind, p, 3).unwrap();
            let f0 = baseline_f0(&noise).unwrap();
            let strong = baseline_f0_strong(&noise).unwrap();
            worst = worst.max((f0 - (strong - 2.0 / 3.0 * p * (1.0 - overlap))).abs());
        }
    }
    let elapsed = t.elapsed();
    outcome(
        worst < 1e-12 && within(Duration::from_secs(1), elapsed),
        format!("max residual {worst:.2e}, {elapsed:.2?}"),
    )
}

fn ac3_exact_code() -> Outcome {
    let t = Instant::now();
    let mut worst = 0.0f64;
    for kind in [NoiseKind::BitFlip, NoiseKind::PhaseFlip] {
        for p in [0.4, 0.8] {
            let pl = pipeline(kind, p);
            let (a, b) = exact_code_params(kind, pl.layout(), 2).unwrap();
            let fid = pl.evaluate(&a, &b, &CostHamiltonian::fid(3)).unwrap();
            let wass = pl.cost_value(&a, &b, &CostHamiltonian::wass(3)).unwrap();
            worst = worst
                .max((fid.fidelity - 1.0).abs())
                .max(fid.cost.abs())
                .max(wass.abs());
        }
    }
    let elapsed = t.elapsed();
    outcome(
        worst < 1e-9 && within(Duration::from_secs(1), elapsed),
        format!("max deviation from F=1, C=0: {worst:.2e}, {elapsed:.2?}"),
    )
}

fn ac4_gradients() -> Outcome {
    let t = Instant::now();
    let step = 1e-5;
    let pl = pipeline(NoiseKind::PhaseFlip, 0.8);
    let mut worst = 0.0f64;
    let mut counts_ok = true;
    for kind in [CostKind::Fid, CostKind::Wass] {
        let h = CostHamiltonian::new(kind, 3);
        let obj = Objective::new(&pl, &h);
        for point in 0..100 {
            let (a, b) = random_angles(&pl, 10_000 + point);
            let f = |x: &[f64], y: &[f64]| pl.cost_value(x, y, &h).unwrap();
            for j in 0..a.len() {
                obj.reset_evaluations();
                let g = obj.grad_alpha(&a, &b, j).unwrap();
                counts_ok &= obj.evaluations() == 4;
                let (mut up, mut down) = (a.clone(), a.clone());
                up[j] += step;
                down[j] -= step;
                worst = worst.max((g - (f(&up, &b) - f(&down, &b)) / (2.0 * step)).abs());
            }
            for j in 0..b.len() {
                obj.reset_evaluations();
                let g = obj.grad_beta(&a, &b, j).unwrap();
                counts_ok &= obj.evaluations() == 2;
                let (mut up, mut down) = (b.clone(), b.clone());
                up[j] += step;
                down[j] -= step;
                worst = worst.max((g - (f(&a, &up) - f(&a, &down)) / (2.0 * step)).abs());
            }
        }
    }
    let elapsed = t.elapsed();
    outcome(
        worst < 1e-6 && counts_ok && within(Duration::from_secs(60), elapsed),
        format!("max |shift - fd| {worst:.2e}, counters 2/4 {counts_ok}, {elapsed:.2?}"),
    )
}

fn separation_config(master_seed: u64) -> ExperimentConfig {
    ExperimentConfig {
        num_restarts: 200,
        threshold_mode: ThresholdMode::Custom(0.822),
        master_seed,
        ..Default::default()
    }
}

fn ac5_separation() -> Outcome {
    let t = Instant::now();
    let mut details = Vec::new();
    let mut pass = false;
    for master_seed in [0, 1_000_000] {
        let cfg = separation_config(master_seed);
        let fid = run_batch(&cfg, CostKind::Fid).unwrap();
        let wass = run_batch(&cfg, CostKind::Wass).unwrap();
        let (rf, rw) = (fid.success_rate, wass.success_rate);
        details.push(format!(
            "seed {master_seed}: fid {:.1}% (median F {:.5}), wass {:.1}% (median F {:.5})",
            100.0 * rf,
            fid.median_fidelity,
            100.0 * rw,
            wass.median_fidelity
        ));
        if rw >= 3.0 * rf && rw >= 0.15 && rf <= 0.15 {
            pass = true;
            break;
        }
    }
    let elapsed = t.elapsed();
    outcome(
        pass && within(Duration::from_secs(7200), elapsed),
        format!("{}; {elapsed:.0?}", details.join("; ")),
    )
}

fn ac6_two_stage() -> Outcome {
    let t = Instant::now();
    let cfg = ExperimentConfig {
        num_restarts: 100,
        master_seed: 7,
        ..Default::default()
    };
    let fw = run_two_stage(&cfg, CostKind::Fid, CostKind::Wass).unwrap();
    let wf = run_two_stage(&cfg, CostKind::Wass, CostKind::Fid).unwrap();
    let elapsed = t.elapsed();
    let pass = wf.max_improvement < 1e-3
        && fw.median_improvement > 0.05
        && within(Duration::from_secs(7200), elapsed);
    outcome(
        pass,
        format!(
            "wass->fid max {:.2e}; fid->wass median {:.2e} (max {:.2e}, {} negative); {elapsed:.0?}",
            wf.max_improvement, fw.median_improvement, fw.max_improvement, fw.negative_runs
        ),
    )
}

fn ac7_determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("exp.toml");
    fs::write(
        &config,
        "[noise]\nkind = \"phase_flip\"\np = 0.8\n[opt]\nmax_iters = 15\n\
         [experiment]\nnum_restarts = 6\nmaster_seed = 12345\n",
    )
    .unwrap();
    let mut outputs = Vec::new();
    for name in ["a", "b"] {
        let out_dir = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_vqec"))
            .args(["run", "--config"])
            .arg(&config)
            .arg("--output")
            .arg(&out_dir)
            .output()
            .unwrap()
            .status;
        assert!(status.success());
        outputs.push(fs::read(out_dir.join("runs.csv")).unwrap());
    }
    let pass = !outputs[0].is_empty() && outputs[0] == outputs[1];
    outcome(pass, format!("runs.csv {} bytes, identical {}", outputs[0].len(), outputs[0] == outputs[1]))
}

fn ac8_spectra() -> Outcome {
    let mut pass = true;
    for n in 1..=5 {
        let fid = CostHamiltonian::fid(n).spectrum();
        pass &= fid == vec![(0.0, 1), (1.0, (1usize << n) - 1)];
        let wass = CostHamiltonian::wass(n).spectrum();
        pass &= wass.len() == n + 1;
        let mut binom = 1usize;
        for (j, &(e, m)) in wass.iter().enumerate() {
            pass &= e == j as f64 && m == binom;
            binom = binom * (n - j) / (j + 1);
        }
        for h in [CostHamiltonian::fid(n), CostHamiltonian::wass(n)] {
            pass &= h.diagonal[0] == 0.0 && h.diagonal.iter().filter(|&&d| d == 0.0).count() == 1;
        }
    }
    outcome(pass, "n = 1..5: fid {1 x 0, 2^n-1 x 1}, wass C(n,j) x j, unique zero at |0..0>".into())
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("AC1", "baseline reproduction", ac1_baseline),
        ("AC2", "baseline identity", ac2_baseline_identity),
        ("AC3", "exact-code benchmark", ac3_exact_code),
        ("AC4", "gradient correctness", ac4_gradients),
        ("AC5", "cost-function separation", ac5_separation),
        ("AC6", "two-stage asymmetry", ac6_two_stage),
        ("AC7", "determinism", ac7_determinism),
        ("AC8", "structural spectra", ac8_spectra),
    ];
    let mut failed = 0;
    for (id, name, run) in criteria {
        let o = run();
        if !o.pass {
            failed += 1;
        }
        println!("{id} {} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
