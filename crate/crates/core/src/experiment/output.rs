use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use super::batch::{BatchSummary, Histogram, TwoStageSummary};
use super::config::ExperimentConfig;
use crate::error::Result;

#[derive(Serialize)]
struct BatchReport<'a> {
    config: &'a ExperimentConfig,
    batches: &'a [BatchSummary],
}

#[derive(Serialize)]
struct TwoStageReport<'a> {
    config: &'a ExperimentConfig,
    #[serde(flatten)]
    summary: &'a TwoStageSummary,
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

fn write_histograms<'a>(
    path: &Path,
    rows: impl IntoIterator<Item = (&'a str, &'a Histogram)>,
) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["cost_kind", "bin_lo", "bin_hi", "count"])?;
    for (kind, h) in rows {
        for (i, c) in h.counts.iter().enumerate() {
            w.serialize((kind, h.edges[i], h.edges[i + 1], c))?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Writes `summary.json`, `runs.csv`, `runs.jsonl`, `hist_fidelity.csv` and
/// `hist_iterations.csv` into `dir`.
pub fn write_batch_outputs(
    dir: &Path,
    cfg: &ExperimentConfig,
    batches: &[BatchSummary],
) -> Result<()> {
    fs::create_dir_all(dir)?;
    write_json(&dir.join("summary.json"), &BatchReport { config: cfg, batches })?;

    let mut runs = csv::Writer::from_path(dir.join("runs.csv"))?;
    runs.write_record([
        "seed",
        "cost_kind",
        "iterations",
        "converged",
        "final_fidelity",
        "final_cost",
    ])?;
    let mut lines = BufWriter::new(File::create(dir.join("runs.jsonl"))?);
    for b in batches {
        for r in &b.runs {
            runs.serialize((
                r.seed,
                r.cost_kind.name(),
                r.iterations,
                r.converged,
                r.final_fidelity,
                r.final_cost,
            ))?;
            serde_json::to_writer(&mut lines, r)?;
            lines.write_all(b"\n")?;
        }
    }
    runs.flush()?;
    lines.flush()?;

    write_histograms(
        &dir.join("hist_fidelity.csv"),
        batches.iter().map(|b| (b.cost_kind.name(), &b.fidelity_histogram)),
    )?;
    write_histograms(
        &dir.join("hist_iterations.csv"),
        batches.iter().map(|b| (b.cost_kind.name(), &b.iteration_histogram)),
    )?;
    Ok(())
}

/// Writes `two_stage.json` and `two_stage.csv` into `dir`.
pub fn write_two_stage_outputs(
    dir: &Path,
    cfg: &ExperimentConfig,
    summary: &TwoStageSummary,
) -> Result<()> {
    fs::create_dir_all(dir)?;
    write_json(&dir.join("two_stage.json"), &TwoStageReport { config: cfg, summary })?;
    let mut w = csv::Writer::from_path(dir.join("two_stage.csv"))?;
    for r in &summary.records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
