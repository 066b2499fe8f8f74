//! Batches of restarts, the cost-switching experiment, and their file outputs.

mod batch;
mod config;
mod output;
mod verify;

pub use batch::{
    median, report_baselines, run_batch, run_batch_from, run_seed, run_two_stage, splitmix64,
    threshold_value, Baselines, BatchSummary, Histogram, TwoStageRecord, TwoStageSummary,
};
pub use config::{ExperimentConfig, FileConfig, ThresholdMode};
pub use output::{write_batch_outputs, write_two_stage_outputs};
pub use verify::{check_gradients, check_reference_code, GradientCheck, ReferenceCheck};
