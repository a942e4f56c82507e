//! Seeded Monte Carlo campaigns: configuration, parallel execution, summary
//! statistics and CSV/JSON output.

mod algorithm;
mod campaign;
mod config;
mod emit;
mod summary;

pub use algorithm::{AlgorithmKind, AlgorithmSpec};
pub use campaign::{
    lower_bound_curve, policy_seed, reward_seed, run_bayesian_experiment, run_experiment, AlgorithmTraces,
    CampaignResult,
};
pub use config::{ExperimentConfig, Prior, DEFAULT_CHECKPOINTS};
pub use emit::{emit, write_rows, write_summary_csv, write_summary_json, write_traces_csv, OutputFormat};
pub use summary::{summarize, AlgorithmSummary, CheckpointStats, Quantiles, Summary};
