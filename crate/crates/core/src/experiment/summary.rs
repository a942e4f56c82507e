use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use crate::sda::RegretTrace;

/// Empirical quantiles, linearly interpolated between order statistics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quantiles {
    pub q20: f64,
    pub q50: f64,
    pub q80: f64,
    pub q95: f64,
    pub q99: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckpointStats {
    pub t: usize,
    pub mean: f64,
    /// Population standard deviation over runs.
    pub std: f64,
    pub quantiles: Quantiles,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmSummary {
    pub algorithm: String,
    pub runs: usize,
    pub checkpoints: Vec<CheckpointStats>,
}

impl AlgorithmSummary {
    pub fn at(&self, t: usize) -> Option<&CheckpointStats> {
        self.checkpoints.iter().find(|c| c.t == t)
    }

    pub fn final_stats(&self) -> Option<&CheckpointStats> {
        self.checkpoints.last()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub version: String,
    pub base_seed: u64,
    /// Lai–Robbins (or Burnetas–Katehakis) constant of the fixed instance.
    pub lower_bound_constant: Option<f64>,
    pub config: ExperimentConfig,
    pub algorithms: Vec<AlgorithmSummary>,
}

impl Summary {
    pub fn algorithm(&self, label: &str) -> Option<&AlgorithmSummary> {
        self.algorithms.iter().find(|a| a.algorithm == label)
    }
}

fn quantile(sorted: &[f64], p: f64) -> f64 {
    let pos = p * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

/// Per-checkpoint statistics of a set of traces sharing the same checkpoints.
pub fn summarize(algorithm: &str, traces: &[RegretTrace]) -> AlgorithmSummary {
    let grid: Vec<usize> = traces.first().map(|tr| tr.points.iter().map(|p| p.0).collect()).unwrap_or_default();
    let checkpoints = grid
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            let mut values: Vec<f64> = traces.iter().map(|tr| tr.points[i].1).collect();
            let n = values.len() as f64;
            let mean = values.iter().sum::<f64>() / n;
            let std = (values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n).sqrt();
            values.sort_by(f64::total_cmp);
            CheckpointStats {
                t,
                mean,
                std,
                quantiles: Quantiles {
                    q20: quantile(&values, 0.2),
                    q50: quantile(&values, 0.5),
                    q80: quantile(&values, 0.8),
                    q95: quantile(&values, 0.95),
                    q99: quantile(&values, 0.99),
                },
            }
        })
        .collect();
    AlgorithmSummary {
        algorithm: algorithm.to_string(),
        runs: traces.len(),
        checkpoints,
    }
}
