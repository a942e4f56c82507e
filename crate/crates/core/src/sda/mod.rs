//! The round-based SP-SDA engine and the regret simulator.

mod engine;
mod history;
mod runner;

pub use engine::{elect_leader, run_duel, sda_round, ssmc_round_subsets, RoundRecord, RoundState, SdaConfig, SdaEngine};
pub use history::History;
pub use runner::{run_policy, RegretTrace, RunOutcome};
