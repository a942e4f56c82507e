use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::History;
use crate::policy::Policy;
use crate::rng::SimRng;
use crate::samplers::{ssmc_select, IndexSubset, SamplerKind, SsmcCache};
use crate::{Error, Result};

/// Sampler plus the two optional behaviours of an SDA engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SdaConfig {
    pub sampler: SamplerKind,
    /// Adds every arm with `N_k(r) < sqrt(ln r)` to the next round.
    pub forced_exploration: bool,
    /// Stores Bernoulli(reward) pseudo-rewards instead of the rewards.
    pub binarized: bool,
}

impl SdaConfig {
    /// Defaults: forced exploration only for SSMC, no binarization.
    pub fn new(sampler: SamplerKind) -> Self {
        Self {
            sampler,
            forced_exploration: sampler == SamplerKind::Ssmc,
            binarized: false,
        }
    }

    pub fn with_forced_exploration(mut self, on: bool) -> Self {
        self.forced_exploration = on;
        self
    }

    pub fn with_binarized(mut self, on: bool) -> Self {
        self.binarized = on;
        self
    }

    pub fn label(&self) -> String {
        let mut s = if self.sampler == SamplerKind::Ssmc {
            "SSMC".to_string()
        } else {
            format!("{}-SDA", self.sampler.name())
        };
        if self.forced_exploration != (self.sampler == SamplerKind::Ssmc) {
            s.push_str(if self.forced_exploration { "+fe" } else { "-fe" });
        }
        if self.binarized {
            s.push_str("+bin");
        }
        s
    }
}

/// State of the engine after `r` completed rounds.
#[derive(Debug, Clone)]
pub struct RoundState {
    /// Completed rounds.
    pub r: u64,
    pub histories: Vec<History>,
    /// Leader of the last round, if any round past the first was played.
    pub leader: Option<usize>,
    ssmc: Vec<SsmcCache>,
}

impl RoundState {
    pub fn new(arms: usize) -> Self {
        Self {
            r: 0,
            histories: vec![History::new(); arms],
            leader: None,
            ssmc: vec![SsmcCache::new(); arms],
        }
    }

    pub fn from_histories(r: u64, histories: Vec<History>, leader: Option<usize>) -> Self {
        let ssmc = vec![SsmcCache::new(); histories.len()];
        Self {
            r,
            histories,
            leader,
            ssmc,
        }
    }

    pub fn arms(&self) -> usize {
        self.histories.len()
    }

    pub fn count(&self, arm: usize) -> usize {
        self.histories[arm].len()
    }

    pub fn counts(&self) -> Vec<usize> {
        self.histories.iter().map(History::len).collect()
    }

    /// Total number of pulls so far.
    pub fn t(&self) -> usize {
        self.histories.iter().map(History::len).sum()
    }
}

/// What happened while building one round's pull set.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundRecord {
    /// Index of the round being built (`r + 1`).
    pub round: u64,
    pub leader: usize,
    /// Pull counts `N_k(r)` at decision time.
    pub counts: Vec<usize>,
    pub duel_winners: Vec<usize>,
    pub explored: Vec<usize>,
    /// The pull set, sorted.
    pub pulls: Vec<usize>,
}

/// The arm with the most pulls; count ties go to the largest empirical mean,
/// then to the previous leader, then uniformly at random.
pub fn elect_leader<R: Rng + ?Sized>(state: &RoundState, rng: &mut R) -> usize {
    let max_count = state.histories.iter().map(History::len).max().unwrap_or(0);
    let mut best_mean = f64::NEG_INFINITY;
    let mut tied: Vec<usize> = Vec::new();
    for (k, h) in state.histories.iter().enumerate() {
        if h.len() != max_count {
            continue;
        }
        let m = h.mean();
        if m > best_mean {
            best_mean = m;
            tied.clear();
            tied.push(k);
        } else if m == best_mean {
            tied.push(k);
        }
    }
    match (tied.len(), state.leader) {
        (1, _) => tied[0],
        (_, Some(prev)) if tied.contains(&prev) => prev,
        _ => tied[rng.random_range(0..tied.len())],
    }
}

/// True when the challenger's full mean is at least the leader's mean on
/// `subset`. An equal mean counts as a challenger win: otherwise a challenger
/// stuck on its lowest possible mean (a single zero from a Bernoulli arm)
/// could never be pulled again.
pub fn run_duel(challenger: &History, leader: &History, subset: &IndexSubset) -> Result<bool> {
    if subset.len() != challenger.len() {
        return Err(Error::DuelSizeMismatch {
            subset: subset.len(),
            challenger: challenger.len(),
        });
    }
    if subset.m() > leader.len() {
        return Err(Error::SubsetTooLarge {
            m: leader.len(),
            n: subset.m(),
        });
    }
    Ok(challenger.mean() >= subset.mean_in(leader))
}

fn forced_threshold(r: u64) -> f64 {
    (r as f64).ln().max(0.0).sqrt()
}

/// Builds the pull set of round `r + 1`: elects the leader, runs the `K-1`
/// duels, adds forced-exploration arms and falls back to the leader.
///
/// `state.r` must be at least 1 (every arm pulled once).
pub fn sda_round(state: &mut RoundState, config: &SdaConfig, rng: &mut SimRng) -> Result<RoundRecord> {
    if state.r == 0 || state.histories.iter().any(History::is_empty) {
        return Err(Error::InvalidArgument("the initial round must pull every arm first".into()));
    }
    let leader = elect_leader(state, rng);
    state.leader = Some(leader);
    let round = state.r + 1;
    let counts = state.counts();
    let m = counts[leader];
    let independent = config.sampler.independent();

    let mut in_set = vec![false; state.arms()];
    let mut duel_winners = Vec::new();
    for k in 0..state.arms() {
        let n = counts[k];
        if k == leader || n > m {
            continue;
        }
        let subset = match independent {
            Some(sampler) => sampler.draw(m, n, round, rng)?,
            None => state.ssmc[leader].select(&state.histories[leader], n)?,
        };
        if run_duel(&state.histories[k], &state.histories[leader], &subset)? {
            duel_winners.push(k);
            in_set[k] = true;
        }
    }

    let mut explored = Vec::new();
    if config.forced_exploration {
        let threshold = forced_threshold(state.r);
        for (k, &n) in counts.iter().enumerate() {
            if (n as f64) < threshold {
                explored.push(k);
                in_set[k] = true;
            }
        }
    }

    let mut pulls: Vec<usize> = (0..state.arms()).filter(|&k| in_set[k]).collect();
    if pulls.is_empty() {
        pulls.push(leader);
    }
    Ok(RoundRecord {
        round,
        leader,
        counts,
        duel_winners,
        explored,
        pulls,
    })
}

/// Pure reference version of one SSMC duel set, without caching.
pub fn ssmc_round_subsets(state: &RoundState, leader: usize) -> Result<Vec<Option<IndexSubset>>> {
    let m = state.count(leader);
    (0..state.arms())
        .map(|k| {
            let n = state.count(k);
            if k == leader || n > m {
                Ok(None)
            } else {
                ssmc_select(&state.histories[leader], n).map(Some)
            }
        })
        .collect()
}

/// SP-SDA as a [`Policy`].
#[derive(Debug, Clone)]
pub struct SdaEngine {
    config: SdaConfig,
    state: RoundState,
    keep_log: bool,
    log: Vec<RoundRecord>,
}

impl SdaEngine {
    pub fn new(config: SdaConfig) -> Self {
        Self {
            config,
            state: RoundState::new(0),
            keep_log: false,
            log: Vec::new(),
        }
    }

    /// Keeps a [`RoundRecord`] for every round after the first.
    pub fn with_round_log(mut self) -> Self {
        self.keep_log = true;
        self
    }

    pub fn config(&self) -> &SdaConfig {
        &self.config
    }

    pub fn state(&self) -> &RoundState {
        &self.state
    }

    pub fn round_log(&self) -> &[RoundRecord] {
        &self.log
    }
}

impl Policy for SdaEngine {
    fn label(&self) -> String {
        self.config.label()
    }

    fn reset(&mut self, arms: usize) {
        self.state = RoundState::new(arms);
        self.log.clear();
    }

    fn next_batch(&mut self, rng: &mut SimRng) -> Vec<usize> {
        if self.state.r == 0 {
            self.state.r = 1;
            let mut all: Vec<usize> = (0..self.state.arms()).collect();
            all.shuffle(rng);
            return all;
        }
        let record = sda_round(&mut self.state, &self.config, rng).expect("engine state is consistent");
        self.state.r += 1;
        let pulls = record.pulls.clone();
        if self.keep_log {
            self.log.push(record);
        }
        pulls
    }

    fn observe(&mut self, arm: usize, reward: f64, rng: &mut SimRng) -> Result<()> {
        let value = if self.config.binarized {
            crate::arms::binarize(reward, rng)?
        } else {
            reward
        };
        self.state.histories[arm].push(value);
        Ok(())
    }
}
