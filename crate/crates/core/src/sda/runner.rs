use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::arms::BanditInstance;
use crate::policy::Policy;
use crate::rng::{derive_seed, stream, SimRng};
use crate::{Error, Result};

const ARM_STREAM_TAG: u64 = 0x4152_4d53; // "ARMS"

/// Cumulative pseudo-regret of one run at the requested checkpoints.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegretTrace {
    pub run_index: usize,
    /// `(t, regret after t pulls)`, in increasing `t`.
    pub points: Vec<(usize, f64)>,
}

impl RegretTrace {
    pub fn final_regret(&self) -> Option<f64> {
        self.points.last().map(|p| p.1)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub trace: RegretTrace,
    /// `N_k(T)` per arm.
    pub pull_counts: Vec<usize>,
}

/// Plays `policy` on `instance` for `horizon` pulls.
///
/// Arm `k` draws its rewards from its own stream seeded from
/// `(reward_seed, k)`, so two policies run with the same `reward_seed` see the
/// same reward sequence `Y_{k,1}, Y_{k,2}, ...` for every arm. Within a batch
/// the arms are pulled in a uniformly random order, and a batch that exceeds
/// the remaining budget is cut to a uniformly random subset.
pub fn run_policy<P: Policy + ?Sized>(
    policy: &mut P,
    instance: &BanditInstance,
    horizon: usize,
    checkpoints: &[usize],
    reward_seed: u64,
    rng: &mut SimRng,
) -> Result<RunOutcome> {
    let k = instance.len();
    if horizon < k {
        return Err(Error::HorizonTooShort { horizon, arms: k });
    }
    if checkpoints.windows(2).any(|w| w[0] >= w[1]) || checkpoints.last().is_some_and(|&c| c > horizon) {
        return Err(Error::InvalidArgument("checkpoints must increase and not exceed the horizon".into()));
    }
    let gaps = instance.gaps();
    let arms = instance.arms();
    let mut reward_streams: Vec<SimRng> = (0..k).map(|a| stream(derive_seed(reward_seed, ARM_STREAM_TAG, a as u64))).collect();
    policy.reset(k);

    let mut counts = vec![0usize; k];
    let mut points = Vec::with_capacity(checkpoints.len());
    let mut next_cp = checkpoints.iter().copied().peekable();
    while next_cp.peek() == Some(&0) {
        points.push((0, 0.0));
        next_cp.next();
    }
    let mut t = 0usize;
    while t < horizon {
        let mut batch = policy.next_batch(rng);
        if batch.is_empty() {
            return Err(Error::InvalidArgument(format!("{} returned an empty batch", policy.label())));
        }
        batch.shuffle(rng);
        batch.truncate(horizon - t);
        for arm in batch {
            if arm >= k {
                return Err(Error::InvalidArgument(format!("{} chose arm {arm} of {k}", policy.label())));
            }
            let reward = arms[arm].sample(&mut reward_streams[arm]);
            policy.observe(arm, reward, rng)?;
            counts[arm] += 1;
            t += 1;
            if next_cp.peek() == Some(&t) {
                next_cp.next();
                let regret: f64 = gaps.iter().zip(&counts).map(|(g, &n)| g * n as f64).sum();
                points.push((t, regret));
            }
        }
    }
    Ok(RunOutcome {
        trace: RegretTrace { run_index: 0, points },
        pull_counts: counts,
    })
}
