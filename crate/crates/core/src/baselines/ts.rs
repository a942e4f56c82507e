use rand::Rng;
use rand_distr::{Beta, Distribution, StandardNormal};

use super::{first_unpulled, ArmStats};
use crate::arms::Family;
use crate::policy::{argmax_random_tie, Policy};
use crate::rng::SimRng;
use crate::{Error, Result};

/// Posterior model used by Thompson Sampling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TsPrior {
    /// Beta(1, 1) prior on Bernoulli means.
    Beta,
    /// Improper flat prior on a Gaussian mean with known `sigma`.
    Gaussian { sigma: f64 },
}

impl TsPrior {
    pub fn for_family(family: Family, sigma: f64) -> Result<Self> {
        match family {
            Family::Bernoulli => Ok(TsPrior::Beta),
            Family::Gaussian => Ok(TsPrior::Gaussian { sigma }),
            other => Err(Error::Unsupported {
                family: other.name(),
                what: "Thompson Sampling prior (binarize [0,1] rewards to use the Beta prior)",
            }),
        }
    }
}

/// One posterior draw per arm, then the arm with the largest draw.
///
/// Gaussian posteriors need every arm pulled at least once.
pub fn ts_select<R: Rng + ?Sized>(stats: &[ArmStats], prior: TsPrior, rng: &mut R) -> usize {
    let draws: Vec<f64> = stats
        .iter()
        .map(|s| match prior {
            TsPrior::Beta => {
                let successes = s.sum;
                let failures = s.pulls as f64 - s.sum;
                Beta::new(1.0 + successes, 1.0 + failures)
                    .expect("positive Beta parameters")
                    .sample(rng)
            }
            TsPrior::Gaussian { sigma } => {
                let z: f64 = StandardNormal.sample(rng);
                s.mean() + sigma / (s.pulls as f64).sqrt() * z
            }
        })
        .collect();
    argmax_random_tie(&draws, rng)
}

#[derive(Debug, Clone)]
pub struct ThompsonSampling {
    prior: TsPrior,
    stats: Vec<ArmStats>,
}

impl ThompsonSampling {
    pub fn new(prior: TsPrior) -> Self {
        Self { prior, stats: Vec::new() }
    }

    pub fn stats(&self) -> &[ArmStats] {
        &self.stats
    }
}

impl Policy for ThompsonSampling {
    fn label(&self) -> String {
        "TS".into()
    }

    fn reset(&mut self, arms: usize) {
        self.stats = vec![ArmStats::default(); arms];
    }

    fn next_batch(&mut self, rng: &mut SimRng) -> Vec<usize> {
        if let TsPrior::Gaussian { .. } = self.prior {
            if let Some(k) = first_unpulled(self.stats.iter().map(|s| s.pulls)) {
                return vec![k];
            }
        }
        vec![ts_select(&self.stats, self.prior, rng)]
    }

    fn observe(&mut self, arm: usize, reward: f64, _rng: &mut SimRng) -> Result<()> {
        if self.prior == TsPrior::Beta && !(0.0..=1.0).contains(&reward) {
            return Err(Error::RewardOutOfRange { reward, lo: 0.0, hi: 1.0 });
        }
        self.stats[arm].push(reward);
        Ok(())
    }
}
