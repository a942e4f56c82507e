use rand::Rng;
use rand_distr::{Binomial, Distribution};

use super::{first_unpulled, ArmStats};
use crate::policy::{argmax_random_tie, Policy};
use crate::rng::SimRng;
use crate::{Error, Result};

/// Perturbed index of one arm: its history is augmented with `ceil(a s)`
/// fair-coin pseudo-rewards.
pub fn phe_index<R: Rng + ?Sized>(stats: &ArmStats, a: f64, rng: &mut R) -> f64 {
    let s = stats.pulls as f64;
    let pseudo = (a * s).ceil();
    let coins = Binomial::new(pseudo as u64, 0.5).expect("valid binomial").sample(rng) as f64;
    (stats.sum + coins) / (s + pseudo)
}

/// PHE: argmax of the perturbed indices, ties at random.
pub fn phe_select<R: Rng + ?Sized>(stats: &[ArmStats], a: f64, rng: &mut R) -> usize {
    let indices: Vec<f64> = stats.iter().map(|s| phe_index(s, a, rng)).collect();
    argmax_random_tie(&indices, rng)
}

#[derive(Debug, Clone)]
pub struct Phe {
    a: f64,
    stats: Vec<ArmStats>,
}

impl Phe {
    pub fn new(a: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::InvalidArgument(format!("PHE perturbation scale {a} must be positive")));
        }
        Ok(Self { a, stats: Vec::new() })
    }
}

impl Policy for Phe {
    fn label(&self) -> String {
        format!("PHE(a={})", self.a)
    }

    fn reset(&mut self, arms: usize) {
        self.stats = vec![ArmStats::default(); arms];
    }

    fn next_batch(&mut self, rng: &mut SimRng) -> Vec<usize> {
        let arm = first_unpulled(self.stats.iter().map(|s| s.pulls)).unwrap_or_else(|| phe_select(&self.stats, self.a, rng));
        vec![arm]
    }

    fn observe(&mut self, arm: usize, reward: f64, _rng: &mut SimRng) -> Result<()> {
        if !(0.0..=1.0).contains(&reward) {
            return Err(Error::RewardOutOfRange { reward, lo: 0.0, hi: 1.0 });
        }
        self.stats[arm].push(reward);
        Ok(())
    }
}
