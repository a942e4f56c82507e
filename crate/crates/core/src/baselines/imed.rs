use super::{first_unpulled, ArmStats};
use crate::arms::{kl_divergence, Family};
use crate::policy::Policy;
use crate::rng::SimRng;
use crate::{Error, Result};

/// IMED: minimise `N_k kl(mean_k, best mean) + ln N_k`, ties to the lowest index.
pub fn imed_select(stats: &[ArmStats], family: Family, sigma: f64) -> Result<usize> {
    let best = stats.iter().map(ArmStats::mean).fold(f64::NEG_INFINITY, f64::max);
    let mut chosen = 0;
    let mut lowest = f64::INFINITY;
    for (k, s) in stats.iter().enumerate() {
        let n = s.pulls as f64;
        let mean = s.mean();
        let kl = if mean >= best { 0.0 } else { kl_divergence(family, mean, best, sigma)? };
        let index = n * kl + n.ln();
        if index < lowest {
            lowest = index;
            chosen = k;
        }
    }
    Ok(chosen)
}

#[derive(Debug, Clone)]
pub struct Imed {
    family: Family,
    sigma: f64,
    stats: Vec<ArmStats>,
}

impl Imed {
    pub fn new(family: Family, sigma: f64) -> Result<Self> {
        if family == Family::TruncatedGaussian {
            return Err(Error::Unsupported {
                family: family.name(),
                what: "IMED divergence",
            });
        }
        Ok(Self { family, sigma, stats: Vec::new() })
    }
}

impl Policy for Imed {
    fn label(&self) -> String {
        "IMED".into()
    }

    fn reset(&mut self, arms: usize) {
        self.stats = vec![ArmStats::default(); arms];
    }

    fn next_batch(&mut self, _rng: &mut SimRng) -> Vec<usize> {
        let arm = first_unpulled(self.stats.iter().map(|s| s.pulls))
            .unwrap_or_else(|| imed_select(&self.stats, self.family, self.sigma).expect("family checked at construction"));
        vec![arm]
    }

    fn observe(&mut self, arm: usize, reward: f64, _rng: &mut SimRng) -> Result<()> {
        self.stats[arm].push(reward);
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn best_arm_selected_against_clear_loser() {
        let stats = [ArmStats::new(10, 5.0), ArmStats::new(10, 9.0)];
        // I_1 = 10 kl(0.5, 0.9) + ln 10 > I_2 = ln 10
        assert_eq!(imed_select(&stats, Family::Bernoulli, 1.0).unwrap(), 1);
    }

    #[test]
    fn identical_state_ties_to_first() {
        let stats = [ArmStats::new(4, 2.0); 3];
        assert_eq!(imed_select(&stats, Family::Bernoulli, 1.0).unwrap(), 0);
    }

    #[test]
    fn undersampled_suboptimal_arm_is_explored() {
        // I_1 = 1 * kl(0.4, 0.5) + 0 ~ 0.02 < I_2 = ln 1000
        let stats = [ArmStats::new(1, 0.4), ArmStats::new(1000, 500.0)];
        assert_eq!(imed_select(&stats, Family::Gaussian, 1.0).unwrap(), 0);
    }
}
