use rand::Rng;

use super::first_unpulled;
use crate::policy::{argmax_random_tie, Policy};
use crate::rng::SimRng;
use crate::sda::History;
use crate::Result;

/// ReBoot index: the history plus the pseudo-rewards `mean ± sigma sqrt(s)`
/// is resampled with replacement to size `s + 2` and averaged.
pub fn reboot_index<R: Rng + ?Sized>(history: &History, sigma: f64, rng: &mut R) -> f64 {
    let s = history.len();
    let mean = history.mean();
    let spread = sigma * (s as f64).sqrt();
    let pseudo = [mean + spread, mean - spread];
    let size = s + 2;
    let mut total = 0.0;
    for _ in 0..size {
        let i = rng.random_range(0..size);
        total += if i < s { history.values()[i] } else { pseudo[i - s] };
    }
    total / size as f64
}

pub fn reboot_select<R: Rng + ?Sized>(histories: &[History], sigma: f64, rng: &mut R) -> usize {
    let indices: Vec<f64> = histories.iter().map(|h| reboot_index(h, sigma, rng)).collect();
    argmax_random_tie(&indices, rng)
}

#[derive(Debug, Clone)]
pub struct ReBoot {
    sigma: f64,
    histories: Vec<History>,
}

impl ReBoot {
    pub fn new(sigma: f64) -> Self {
        Self { sigma, histories: Vec::new() }
    }
}

impl Policy for ReBoot {
    fn label(&self) -> String {
        format!("ReBoot(sigma={})", self.sigma)
    }

    fn reset(&mut self, arms: usize) {
        self.histories = vec![History::new(); arms];
    }

    fn next_batch(&mut self, rng: &mut SimRng) -> Vec<usize> {
        let arm = first_unpulled(self.histories.iter().map(History::len))
            .unwrap_or_else(|| reboot_select(&self.histories, self.sigma, rng));
        vec![arm]
    }

    fn observe(&mut self, arm: usize, reward: f64, _rng: &mut SimRng) -> Result<()> {
        self.histories[arm].push(reward);
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    #[test]
    fn single_zero_observation() {
        // Augmented multiset {0, 1.5, -1.5}: the 27 resamples average to 0 and
        // the index takes values in multiples of 0.5 within [-1.5, 1.5].
        let h = History::from_values(&[0.0]);
        let mut rng = stream(1);
        let n = 200_000;
        let mut sum = 0.0;
        for _ in 0..n {
            let v = reboot_index(&h, 1.5, &mut rng);
            assert!((-1.5..=1.5).contains(&v) && ((v * 2.0).round() - v * 2.0).abs() < 1e-12);
            sum += v;
        }
        // Var = 1.5 / 3 = 0.5, so the standard error is ~0.0016.
        assert!((sum / n as f64).abs() < 0.008);
    }

    #[test]
    fn expected_index_is_the_mean() {
        let h = History::from_values(&[0.1, 0.9, 0.4, 0.6]);
        let mut rng = stream(2);
        let n = 200_000;
        let m: f64 = (0..n).map(|_| reboot_index(&h, 1.5, &mut rng)).sum::<f64>() / n as f64;
        assert!((m - 0.5).abs() < 0.01);
    }

    #[test]
    fn symmetric_arms() {
        let h = vec![History::from_values(&[0.3, 0.5]); 2];
        let mut rng = stream(3);
        let wins = (0..10_000).filter(|_| reboot_select(&h, 1.5, &mut rng) == 0).count();
        assert!((wins as f64 / 10_000.0 - 0.5).abs() < 0.02);
    }
}
