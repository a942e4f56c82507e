use rand::seq::SliceRandom;
use rand::Rng;

use super::first_unpulled;
use crate::policy::Policy;
use crate::rng::SimRng;
use crate::samplers::{wr_sample, SamplerKind};
use crate::sda::{History, SdaConfig, SdaEngine};
use crate::Result;

/// One BESA match: the longer history is sub-sampled without replacement to
/// the length of the shorter one and the larger mean wins. Ties go to the
/// less-pulled arm, then to a fair coin.
fn besa_match<R: Rng + ?Sized>(histories: &[History], a: usize, b: usize, rng: &mut R) -> usize {
    let (ha, hb) = (&histories[a], &histories[b]);
    let n = ha.len().min(hb.len());
    let mut mean = |h: &History| {
        if h.len() == n {
            h.mean()
        } else {
            wr_sample(h.len(), n, rng).expect("n <= len").mean_in(h)
        }
    };
    let (ma, mb) = (mean(ha), mean(hb));
    if ma > mb {
        a
    } else if mb > ma {
        b
    } else if ha.len() != hb.len() {
        if ha.len() < hb.len() {
            a
        } else {
            b
        }
    } else if rng.random_bool(0.5) {
        a
    } else {
        b
    }
}

fn tournament<R: Rng + ?Sized>(histories: &[History], rng: &mut R) -> (usize, usize) {
    let mut bracket: Vec<usize> = (0..histories.len()).collect();
    bracket.shuffle(rng);
    let mut matches = 0;
    while bracket.len() > 1 {
        let mut next = Vec::with_capacity(bracket.len().div_ceil(2));
        for pair in bracket.chunks(2) {
            if let [a, b] = *pair {
                next.push(besa_match(histories, a, b, rng));
                matches += 1;
            } else {
                next.push(pair[0]);
            }
        }
        bracket = next;
    }
    (bracket[0], matches)
}

/// Winner of a single-elimination BESA tournament over a shuffled bracket.
/// Every arm needs at least one observation.
pub fn besa_select<R: Rng + ?Sized>(histories: &[History], rng: &mut R) -> usize {
    tournament(histories, rng).0
}

/// BESA. With two arms it runs the WR-SDA engine itself, since both make the
/// same duel; with more arms it plays the tournament.
#[derive(Debug, Clone)]
pub enum Besa {
    Pair(SdaEngine),
    Tournament(Vec<History>),
}

impl Besa {
    pub fn new() -> Self {
        Besa::Tournament(Vec::new())
    }
}

impl Default for Besa {
    fn default() -> Self {
        Self::new()
    }
}

impl Policy for Besa {
    fn label(&self) -> String {
        "BESA".into()
    }

    fn reset(&mut self, arms: usize) {
        *self = if arms == 2 {
            let mut engine = SdaEngine::new(SdaConfig::new(SamplerKind::Wr));
            engine.reset(arms);
            Besa::Pair(engine)
        } else {
            Besa::Tournament(vec![History::new(); arms])
        };
    }

    fn next_batch(&mut self, rng: &mut SimRng) -> Vec<usize> {
        match self {
            Besa::Pair(engine) => engine.next_batch(rng),
            Besa::Tournament(histories) => {
                let arm = first_unpulled(histories.iter().map(History::len)).unwrap_or_else(|| besa_select(histories, rng));
                vec![arm]
            }
        }
    }

    fn observe(&mut self, arm: usize, reward: f64, rng: &mut SimRng) -> Result<()> {
        match self {
            Besa::Pair(engine) => engine.observe(arm, reward, rng),
            Besa::Tournament(histories) => {
                histories[arm].push(reward);
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    #[test]
    fn equal_lengths_compare_full_means() {
        let h = vec![History::from_values(&[0.2, 0.4]), History::from_values(&[0.5, 0.5])];
        let mut rng = stream(1);
        assert!((0..100).all(|_| besa_select(&h, &mut rng) == 1));
    }

    #[test]
    fn one_against_zeros() {
        let h = vec![History::from_values(&[1.0]), History::from_values(&[0.0, 0.0])];
        let mut rng = stream(2);
        assert!((0..100).all(|_| besa_select(&h, &mut rng) == 0));
    }

    #[test]
    fn tie_goes_to_less_pulled() {
        let h = vec![History::from_values(&[1.0, 1.0, 1.0]), History::from_values(&[1.0])];
        let mut rng = stream(3);
        assert!((0..100).all(|_| besa_select(&h, &mut rng) == 1));
    }

    #[test]
    fn four_arms_play_three_matches() {
        let h: Vec<History> = (0..4).map(|i| History::from_values(&[i as f64, 0.5])).collect();
        let mut rng = stream(4);
        for _ in 0..20 {
            let (winner, matches) = tournament(&h, &mut rng);
            assert_eq!(matches, 3);
            assert_eq!(winner, 3);
        }
        let five: Vec<History> = (0..5).map(|_| History::from_values(&[0.5])).collect();
        assert_eq!(tournament(&five, &mut rng).1, 4);
    }
}
