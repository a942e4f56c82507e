//! The agent interface shared by the SDA engine and the baselines.

use rand::Rng;

use crate::arms::binarize;
use crate::rng::SimRng;
use crate::Result;

/// A sequential bandit agent.
///
/// Each call to [`Policy::next_batch`] opens a decision epoch and returns the
/// distinct arms to pull (one arm for index policies, up to `K` for a round of
/// SDA). The driver calls [`Policy::observe`] exactly once per pulled arm; it
/// may drop arms from the batch when the budget runs out.
pub trait Policy: Send {
    fn label(&self) -> String;

    /// Forgets all observations and prepares for `arms` arms.
    fn reset(&mut self, arms: usize);

    fn next_batch(&mut self, rng: &mut SimRng) -> Vec<usize>;

    fn observe(&mut self, arm: usize, reward: f64, rng: &mut SimRng) -> Result<()>;
}

impl<P: Policy + ?Sized> Policy for Box<P> {
    fn label(&self) -> String {
        (**self).label()
    }

    fn reset(&mut self, arms: usize) {
        (**self).reset(arms)
    }

    fn next_batch(&mut self, rng: &mut SimRng) -> Vec<usize> {
        (**self).next_batch(rng)
    }

    fn observe(&mut self, arm: usize, reward: f64, rng: &mut SimRng) -> Result<()> {
        (**self).observe(arm, reward, rng)
    }
}

/// Feeds Bernoulli(reward) pseudo-rewards to the wrapped policy instead of
/// the `[0, 1]` rewards themselves.
#[derive(Debug, Clone)]
pub struct Binarized<P> {
    inner: P,
}

impl<P: Policy> Binarized<P> {
    pub fn new(inner: P) -> Self {
        Self { inner }
    }

    pub fn inner(&self) -> &P {
        &self.inner
    }
}

impl<P: Policy> Policy for Binarized<P> {
    fn label(&self) -> String {
        format!("{}+bin", self.inner.label())
    }

    fn reset(&mut self, arms: usize) {
        self.inner.reset(arms)
    }

    fn next_batch(&mut self, rng: &mut SimRng) -> Vec<usize> {
        self.inner.next_batch(rng)
    }

    fn observe(&mut self, arm: usize, reward: f64, rng: &mut SimRng) -> Result<()> {
        let bit = binarize(reward, rng)?;
        self.inner.observe(arm, bit, rng)
    }
}

/// Index of the largest value, ties broken uniformly at random.
pub(crate) fn argmax_random_tie<R: Rng + ?Sized>(values: &[f64], rng: &mut R) -> usize {
    let mut best = f64::NEG_INFINITY;
    let mut chosen = 0;
    let mut ties = 0u32;
    for (i, &v) in values.iter().enumerate() {
        if v > best {
            best = v;
            chosen = i;
            ties = 1;
        } else if v == best {
            ties += 1;
            if rng.random_range(0..ties) == 0 {
                chosen = i;
            }
        }
    }
    chosen
}
