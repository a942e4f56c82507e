use rand::Rng;
use rand_distr::{Distribution, Exp1, Gamma};

use crate::policy::{argmax_random_tie, Policy};
use crate::rng::SimRng;
use crate::{Error, Result};

/// Observations of one arm, stored so that a Dirichlet-weighted mean can be
/// drawn cheaply: rewards equal to 0 or to the support bound are only counted.
///
/// The Dirichlet(1, ..., 1) weights are normalised Exp(1) variables and a sum
/// of `c` of them is Gamma(c, 1), so each group of equal rewards costs a
/// single Gamma draw and the index keeps its exact law.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct NpTsArm {
    zeros: usize,
    at_bound: usize,
    interior: Vec<f64>,
}

impl NpTsArm {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_rewards(rewards: &[f64], bound: f64) -> Result<Self> {
        let mut arm = Self::new();
        for &r in rewards {
            arm.push(r, bound)?;
        }
        Ok(arm)
    }

    pub fn push(&mut self, reward: f64, bound: f64) -> Result<()> {
        if reward > bound || reward.is_nan() {
            return Err(Error::RewardOutOfRange {
                reward,
                lo: f64::NEG_INFINITY,
                hi: bound,
            });
        }
        if reward == 0.0 {
            self.zeros += 1;
        } else if reward == bound {
            self.at_bound += 1;
        } else {
            self.interior.push(reward);
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.zeros + self.at_bound + self.interior.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn gamma_sum<R: Rng + ?Sized>(count: usize, rng: &mut R) -> f64 {
    match count {
        0 => 0.0,
        1 => Exp1.sample(rng),
        c => Gamma::new(c as f64, 1.0).expect("positive shape").sample(rng),
    }
}

/// `sum_i w_i y_i + w_{s+1} B` with `w ~ Dirichlet(1, ..., 1)` over the `s`
/// observations and the bound `B`.
pub fn npts_index<R: Rng + ?Sized>(arm: &NpTsArm, bound: f64, rng: &mut R) -> f64 {
    let zero_weight = gamma_sum(arm.zeros, rng);
    let bound_weight = gamma_sum(arm.at_bound + 1, rng);
    let mut weight = zero_weight + bound_weight;
    let mut weighted = bound_weight * bound;
    for &y in &arm.interior {
        let e: f64 = Exp1.sample(rng);
        weight += e;
        weighted += e * y;
    }
    weighted / weight
}

pub fn npts_select<R: Rng + ?Sized>(arms: &[NpTsArm], bound: f64, rng: &mut R) -> usize {
    let indices: Vec<f64> = arms.iter().map(|a| npts_index(a, bound, rng)).collect();
    argmax_random_tie(&indices, rng)
}

/// Non-Parametric Thompson Sampling for rewards bounded above by `bound`.
#[derive(Debug, Clone)]
pub struct NpTs {
    bound: f64,
    arms: Vec<NpTsArm>,
}

impl NpTs {
    pub fn new(bound: f64) -> Result<Self> {
        if !bound.is_finite() {
            return Err(Error::InvalidArgument("NP-TS needs a finite upper bound".into()));
        }
        Ok(Self { bound, arms: Vec::new() })
    }
}

impl Policy for NpTs {
    fn label(&self) -> String {
        "NP-TS".into()
    }

    fn reset(&mut self, arms: usize) {
        self.arms = vec![NpTsArm::new(); arms];
    }

    fn next_batch(&mut self, rng: &mut SimRng) -> Vec<usize> {
        let arm = self
            .arms
            .iter()
            .position(NpTsArm::is_empty)
            .unwrap_or_else(|| npts_select(&self.arms, self.bound, rng));
        vec![arm]
    }

    fn observe(&mut self, arm: usize, reward: f64, _rng: &mut SimRng) -> Result<()> {
        self.arms[arm].push(reward, self.bound)
    }
}
