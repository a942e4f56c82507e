//! Comparison policies: Thompson Sampling, IMED, BESA, PHE, ReBoot and
//! Non-Parametric Thompson Sampling. All of them pull one arm per decision.

mod besa;
mod imed;
mod npts;
mod phe;
mod reboot;
mod ts;

pub use besa::{besa_select, Besa};
pub use imed::{imed_select, Imed};
pub use npts::{npts_index, npts_select, NpTs, NpTsArm};
pub use phe::{phe_index, phe_select, Phe};
pub use reboot::{reboot_index, reboot_select, ReBoot};
pub use ts::{ts_select, ThompsonSampling, TsPrior};

/// Pull count and reward sum of one arm.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ArmStats {
    pub pulls: usize,
    pub sum: f64,
}

impl ArmStats {
    pub fn new(pulls: usize, sum: f64) -> Self {
        Self { pulls, sum }
    }

    pub fn mean(&self) -> f64 {
        self.sum / self.pulls as f64
    }

    pub fn push(&mut self, reward: f64) {
        self.pulls += 1;
        self.sum += reward;
    }
}

/// Lowest-indexed arm that was never pulled.
pub(crate) fn first_unpulled(pulls: impl IntoIterator<Item = usize>) -> Option<usize> {
    pulls.into_iter().position(|n| n == 0)
}
