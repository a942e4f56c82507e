use serde::{Deserialize, Serialize};

use crate::arms::Family;
use crate::baselines::{Besa, Imed, NpTs, Phe, ReBoot, ThompsonSampling, TsPrior};
use crate::policy::{Binarized, Policy};
use crate::samplers::SamplerKind;
use crate::sda::{SdaConfig, SdaEngine};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlgorithmKind {
    RbSda,
    WrSda,
    LbSda,
    LdsSda,
    Ssmc,
    Ts,
    Imed,
    Besa,
    Phe,
    Reboot,
    NpTs,
}

impl AlgorithmKind {
    pub fn sampler(self) -> Option<SamplerKind> {
        match self {
            AlgorithmKind::RbSda => Some(SamplerKind::Rb),
            AlgorithmKind::WrSda => Some(SamplerKind::Wr),
            AlgorithmKind::LbSda => Some(SamplerKind::Lb),
            AlgorithmKind::LdsSda => Some(SamplerKind::Lds),
            AlgorithmKind::Ssmc => Some(SamplerKind::Ssmc),
            _ => None,
        }
    }
}

/// One entry of the `algorithms` list of a campaign.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgorithmSpec {
    pub name: AlgorithmKind,
    /// SDA variants only; defaults to on for SSMC and off otherwise.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub forced_exploration: Option<bool>,
    /// Replace `[0, 1]` rewards by Bernoulli draws before the policy sees them.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub binarized: bool,
    /// PHE perturbation scale (default 1.1).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    /// ReBoot pseudo-reward spread (default 1.5).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    /// NP-TS upper bound of the rewards (default 1 for `[0, 1]` families).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<f64>,
}

impl AlgorithmSpec {
    pub fn new(name: AlgorithmKind) -> Self {
        Self {
            name,
            forced_exploration: None,
            binarized: false,
            a: None,
            sigma: None,
            bound: None,
        }
    }

    pub fn with_forced_exploration(mut self, on: bool) -> Self {
        self.forced_exploration = Some(on);
        self
    }

    pub fn binarized(mut self) -> Self {
        self.binarized = true;
        self
    }

    fn reject_extra(&self, field: &str, present: bool) -> Result<()> {
        if present {
            Err(Error::InvalidArgument(format!("`{field}` does not apply to {:?}", self.name)))
        } else {
            Ok(())
        }
    }

    /// Builds a fresh policy for arms of `family` with noise scale `sigma`.
    pub fn build(&self, family: Family, sigma: f64) -> Result<Box<dyn Policy>> {
        let kind = self.name;
        if kind.sampler().is_none() {
            self.reject_extra("forced_exploration", self.forced_exploration.is_some())?;
        }
        self.reject_extra("a", self.a.is_some() && kind != AlgorithmKind::Phe)?;
        self.reject_extra("sigma", self.sigma.is_some() && kind != AlgorithmKind::Reboot)?;
        self.reject_extra("bound", self.bound.is_some() && kind != AlgorithmKind::NpTs)?;
        if self.binarized && !family.unit_supported() {
            return Err(Error::Unsupported {
                family: family.name(),
                what: "binarization (rewards must lie in [0, 1])",
            });
        }
        let wrap = |p: Box<dyn Policy>| -> Box<dyn Policy> {
            if self.binarized {
                Box::new(Binarized::new(p))
            } else {
                p
            }
        };
        // Binarized rewards are Bernoulli whatever the arm family.
        let seen = if self.binarized { Family::Bernoulli } else { family };
        let policy: Box<dyn Policy> = match kind {
            AlgorithmKind::RbSda | AlgorithmKind::WrSda | AlgorithmKind::LbSda | AlgorithmKind::LdsSda | AlgorithmKind::Ssmc => {
                let mut config = SdaConfig::new(kind.sampler().expect("SDA kind")).with_binarized(self.binarized);
                if let Some(on) = self.forced_exploration {
                    config = config.with_forced_exploration(on);
                }
                return Ok(Box::new(SdaEngine::new(config)));
            }
            AlgorithmKind::Ts => {
                let ts = ThompsonSampling::new(TsPrior::for_family(seen, sigma)?);
                wrap(Box::new(ts))
            }
            AlgorithmKind::Imed => wrap(Box::new(Imed::new(seen, sigma)?)),
            AlgorithmKind::Besa => wrap(Box::<Besa>::default()),
            AlgorithmKind::Phe => {
                if !family.unit_supported() {
                    return Err(Error::Unsupported {
                        family: family.name(),
                        what: "PHE (rewards must lie in [0, 1])",
                    });
                }
                wrap(Box::new(Phe::new(self.a.unwrap_or(1.1))?))
            }
            AlgorithmKind::Reboot => wrap(Box::new(ReBoot::new(self.sigma.unwrap_or(1.5)))),
            AlgorithmKind::NpTs => {
                let bound = match self.bound {
                    Some(b) => b,
                    None if family.unit_supported() => 1.0,
                    None => {
                        return Err(Error::InvalidArgument(format!(
                            "NP-TS needs `bound` for {} rewards",
                            family.name()
                        )))
                    }
                };
                wrap(Box::new(NpTs::new(bound)?))
            }
        };
        Ok(policy)
    }
}
