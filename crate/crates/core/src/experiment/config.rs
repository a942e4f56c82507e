use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::algorithm::AlgorithmSpec;
use crate::arms::{BanditInstance, Family};
use crate::{Error, Result};

pub const DEFAULT_CHECKPOINTS: [usize; 5] = [100, 1000, 10_000, 15_000, 20_000];

/// Law of the arm means in a random-instance campaign.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Prior {
    /// `uniform[lo,hi]`
    Uniform { lo: f64, hi: f64 },
    /// `normal(mean,sd)`
    Normal { mean: f64, sd: f64 },
    /// `fixed`: every instance uses the configured `means`.
    Fixed,
}

impl Prior {
    pub fn draw<R: Rng + ?Sized>(&self, arms: usize, fixed: &[f64], rng: &mut R) -> Vec<f64> {
        match *self {
            Prior::Uniform { lo, hi } => (0..arms).map(|_| rng.random_range(lo..hi)).collect(),
            Prior::Normal { mean, sd } => {
                let law = Normal::new(mean, sd).expect("validated prior");
                (0..arms).map(|_| law.sample(rng)).collect()
            }
            Prior::Fixed => fixed.to_vec(),
        }
    }

    /// Whether every mean the prior can produce is valid for `family`.
    fn fits(&self, family: Family) -> bool {
        match *self {
            Prior::Fixed => true,
            Prior::Uniform { lo, hi } => family.check_mean(lo).is_ok() && family.check_mean(hi).is_ok(),
            Prior::Normal { .. } => matches!(family, Family::Gaussian | Family::TruncatedGaussian),
        }
    }
}

impl fmt::Display for Prior {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Prior::Uniform { lo, hi } => write!(f, "uniform[{lo},{hi}]"),
            Prior::Normal { mean, sd } => write!(f, "normal({mean},{sd})"),
            Prior::Fixed => write!(f, "fixed"),
        }
    }
}

impl FromStr for Prior {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_lowercase();
        let bad = || Error::config("prior", format!("cannot parse `{s}`; expected uniform[a,b], normal(m,s) or fixed"));
        let pair = |body: &str| -> Result<(f64, f64)> {
            let (x, y) = body.split_once(',').ok_or_else(bad)?;
            Ok((x.parse().map_err(|_| bad())?, y.parse().map_err(|_| bad())?))
        };
        if s == "fixed" {
            return Ok(Prior::Fixed);
        }
        if let Some(body) = s.strip_prefix("uniform[").and_then(|r| r.strip_suffix(']')) {
            let (lo, hi) = pair(body)?;
            if !(lo < hi && lo.is_finite() && hi.is_finite()) {
                return Err(Error::config("prior", "uniform prior needs finite lo < hi"));
            }
            return Ok(Prior::Uniform { lo, hi });
        }
        if let Some(body) = s.strip_prefix("normal(").and_then(|r| r.strip_suffix(')')) {
            let (mean, sd) = pair(body)?;
            if !(sd > 0.0 && sd.is_finite() && mean.is_finite()) {
                return Err(Error::config("prior", "normal prior needs a finite mean and sd > 0"));
            }
            return Ok(Prior::Normal { mean, sd });
        }
        Err(bad())
    }
}

impl TryFrom<String> for Prior {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Prior> for String {
    fn from(p: Prior) -> String {
        p.to_string()
    }
}

fn default_sigma() -> f64 {
    1.0
}

fn default_runs() -> usize {
    1000
}

/// A campaign description, read from TOML.
///
/// ```toml
/// family = "bernoulli"
/// means = [0.8, 0.9]
/// horizon = 20000
/// runs = 1000
/// base_seed = 7
///
/// [[algorithms]]
/// name = "rb-sda"
///
/// [[algorithms]]
/// name = "phe"
/// a = 1.1
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub family: Family,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub means: Vec<f64>,
    /// Random-instance campaigns only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prior: Option<Prior>,
    /// Number of arms drawn from the prior; defaults to `means.len()`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arms: Option<usize>,
    #[serde(default = "default_sigma")]
    pub sigma: f64,
    pub horizon: usize,
    /// Runs per algorithm, or random instances in a Bayesian campaign.
    #[serde(default = "default_runs")]
    pub runs: usize,
    pub algorithms: Vec<AlgorithmSpec>,
    /// Defaults to the entries of [`DEFAULT_CHECKPOINTS`] below the horizon,
    /// followed by the horizon.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub checkpoints: Option<Vec<usize>>,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_path: Option<PathBuf>,
    /// Worker threads; 0 uses every core.
    #[serde(default)]
    pub threads: usize,
}

impl ExperimentConfig {
    pub fn new(family: Family, means: Vec<f64>, horizon: usize, runs: usize, algorithms: Vec<AlgorithmSpec>) -> Self {
        Self {
            family,
            means,
            prior: None,
            arms: None,
            sigma: 1.0,
            horizon,
            runs,
            algorithms,
            checkpoints: None,
            base_seed: 0,
            output_path: None,
            threads: 0,
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| {
            let field = e.span().map(|s| locate_key(text, s.start)).unwrap_or_else(|| "config".into());
            Error::config(field, e.message().to_string())
        })
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serialises")
    }

    pub fn checkpoints(&self) -> Vec<usize> {
        match &self.checkpoints {
            Some(c) => c.clone(),
            None => {
                let mut c: Vec<usize> = DEFAULT_CHECKPOINTS.iter().copied().filter(|&t| t < self.horizon).collect();
                c.push(self.horizon);
                c
            }
        }
    }

    pub fn arm_count(&self) -> usize {
        self.arms.unwrap_or(self.means.len())
    }

    pub fn instance(&self) -> Result<BanditInstance> {
        BanditInstance::from_means(self.family, &self.means, self.sigma).map_err(|e| Error::config("means", e.to_string()))
    }

    /// Checks everything shared by both campaign kinds, then the fixed
    /// instance (`bayesian = false`) or the prior (`bayesian = true`).
    pub fn validate(&self, bayesian: bool) -> Result<()> {
        if self.algorithms.is_empty() {
            return Err(Error::config("algorithms", "at least one algorithm is required"));
        }
        if self.runs == 0 {
            return Err(Error::config("runs", "must be at least 1"));
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(Error::config("sigma", "must be positive and finite"));
        }
        let k = self.arm_count();
        if k < 2 {
            let field = if bayesian { "arms" } else { "means" };
            return Err(Error::config(field, format!("need at least two arms, got {k}")));
        }
        if self.horizon < k {
            return Err(Error::config("horizon", format!("horizon {} is below the number of arms {k}", self.horizon)));
        }
        let checkpoints = self.checkpoints();
        if checkpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::config("checkpoints", "must be strictly increasing"));
        }
        if checkpoints.last().is_some_and(|&c| c > self.horizon) {
            return Err(Error::config("checkpoints", "last checkpoint exceeds the horizon"));
        }
        if bayesian {
            let prior = self.prior.ok_or_else(|| Error::config("prior", "a random-instance campaign needs a prior"))?;
            if prior == Prior::Fixed {
                self.instance()?;
            } else if !prior.fits(self.family) {
                return Err(Error::config("prior", format!("{prior} can produce means invalid for {}", self.family.name())));
            }
        } else {
            if self.prior.is_some() {
                return Err(Error::config("prior", "only random-instance campaigns take a prior"));
            }
            self.instance()?;
        }
        let mut labels = Vec::new();
        for (i, spec) in self.algorithms.iter().enumerate() {
            let policy = spec
                .build(self.family, self.sigma)
                .map_err(|e| Error::config(format!("algorithms[{i}]"), e.to_string()))?;
            let label = policy.label();
            if labels.contains(&label) {
                return Err(Error::config(format!("algorithms[{i}]"), format!("duplicate algorithm {label}")));
            }
            labels.push(label);
        }
        Ok(())
    }
}

/// Best-effort name of the key on the line containing byte `offset`.
fn locate_key(text: &str, offset: usize) -> String {
    let offset = offset.min(text.len());
    let start = text[..offset].rfind('\n').map_or(0, |i| i + 1);
    let line = text[start..].lines().next().unwrap_or("");
    line.split_once('=')
        .map(|(k, _)| k.trim().to_string())
        .filter(|k| !k.is_empty())
        .unwrap_or_else(|| "config".into())
}
