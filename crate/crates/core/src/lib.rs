//! Sub-sampling duelling algorithms (SDA) for stochastic multi-armed bandits.
//!
//! The crate bundles
//! - reward laws and their divergences ([`arms`]),
//! - the sub-sampling rules RB, WR, LB, LDS and the SSMC block rule ([`samplers`]),
//! - the round-based SDA engine and the regret simulator ([`sda`]),
//! - the comparison policies TS, IMED, BESA, PHE, ReBoot and NP-TS ([`baselines`]),
//! - numerical oracles for the balance and diversity quantities ([`analysis`]),
//! - seeded Monte Carlo campaigns with CSV/JSON output ([`experiment`]).
//!
//! Arms are indexed from 0 in every public API. Sub-sample positions inside a
//! history are 1-based, so a subset of a history of length `m` lives in `1..=m`.

pub mod analysis;
pub mod arms;
pub mod baselines;
mod error;
pub mod experiment;
pub mod policy;
pub mod quad;
pub mod rng;
pub mod samplers;
pub mod sda;

pub use arms::{ArmDistribution, BanditInstance, Family};
pub use error::{Error, Result};
pub use policy::Policy;
pub use rng::SimRng;
pub use samplers::{IndexSubset, SamplerKind};
pub use sda::{History, RegretTrace, SdaConfig, SdaEngine};
