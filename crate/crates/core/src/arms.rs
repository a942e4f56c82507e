//! Reward laws, divergences, sum-law CDFs and asymptotic lower-bound constants.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use rand::Rng;
use rand_distr::{Distribution, Exp1, Poisson, StandardNormal};
use serde::{Deserialize, Serialize};
use statrs::function::beta::beta_reg;
use statrs::function::gamma::{gamma_lr, gamma_ur};

use crate::quad::integrate;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Bernoulli,
    Gaussian,
    Poisson,
    Exponential,
    TruncatedGaussian,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Bernoulli => "bernoulli",
            Family::Gaussian => "gaussian",
            Family::Poisson => "poisson",
            Family::Exponential => "exponential",
            Family::TruncatedGaussian => "truncated_gaussian",
        }
    }

    /// Whether every reward of the family lies in `[0, 1]`.
    pub fn unit_supported(self) -> bool {
        matches!(self, Family::Bernoulli | Family::TruncatedGaussian)
    }

    /// Validates a mean parameter for this family.
    pub fn check_mean(self, mu: f64) -> Result<()> {
        let ok = mu.is_finite()
            && match self {
                Family::Bernoulli => (0.0..=1.0).contains(&mu),
                Family::Poisson | Family::Exponential => mu > 0.0,
                Family::Gaussian | Family::TruncatedGaussian => true,
            };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArm {
                family: self.name(),
                reason: format!("mean {mu} out of range"),
            })
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "bernoulli" => Ok(Family::Bernoulli),
            "gaussian" | "normal" => Ok(Family::Gaussian),
            "poisson" => Ok(Family::Poisson),
            "exponential" => Ok(Family::Exponential),
            "truncated_gaussian" | "tg" => Ok(Family::TruncatedGaussian),
            other => Err(Error::InvalidArgument(format!("unknown family `{other}`"))),
        }
    }
}

/// A reward law. `mu` is the mean parameter; for the truncated Gaussian it is
/// the mean of the Gaussian before clamping to `[0, 1]`. `sigma` is only read
/// by the two Gaussian families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArmDistribution {
    family: Family,
    mu: f64,
    sigma: f64,
}

impl ArmDistribution {
    pub fn new(family: Family, mu: f64, sigma: f64) -> Result<Self> {
        family.check_mean(mu)?;
        if matches!(family, Family::Gaussian | Family::TruncatedGaussian) && !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidArm {
                family: family.name(),
                reason: format!("sigma {sigma} must be positive"),
            });
        }
        Ok(Self { family, mu, sigma })
    }

    pub fn bernoulli(mu: f64) -> Result<Self> {
        Self::new(Family::Bernoulli, mu, 1.0)
    }

    pub fn gaussian(mu: f64, sigma: f64) -> Result<Self> {
        Self::new(Family::Gaussian, mu, sigma)
    }

    pub fn poisson(mu: f64) -> Result<Self> {
        Self::new(Family::Poisson, mu, 1.0)
    }

    pub fn exponential(mu: f64) -> Result<Self> {
        Self::new(Family::Exponential, mu, 1.0)
    }

    pub fn truncated_gaussian(mu: f64, sigma: f64) -> Result<Self> {
        Self::new(Family::TruncatedGaussian, mu, sigma)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// One reward draw.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self.family {
            Family::Bernoulli => {
                if rng.random::<f64>() < self.mu {
                    1.0
                } else {
                    0.0
                }
            }
            Family::Gaussian => {
                let z: f64 = StandardNormal.sample(rng);
                self.mu + self.sigma * z
            }
            Family::Poisson => Poisson::new(self.mu).expect("validated at construction").sample(rng),
            Family::Exponential => {
                let e: f64 = Exp1.sample(rng);
                self.mu * e
            }
            Family::TruncatedGaussian => {
                let z: f64 = StandardNormal.sample(rng);
                (self.mu + self.sigma * z).clamp(0.0, 1.0)
            }
        }
    }

    /// Expected reward.
    pub fn analytic_mean(&self) -> f64 {
        match self.family {
            Family::TruncatedGaussian => {
                let (mu, sigma) = (self.mu, self.sigma);
                let p1 = normal_cdf((1.0 - mu) / sigma);
                let interior = integrate(|x| x * normal_pdf((x - mu) / sigma) / sigma, 0.0, 1.0, 1e-13);
                interior + (1.0 - p1)
            }
            _ => self.mu,
        }
    }
}

/// An ordered list of at least two arms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BanditInstance {
    arms: Vec<ArmDistribution>,
}

impl BanditInstance {
    pub fn new(arms: Vec<ArmDistribution>) -> Result<Self> {
        if arms.len() < 2 {
            return Err(Error::TooFewArms(arms.len()));
        }
        Ok(Self { arms })
    }

    /// Arms of one family sharing `sigma`.
    pub fn from_means(family: Family, means: &[f64], sigma: f64) -> Result<Self> {
        let arms = means
            .iter()
            .map(|&mu| ArmDistribution::new(family, mu, sigma))
            .collect::<Result<Vec<_>>>()?;
        Self::new(arms)
    }

    pub fn arms(&self) -> &[ArmDistribution] {
        &self.arms
    }

    pub fn len(&self) -> usize {
        self.arms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arms.is_empty()
    }

    /// Expected rewards of the arms.
    pub fn means(&self) -> Vec<f64> {
        self.arms.iter().map(ArmDistribution::analytic_mean).collect()
    }

    pub fn best_mean(&self) -> f64 {
        self.means().into_iter().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Per-arm gaps `mu* - mu_k`.
    pub fn gaps(&self) -> Vec<f64> {
        let means = self.means();
        let best = means.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        means.into_iter().map(|m| best - m).collect()
    }

    pub fn has_unique_optimum(&self) -> bool {
        self.gaps().iter().filter(|&&g| g == 0.0).count() == 1
    }

    /// The common family, or an error when arms mix families.
    pub fn family(&self) -> Result<Family> {
        let f = self.arms[0].family;
        if self.arms.iter().all(|a| a.family == f) {
            Ok(f)
        } else {
            Err(Error::MixedFamilies)
        }
    }

    /// The common `sigma` of a single-family instance.
    pub fn common_sigma(&self) -> Result<f64> {
        let s = self.arms[0].sigma;
        if self.arms.iter().all(|a| a.sigma == s) {
            Ok(s)
        } else {
            Err(Error::InvalidArgument("arms have different sigma".into()))
        }
    }
}

pub(crate) fn normal_pdf(z: f64) -> f64 {
    (-0.5 * z * z).exp() / (2.0 * PI).sqrt()
}

/// Standard normal CDF, accurate in both tails.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z * FRAC_1_SQRT_2)
}

fn xlogy_ratio(x: f64, y: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * (x / y).ln()
    }
}

/// Kullback–Leibler divergence between the laws of means `mu_x` and `mu_y`
/// within one family. Infinite divergences are returned as `f64::INFINITY`.
/// `sigma` is only used by the Gaussian family.
pub fn kl_divergence(family: Family, mu_x: f64, mu_y: f64, sigma: f64) -> Result<f64> {
    match family {
        Family::Bernoulli => {
            if mu_x == mu_y {
                return Ok(0.0);
            }
            if mu_y <= 0.0 || mu_y >= 1.0 {
                return Ok(f64::INFINITY);
            }
            Ok(xlogy_ratio(mu_x, mu_y) + xlogy_ratio(1.0 - mu_x, 1.0 - mu_y))
        }
        Family::Gaussian => {
            let d = mu_x - mu_y;
            Ok(d * d / (2.0 * sigma * sigma))
        }
        Family::Poisson => {
            if mu_x == mu_y {
                return Ok(0.0);
            }
            if mu_y <= 0.0 {
                return Ok(f64::INFINITY);
            }
            Ok(mu_y - mu_x + xlogy_ratio(mu_x, mu_y))
        }
        Family::Exponential => {
            if mu_x == mu_y {
                return Ok(0.0);
            }
            if mu_x <= 0.0 || mu_y <= 0.0 {
                return Ok(f64::INFINITY);
            }
            let r = mu_x / mu_y;
            Ok(r - 1.0 - r.ln())
        }
        Family::TruncatedGaussian => Err(Error::Unsupported {
            family: family.name(),
            what: "mean-parameterised divergence; use truncated_gaussian_kl",
        }),
    }
}

/// `sum_k (mu* - mu_k) / kl(mu_k, mu*)` over the strictly suboptimal arms.
pub fn lai_robbins_constant(instance: &BanditInstance) -> Result<f64> {
    let family = instance.family()?;
    if family == Family::TruncatedGaussian {
        return bk_constant_truncated_gaussian(instance);
    }
    let sigma = instance.common_sigma()?;
    let best = instance.best_mean();
    let mut total = 0.0;
    for arm in instance.arms() {
        if arm.mu < best {
            let kl = kl_divergence(family, arm.mu, best, sigma)?;
            if kl.is_finite() {
                total += (best - arm.mu) / kl;
            }
        }
    }
    Ok(total)
}

/// KL divergence between two truncated Gaussian laws: the two atoms at 0 and
/// 1 plus the interior density term, integrated to 1e-10 absolute error.
pub fn truncated_gaussian_kl(p: &ArmDistribution, q: &ArmDistribution) -> Result<f64> {
    for d in [p, q] {
        if d.family != Family::TruncatedGaussian {
            return Err(Error::Unsupported {
                family: d.family.name(),
                what: "truncated Gaussian divergence",
            });
        }
    }
    if p == q {
        return Ok(0.0);
    }
    let atom = |a: f64, b: f64| -> f64 {
        if a == 0.0 {
            0.0
        } else if b == 0.0 {
            f64::INFINITY
        } else {
            a * (a / b).ln()
        }
    };
    let p0 = normal_cdf(-p.mu / p.sigma);
    let q0 = normal_cdf(-q.mu / q.sigma);
    let p_top = normal_cdf((p.mu - 1.0) / p.sigma);
    let q_top = normal_cdf((q.mu - 1.0) / q.sigma);
    let atoms = atom(p0, q0) + atom(p_top, q_top);
    if !atoms.is_finite() {
        return Ok(f64::INFINITY);
    }
    let log_ratio = |x: f64| -> f64 {
        let zp = (x - p.mu) / p.sigma;
        let zq = (x - q.mu) / q.sigma;
        (q.sigma / p.sigma).ln() - 0.5 * zp * zp + 0.5 * zq * zq
    };
    let interior = integrate(
        |x| normal_pdf((x - p.mu) / p.sigma) / p.sigma * log_ratio(x),
        0.0,
        1.0,
        1e-10,
    );
    Ok(atoms + interior)
}

/// Burnetas–Katehakis constant for an instance of truncated Gaussian arms.
/// Arms at infinite divergence contribute nothing.
pub fn bk_constant_truncated_gaussian(instance: &BanditInstance) -> Result<f64> {
    if instance.family()? != Family::TruncatedGaussian {
        return Err(Error::InvalidArgument("instance is not truncated Gaussian".into()));
    }
    let means = instance.means();
    let (best_idx, best) = means
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, m)| if m > acc.1 { (i, m) } else { acc });
    let best_arm = instance.arms()[best_idx];
    let mut total = 0.0;
    for (arm, &mean) in instance.arms().iter().zip(&means) {
        if mean < best {
            let kl = truncated_gaussian_kl(arm, &best_arm)?;
            if kl.is_finite() && kl > 0.0 {
                total += (best - mean) / kl;
            }
        }
    }
    Ok(total)
}

/// CDF at `x` of the sum of `j` i.i.d. draws from the law with mean `mu`.
pub fn sum_cdf(family: Family, mu: f64, sigma: f64, j: u64, x: f64) -> Result<f64> {
    sum_tail(family, mu, sigma, j, x, false)
}

/// Survival function `1 - F(x)` of the `j`-fold sum, computed without
/// cancellation so small tail probabilities keep their relative accuracy.
pub fn sum_sf(family: Family, mu: f64, sigma: f64, j: u64, x: f64) -> Result<f64> {
    sum_tail(family, mu, sigma, j, x, true)
}

fn sum_tail(family: Family, mu: f64, sigma: f64, j: u64, x: f64, upper: bool) -> Result<f64> {
    if j == 0 {
        return Err(Error::InvalidArgument("sum of zero draws".into()));
    }
    ArmDistribution::new(family, mu, sigma)?;
    let jf = j as f64;
    let pick = |lower: f64, upper_p: f64| if upper { upper_p } else { lower };
    let p = match family {
        Family::Bernoulli => {
            if x < 0.0 {
                pick(0.0, 1.0)
            } else {
                let k = x.floor();
                if k >= jf || mu == 0.0 {
                    pick(1.0, 0.0)
                } else if mu == 1.0 {
                    pick(0.0, 1.0)
                } else {
                    // P(Bin(j, mu) <= k) = I_{1-mu}(j - k, k + 1)
                    pick(beta_reg(jf - k, k + 1.0, 1.0 - mu), beta_reg(k + 1.0, jf - k, mu))
                }
            }
        }
        Family::Gaussian => {
            let z = (x - jf * mu) / (sigma * jf.sqrt());
            pick(normal_cdf(z), normal_cdf(-z))
        }
        Family::Poisson => {
            if x < 0.0 {
                pick(0.0, 1.0)
            } else {
                let k = x.floor();
                let lambda = jf * mu;
                pick(gamma_ur(k + 1.0, lambda), gamma_lr(k + 1.0, lambda))
            }
        }
        Family::Exponential => {
            if x <= 0.0 {
                pick(0.0, 1.0)
            } else if x.is_infinite() {
                pick(1.0, 0.0)
            } else {
                pick(gamma_lr(jf, x / mu), gamma_ur(jf, x / mu))
            }
        }
        Family::TruncatedGaussian => {
            return Err(Error::Unsupported {
                family: family.name(),
                what: "closed-form sum law",
            })
        }
    };
    Ok(p)
}

/// Replaces a reward in `[0, 1]` by a Bernoulli draw with that mean.
pub fn binarize<R: Rng + ?Sized>(reward: f64, rng: &mut R) -> Result<f64> {
    if !(0.0..=1.0).contains(&reward) {
        return Err(Error::RewardOutOfRange {
            reward,
            lo: 0.0,
            hi: 1.0,
        });
    }
    Ok(if rng.random::<f64>() < reward { 1.0 } else { 0.0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        assert!(ArmDistribution::bernoulli(1.2).is_err());
        assert!(ArmDistribution::poisson(0.0).is_err());
        assert!(ArmDistribution::exponential(-1.0).is_err());
        assert!(ArmDistribution::gaussian(0.0, 0.0).is_err());
        assert!(ArmDistribution::truncated_gaussian(0.5, f64::NAN).is_err());
        assert!(BanditInstance::from_means(Family::Bernoulli, &[0.5], 1.0).is_err());
    }

    #[test]
    fn degenerate_bernoulli_always_one() {
        let d = ArmDistribution::bernoulli(1.0).unwrap();
        let mut rng = stream(1);
        assert!((0..1000).all(|_| d.sample(&mut rng) == 1.0));
    }

    #[test]
    fn gaussian_sample_mean() {
        let d = ArmDistribution::gaussian(0.0, 1.0).unwrap();
        let mut rng = stream(2);
        let n = 1_000_000;
        let m: f64 = (0..n).map(|_| d.sample(&mut rng)).sum::<f64>() / n as f64;
        assert!(m.abs() < 0.004, "{m}");
    }

    #[test]
    fn truncated_gaussian_far_above_one_is_clamped() {
        let d = ArmDistribution::truncated_gaussian(2.0, 0.1).unwrap();
        let mut rng = stream(3);
        assert!((0..100_000).all(|_| d.sample(&mut rng) == 1.0));
    }

    #[test]
    fn analytic_means() {
        assert_eq!(ArmDistribution::bernoulli(0.7).unwrap().analytic_mean(), 0.7);
        assert_eq!(ArmDistribution::exponential(2.0).unwrap().analytic_mean(), 2.0);
        let tg = ArmDistribution::truncated_gaussian(0.5, 10.0).unwrap();
        assert!(close(tg.analytic_mean(), 0.5, 1e-12));
    }

    #[test]
    fn truncated_gaussian_mean_matches_closed_form() {
        // E[clamp(X, 0, 1)] = mu (Phi(b) - Phi(a)) + sigma (phi(a) - phi(b)) + 1 - Phi(b)
        for &(mu, sigma) in &[(0.5, 0.1), (0.0, 0.3), (1.5, 1.0), (2.0, 1.0), (0.4, 1.0)] {
            let a = -mu / sigma;
            let b = (1.0 - mu) / sigma;
            let closed = mu * (normal_cdf(b) - normal_cdf(a)) + sigma * (normal_pdf(a) - normal_pdf(b)) + 1.0
                - normal_cdf(b);
            let d = ArmDistribution::truncated_gaussian(mu, sigma).unwrap();
            assert!(close(d.analytic_mean(), closed, 1e-11), "{mu} {sigma} {} {closed}", d.analytic_mean());
        }
    }

    #[test]
    fn kl_reference_values() {
        assert_eq!(kl_divergence(Family::Bernoulli, 0.5, 0.5, 1.0).unwrap(), 0.0);
        assert!(close(kl_divergence(Family::Bernoulli, 0.5, 0.6, 1.0).unwrap(), 0.020_410_997_260_127_6, 1e-12));
        assert!(close(kl_divergence(Family::Poisson, 1.0, 2.0, 1.0).unwrap(), 1.0 - 2f64.ln(), 1e-12));
        assert!(close(kl_divergence(Family::Gaussian, 0.5, 0.0, 1.0).unwrap(), 0.125, 1e-15));
        assert!(close(kl_divergence(Family::Exponential, 1.0, 2.0, 1.0).unwrap(), 2f64.ln() - 0.5, 1e-12));
    }

    #[test]
    fn kl_boundaries_are_infinite_not_errors() {
        assert_eq!(kl_divergence(Family::Bernoulli, 0.5, 1.0, 1.0).unwrap(), f64::INFINITY);
        assert_eq!(kl_divergence(Family::Bernoulli, 0.5, 0.0, 1.0).unwrap(), f64::INFINITY);
        assert!(close(kl_divergence(Family::Bernoulli, 0.0, 0.5, 1.0).unwrap(), 2f64.ln(), 1e-15));
        assert_eq!(kl_divergence(Family::Bernoulli, 1.0, 1.0, 1.0).unwrap(), 0.0);
        assert!(kl_divergence(Family::TruncatedGaussian, 0.1, 0.2, 1.0).is_err());
    }

    #[test]
    fn kl_zero_iff_equal_on_grid() {
        let grids: [(Family, Vec<f64>); 4] = [
            (Family::Bernoulli, vec![0.0, 0.01, 0.2, 0.5, 0.77, 0.99, 1.0]),
            (Family::Gaussian, vec![-3.0, -0.1, 0.0, 0.4, 2.5]),
            (Family::Poisson, vec![0.05, 0.5, 1.0, 3.0, 20.0]),
            (Family::Exponential, vec![0.1, 0.4, 1.0, 11.0]),
        ];
        for (family, grid) in grids.iter() {
            for &x in grid {
                for &y in grid {
                    let kl = kl_divergence(*family, x, y, 1.3).unwrap();
                    if x == y {
                        assert!(kl.abs() < 1e-12);
                    } else {
                        assert!(kl > 0.0, "{family:?} {x} {y}");
                    }
                }
            }
        }
    }

    #[test]
    fn lai_robbins_examples() {
        let b = BanditInstance::from_means(Family::Bernoulli, &[0.8, 0.9], 1.0).unwrap();
        assert!(close(lai_robbins_constant(&b).unwrap(), 2.2521, 1e-3));
        let g = BanditInstance::from_means(Family::Gaussian, &[0.5, 0.0], 1.0).unwrap();
        assert!(close(lai_robbins_constant(&g).unwrap(), 4.0, 1e-12));
        let flat = BanditInstance::from_means(Family::Poisson, &[2.0, 2.0, 2.0], 1.0).unwrap();
        assert_eq!(lai_robbins_constant(&flat).unwrap(), 0.0);
        let mixed = BanditInstance::new(vec![
            ArmDistribution::bernoulli(0.3).unwrap(),
            ArmDistribution::poisson(0.3).unwrap(),
        ])
        .unwrap();
        assert_eq!(lai_robbins_constant(&mixed), Err(Error::MixedFamilies));
    }

    #[test]
    fn lai_robbins_permutation_invariant() {
        let means = [0.1, 0.01, 0.03, 0.05, 0.02];
        let base = lai_robbins_constant(&BanditInstance::from_means(Family::Bernoulli, &means, 1.0).unwrap()).unwrap();
        let mut perm = means;
        perm.reverse();
        perm.swap(0, 2);
        let other = lai_robbins_constant(&BanditInstance::from_means(Family::Bernoulli, &perm, 1.0).unwrap()).unwrap();
        assert!(close(base, other, 1e-12));
    }

    #[test]
    fn truncated_gaussian_kl_properties() {
        let a = ArmDistribution::truncated_gaussian(0.4, 0.2).unwrap();
        let b = ArmDistribution::truncated_gaussian(0.6, 0.2).unwrap();
        assert_eq!(truncated_gaussian_kl(&a, &a).unwrap(), 0.0);
        let ab = truncated_gaussian_kl(&a, &b).unwrap();
        let ba = truncated_gaussian_kl(&b, &a).unwrap();
        assert!(ab > 0.0);
        assert!(close(ab, ba, 1e-9), "{ab} {ba}");
        // Identical laws at different indices still have zero divergence.
        let a2 = ArmDistribution::truncated_gaussian(0.4, 0.2).unwrap();
        assert!(truncated_gaussian_kl(&a, &a2).unwrap().abs() < 1e-12);
    }

    #[test]
    fn bk_constant_only_counts_suboptimal_arms() {
        let two = BanditInstance::from_means(Family::TruncatedGaussian, &[0.4, 0.6], 0.3).unwrap();
        let three = BanditInstance::from_means(Family::TruncatedGaussian, &[0.4, 0.6, 0.6], 0.3).unwrap();
        let c2 = bk_constant_truncated_gaussian(&two).unwrap();
        let c3 = bk_constant_truncated_gaussian(&three).unwrap();
        assert!(c2 > 0.0 && close(c2, c3, 1e-12));
    }

    #[test]
    fn sum_cdf_examples() {
        assert!(close(sum_cdf(Family::Bernoulli, 0.5, 1.0, 2, 0.5).unwrap(), 0.25, 1e-14));
        assert_eq!(sum_cdf(Family::Exponential, 1.0, 1.0, 1, 0.0).unwrap(), 0.0);
        assert!(close(sum_cdf(Family::Gaussian, 0.0, 1.0, 4, 0.0).unwrap(), 0.5, 1e-15));
        assert!(sum_cdf(Family::TruncatedGaussian, 0.5, 1.0, 1, 0.3).is_err());
    }

    #[test]
    fn sum_cdf_agrees_with_simulated_sums() {
        let n = 200_000;
        let cases = [
            (Family::Bernoulli, 0.3, 1.0, 5u64),
            (Family::Gaussian, 0.2, 1.5, 3),
            (Family::Poisson, 1.7, 1.0, 4),
            (Family::Exponential, 2.0, 1.0, 6),
        ];
        for (i, &(family, mu, sigma, j)) in cases.iter().enumerate() {
            let d = ArmDistribution::new(family, mu, sigma).unwrap();
            let mut rng = stream(100 + i as u64);
            let mut sums: Vec<f64> = (0..n).map(|_| (0..j).map(|_| d.sample(&mut rng)).sum()).collect();
            sums.sort_by(f64::total_cmp);
            let centre = j as f64 * mu;
            for x in [0.5 * centre, 0.8 * centre, centre, 1.3 * centre, 1.8 * centre] {
                let p = sum_cdf(family, mu, sigma, j, x).unwrap();
                let hits = sums.partition_point(|&s| s <= x) as f64 / n as f64;
                let se = (p * (1.0 - p) / n as f64).sqrt().max(1e-6);
                assert!((hits - p).abs() <= 5.0 * se, "{family:?} x={x}: {hits} vs {p}");
            }
        }
    }

    #[test]
    fn truncated_gaussian_mean_matches_sampling() {
        let n = 400_000;
        for &(mu, sigma) in &[(0.4, 1.0), (0.5, 0.1), (-0.2, 0.5)] {
            let d = ArmDistribution::truncated_gaussian(mu, sigma).unwrap();
            let mut rng = stream(77);
            let m = (0..n).map(|_| d.sample(&mut rng)).sum::<f64>() / n as f64;
            assert!(close(m, d.analytic_mean(), 5.0 * 0.5 / (n as f64).sqrt()), "{mu} {sigma}: {m}");
        }
    }

    #[test]
    fn binarize_edges() {
        let mut rng = stream(9);
        assert!((0..1000).all(|_| binarize(0.0, &mut rng).unwrap() == 0.0));
        assert!((0..1000).all(|_| binarize(1.0, &mut rng).unwrap() == 1.0));
        assert!(binarize(1.5, &mut rng).is_err());
        assert!(binarize(-0.1, &mut rng).is_err());
        let n = 100_000;
        let m: f64 = (0..n).map(|_| binarize(0.3, &mut rng).unwrap()).sum::<f64>() / n as f64;
        assert!(close(m, 0.3, 0.006));
    }
}
