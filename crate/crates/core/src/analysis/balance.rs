use rand::Rng;
use serde::{Deserialize, Serialize};
use statrs::function::factorial::ln_binomial;
use statrs::function::gamma::{gamma_lr, ln_gamma};

use crate::arms::{sum_sf, ArmDistribution, Family};
use crate::quad::integrate;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BalanceMode {
    Exact,
    MonteCarlo,
}

/// Parameters of `alpha_k(M, j) = E[(1 - F_{k,j}(X))^M]` where `X` is the sum
/// of `j` draws of the optimal arm and `F_{k,j}` the law of `j` draws of arm `k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BalanceQuery {
    pub family: Family,
    pub mu1: f64,
    pub muk: f64,
    pub sigma: f64,
    pub m: u64,
    pub j: u64,
    pub mode: BalanceMode,
    pub mc_samples: usize,
}

impl BalanceQuery {
    pub fn exact(family: Family, mu1: f64, muk: f64, sigma: f64, m: u64, j: u64) -> Self {
        Self {
            family,
            mu1,
            muk,
            sigma,
            m,
            j,
            mode: BalanceMode::Exact,
            mc_samples: 0,
        }
    }

    pub fn monte_carlo(mut self, samples: usize) -> Self {
        self.mode = BalanceMode::MonteCarlo;
        self.mc_samples = samples;
        self
    }
}

/// A balance value; `std_error` is zero for exact evaluations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BalanceEstimate {
    pub value: f64,
    pub std_error: f64,
}

impl BalanceEstimate {
    fn exact(value: f64) -> Self {
        Self { value, std_error: 0.0 }
    }
}

pub fn balance_function<R: Rng + ?Sized>(q: &BalanceQuery, rng: &mut R) -> Result<BalanceEstimate> {
    if q.j == 0 {
        return Err(Error::InvalidArgument("balance block length j must be at least 1".into()));
    }
    let best = ArmDistribution::new(q.family, q.mu1, q.sigma)?;
    let challenger = ArmDistribution::new(q.family, q.muk, q.sigma)?;
    if q.m == 0 {
        return Ok(BalanceEstimate::exact(1.0));
    }
    match q.mode {
        BalanceMode::Exact => exact(q).map(BalanceEstimate::exact),
        BalanceMode::MonteCarlo => monte_carlo(q, &best, &challenger, rng),
    }
}

fn powered_sf(q: &BalanceQuery, x: f64) -> Result<f64> {
    Ok(sum_sf(q.family, q.muk, q.sigma, q.j, x)?.powf(q.m as f64))
}

fn exact(q: &BalanceQuery) -> Result<f64> {
    let jf = q.j as f64;
    match q.family {
        Family::Bernoulli => {
            let mut total = 0.0;
            for x in 0..=q.j {
                let pmf = binomial_pmf(q.j, q.mu1, x);
                if pmf > 0.0 {
                    total += pmf * powered_sf(q, x as f64)?;
                }
            }
            Ok(total)
        }
        Family::Poisson => {
            let lambda = jf * q.mu1;
            if lambda == 0.0 {
                return powered_sf(q, 0.0);
            }
            let mut total = 0.0;
            let mut x = 0u64;
            loop {
                let xf = x as f64;
                let pmf = (xf * lambda.ln() - lambda - ln_gamma(xf + 1.0)).exp();
                total += pmf * powered_sf(q, xf)?;
                // P(X > x) = P(Gamma(x + 1) < lambda) bounds the neglected terms.
                if xf > lambda && gamma_lr(xf + 1.0, lambda) < 1e-20 {
                    break;
                }
                x += 1;
            }
            Ok(total)
        }
        Family::Gaussian => {
            let mean = jf * q.mu1;
            let sd = q.sigma * jf.sqrt();
            let f = |x: f64| {
                let z = (x - mean) / sd;
                (-0.5 * z * z).exp() / (sd * (2.0 * std::f64::consts::PI).sqrt()) * powered_sf(q, x).unwrap_or(0.0)
            };
            Ok(integrate_pieces(f, mean - 10.0 * sd, mean + 10.0 * sd, 8))
        }
        Family::Exponential => {
            // X ~ Gamma(j, scale mu1)
            let scale = q.mu1;
            let ln_norm = ln_gamma(jf) + jf * scale.ln();
            let f = |x: f64| {
                if x <= 0.0 {
                    return if q.j == 1 { powered_sf(q, 0.0).unwrap_or(0.0) / scale } else { 0.0 };
                }
                ((jf - 1.0) * x.ln() - x / scale - ln_norm).exp() * powered_sf(q, x).unwrap_or(0.0)
            };
            let upper = scale * (jf + 60.0 + 12.0 * jf.sqrt());
            Ok(integrate_pieces(f, 0.0, upper, 8))
        }
        Family::TruncatedGaussian => Err(Error::Unsupported {
            family: q.family.name(),
            what: "exact balance function (use Monte Carlo mode)",
        }),
    }
}

/// Splits `[a, b]` evenly before adaptive integration so that a narrow peak
/// of the integrand cannot be missed by the first Kronrod panel.
fn integrate_pieces<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, pieces: usize) -> f64 {
    let h = (b - a) / pieces as f64;
    (0..pieces).map(|i| integrate(&f, a + i as f64 * h, a + (i + 1) as f64 * h, 1e-17)).sum()
}

fn binomial_pmf(n: u64, p: f64, x: u64) -> f64 {
    if p == 0.0 {
        return if x == 0 { 1.0 } else { 0.0 };
    }
    if p == 1.0 {
        return if x == n { 1.0 } else { 0.0 };
    }
    (ln_binomial(n, x) + x as f64 * p.ln() + (n - x) as f64 * (1.0 - p).ln()).exp()
}

fn monte_carlo<R: Rng + ?Sized>(
    q: &BalanceQuery,
    best: &ArmDistribution,
    challenger: &ArmDistribution,
    rng: &mut R,
) -> Result<BalanceEstimate> {
    if q.mc_samples < 2 {
        return Err(Error::InvalidArgument("Monte Carlo balance needs at least two samples".into()));
    }
    let block_sum = |arm: &ArmDistribution, rng: &mut R| (0..q.j).map(|_| arm.sample(rng)).sum::<f64>();
    let closed_law = q.family != Family::TruncatedGaussian;
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..q.mc_samples {
        let x = block_sum(best, rng);
        let v = if closed_law {
            powered_sf(q, x)?
        } else {
            // (1 - F(x))^M is the chance that M fresh challenger sums all exceed x.
            let all_above = (0..q.m).all(|_| block_sum(challenger, rng) > x);
            if all_above {
                1.0
            } else {
                0.0
            }
        };
        sum += v;
        sum_sq += v * v;
    }
    let n = q.mc_samples as f64;
    let mean = sum / n;
    let var = (sum_sq / n - mean * mean).max(0.0) * n / (n - 1.0);
    Ok(BalanceEstimate {
        value: mean,
        std_error: (var / n).sqrt(),
    })
}

/// `alpha(M, 1) = 1 / (1 + (mu1 / mu2) M)` for exponential arms.
pub fn exponential_balance_closed_form(mu1: f64, mu2: f64, m: u64) -> f64 {
    1.0 / (1.0 + mu1 / mu2 * m as f64)
}

/// `alpha(M, 1) = (1 - mu1) muk^M` for Bernoulli arms: only a zero from the
/// best arm can be beaten, and then by any challenger draw equal to one.
pub fn bernoulli_balance_closed_form(mu1: f64, muk: f64, m: u64) -> f64 {
    if m == 0 {
        return 1.0;
    }
    (1.0 - mu1) * muk.powf(m as f64)
}

/// `floor(t / ln(t)^2)`, the sample size that forced exploration guarantees
/// to the leader after `t` rounds.
pub fn exploration_budget(t: u64) -> u64 {
    let l = (t as f64).ln();
    (t as f64 / (l * l)).floor() as u64
}

/// Partial sum `sum_{t=2}^{horizon} alpha(exploration_budget(t))`.
pub fn balance_series<F: Fn(u64) -> f64>(horizon: u64, alpha: F) -> f64 {
    (2..=horizon).map(|t| alpha(exploration_budget(t))).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    fn exact_value(family: Family, mu1: f64, muk: f64, sigma: f64, m: u64, j: u64) -> f64 {
        balance_function(&BalanceQuery::exact(family, mu1, muk, sigma, m, j), &mut stream(0)).unwrap().value
    }

    #[test]
    fn zero_power_is_one() {
        for family in [Family::Bernoulli, Family::Gaussian, Family::Poisson, Family::Exponential, Family::TruncatedGaussian] {
            let q = BalanceQuery::exact(family, 0.6, 0.4, 1.0, 0, 3);
            assert_eq!(balance_function(&q, &mut stream(0)).unwrap().value, 1.0);
        }
    }

    #[test]
    fn bernoulli_two_point() {
        let v = exact_value(Family::Bernoulli, 0.9, 0.8, 1.0, 2, 1);
        assert!((v - 0.064).abs() < 1e-15);
        for m in 1..20 {
            let v = exact_value(Family::Bernoulli, 0.7, 0.4, 1.0, m, 1);
            assert!((v - bernoulli_balance_closed_form(0.7, 0.4, m)).abs() < 1e-15);
        }
    }

    #[test]
    fn bernoulli_j2_enumeration() {
        // X ~ Bin(2, .6), Y ~ Bin(2, .3): P(Y > 0) = .51, P(Y > 1) = .09, P(Y > 2) = 0.
        let pmf = [0.16, 0.48, 0.36];
        let sf: [f64; 3] = [0.51, 0.09, 0.0];
        let want: f64 = pmf.iter().zip(sf).map(|(p, s)| p * s.powi(3)).sum();
        assert!((exact_value(Family::Bernoulli, 0.6, 0.3, 1.0, 3, 2) - want).abs() < 1e-14);
    }

    #[test]
    fn exponential_matches_closed_form() {
        let v = exact_value(Family::Exponential, 2.0, 1.0, 1.0, 10, 1);
        assert!((v - 1.0 / 21.0).abs() < 1e-12, "{v}");
        for m in [1, 5, 50, 500] {
            let v = exact_value(Family::Exponential, 1.5, 1.0, 1.0, m, 1);
            let want = exponential_balance_closed_form(1.5, 1.0, m);
            assert!((v / want - 1.0).abs() < 1e-9, "{m} {v} {want}");
        }
        assert_eq!(exponential_balance_closed_form(2.0, 1.0, 0), 1.0);
        assert_eq!(exponential_balance_closed_form(3.0, 3.0, 1), 0.5);
    }

    #[test]
    fn gaussian_equal_means_is_one_over_m_plus_one() {
        // With equal continuous laws, (1 - F(X)) is uniform.
        for m in [1, 3, 9] {
            let v = exact_value(Family::Gaussian, 0.0, 0.0, 1.0, m, 2);
            assert!((v - 1.0 / (m as f64 + 1.0)).abs() < 1e-10, "{v}");
        }
    }

    #[test]
    fn poisson_small_case_by_hand() {
        // j = 1, M = 1: sum_x P(X = x) P(Y > x).
        let (l1, lk): (f64, f64) = (2.0, 1.0);
        let mut want = 0.0;
        let mut fact = 1.0;
        for x in 0..60 {
            if x > 0 {
                fact *= x as f64;
            }
            let px = (-l1).exp() * l1.powi(x) / fact;
            let mut cdf = 0.0;
            let mut f2 = 1.0;
            for y in 0..=x {
                if y > 0 {
                    f2 *= y as f64;
                }
                cdf += (-lk).exp() * lk.powi(y) / f2;
            }
            want += px * (1.0 - cdf);
        }
        assert!((exact_value(Family::Poisson, 2.0, 1.0, 1.0, 1, 1) - want).abs() < 1e-12);
    }

    #[test]
    fn monte_carlo_agrees_with_exact() {
        let mut rng = stream(7);
        for (family, mu1, muk) in [
            (Family::Bernoulli, 0.6, 0.5),
            (Family::Gaussian, 0.5, 0.0),
            (Family::Poisson, 2.0, 1.5),
            (Family::Exponential, 1.5, 1.0),
        ] {
            let q = BalanceQuery::exact(family, mu1, muk, 1.0, 4, 3);
            let e = balance_function(&q, &mut rng).unwrap().value;
            let mc = balance_function(&q.monte_carlo(20_000), &mut rng).unwrap();
            assert!((e - mc.value).abs() < 4.0 * mc.std_error + 1e-12, "{family:?} {e} {mc:?}");
        }
    }

    #[test]
    fn truncated_gaussian_only_by_simulation() {
        let q = BalanceQuery::exact(Family::TruncatedGaussian, 0.5, 0.5, 0.2, 1, 1);
        assert!(balance_function(&q, &mut stream(0)).is_err());
        // Equal continuous laws: P(Y > X) = 1/2.
        let mc = balance_function(&q.monte_carlo(20_000), &mut stream(1)).unwrap();
        assert!((mc.value - 0.5).abs() < 4.0 * mc.std_error);
    }

    #[test]
    fn monotone_in_m_and_mu1() {
        for family in [Family::Bernoulli, Family::Gaussian, Family::Poisson, Family::Exponential] {
            let mut prev = 1.0;
            for m in [0, 1, 2, 4, 8, 16] {
                let v = exact_value(family, 0.6, 0.4, 1.0, m, 2);
                assert!(v <= prev + 1e-14, "{family:?} M={m}");
                prev = v;
            }
            let mut prev = 1.0;
            for mu1 in [0.45, 0.6, 0.75, 0.9] {
                let v = exact_value(family, mu1, 0.4, 1.0, 3, 2);
                assert!(v <= prev + 1e-14, "{family:?} mu1={mu1}");
                prev = v;
            }
        }
    }

    #[test]
    fn exploration_budget_values() {
        assert_eq!(exploration_budget(2), 4);
        assert_eq!(exploration_budget(100), 4);
        assert_eq!(exploration_budget(10_000), 117);
    }
}
