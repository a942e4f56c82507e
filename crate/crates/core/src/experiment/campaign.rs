use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, Prior};
use super::summary::{summarize, Summary};
use crate::arms::{lai_robbins_constant, BanditInstance};
use crate::rng::{derive_seed, label_tag, stream};
use crate::sda::{run_policy, RegretTrace};
use crate::{Error, Result};

/// Traces of one algorithm, ordered by run index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmTraces {
    pub algorithm: String,
    pub runs: Vec<RegretTrace>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CampaignResult {
    pub summary: Summary,
    pub traces: Vec<AlgorithmTraces>,
}

/// Seed of the reward streams of run `run`. It does not depend on the
/// algorithm, so every algorithm faces the same reward sequences.
pub fn reward_seed(base_seed: u64, run: usize) -> u64 {
    derive_seed(base_seed, label_tag("rewards"), run as u64)
}

/// Seed of the internal randomness of algorithm `label` in run `run`.
pub fn policy_seed(base_seed: u64, label: &str, run: usize) -> u64 {
    derive_seed(base_seed, label_tag(label), run as u64)
}

fn instance_seed(base_seed: u64, index: usize) -> u64 {
    derive_seed(base_seed, label_tag("instance"), index as u64)
}

fn pool(threads: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("cannot start {threads} worker threads: {e}")))
}

/// Runs every `(algorithm, run)` pair on instances produced by `instance_for`
/// and gathers the traces in run order.
fn execute<F>(config: &ExperimentConfig, instance_for: F, lower_bound_constant: Option<f64>) -> Result<CampaignResult>
where
    F: Fn(usize) -> Result<BanditInstance> + Sync,
{
    let checkpoints = config.checkpoints();
    let labels: Vec<String> = config
        .algorithms
        .iter()
        .map(|spec| spec.build(config.family, config.sigma).map(|p| p.label()))
        .collect::<Result<_>>()?;
    let tasks: Vec<(usize, usize)> = (0..config.algorithms.len()).flat_map(|a| (0..config.runs).map(move |r| (a, r))).collect();
    let run_task = |&(a, run): &(usize, usize)| -> Result<RegretTrace> {
        let instance = instance_for(run)?;
        let mut policy = config.algorithms[a].build(config.family, config.sigma)?;
        let mut rng = stream(policy_seed(config.base_seed, &labels[a], run));
        let mut outcome = run_policy(
            policy.as_mut(),
            &instance,
            config.horizon,
            &checkpoints,
            reward_seed(config.base_seed, run),
            &mut rng,
        )?;
        outcome.trace.run_index = run;
        Ok(outcome.trace)
    };
    let results: Vec<Result<RegretTrace>> = pool(config.threads)?.install(|| tasks.par_iter().map(run_task).collect());
    let mut traces: Vec<AlgorithmTraces> = labels
        .iter()
        .map(|l| AlgorithmTraces {
            algorithm: l.clone(),
            runs: Vec::with_capacity(config.runs),
        })
        .collect();
    for (&(a, _), result) in tasks.iter().zip(results) {
        traces[a].runs.push(result?);
    }
    let algorithms = traces.iter().map(|t| summarize(&t.algorithm, &t.runs)).collect();
    Ok(CampaignResult {
        summary: Summary {
            version: env!("CARGO_PKG_VERSION").to_string(),
            base_seed: config.base_seed,
            lower_bound_constant,
            config: config.clone(),
            algorithms,
        },
        traces,
    })
}

/// Fixed-instance campaign: `runs` independent runs of every algorithm.
/// The result does not depend on the number of worker threads.
pub fn run_experiment(config: &ExperimentConfig) -> Result<CampaignResult> {
    config.validate(false)?;
    let instance = config.instance()?;
    let constant = lai_robbins_constant(&instance).ok();
    execute(config, |_| Ok(instance.clone()), constant)
}

/// Random-instance campaign: instance `i` is drawn from the prior with its
/// own seed, and every algorithm plays one run on it.
pub fn run_bayesian_experiment(config: &ExperimentConfig) -> Result<CampaignResult> {
    config.validate(true)?;
    let prior = config.prior.expect("validated");
    let arms = config.arm_count();
    let instance_for = |i: usize| {
        if prior == Prior::Fixed {
            return config.instance();
        }
        let means = prior.draw(arms, &config.means, &mut stream(instance_seed(config.base_seed, i)));
        BanditInstance::from_means(config.family, &means, config.sigma)
    };
    let constant = if prior == Prior::Fixed {
        lai_robbins_constant(&config.instance()?).ok()
    } else {
        None
    };
    execute(config, instance_for, constant)
}

/// `(t, C ln t)` on the grid, where `C` is the asymptotic lower-bound
/// constant of the instance.
pub fn lower_bound_curve(instance: &BanditInstance, t_grid: &[usize]) -> Result<Vec<(usize, f64)>> {
    let c = lai_robbins_constant(instance)?;
    Ok(t_grid
        .iter()
        .map(|&t| (t, if t == 0 { 0.0 } else { c * (t as f64).ln() }))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arms::Family;
    use crate::experiment::{AlgorithmKind, AlgorithmSpec};

    fn small(family: Family, means: Vec<f64>, kinds: &[AlgorithmKind]) -> ExperimentConfig {
        let mut c = ExperimentConfig::new(family, means, 500, 6, kinds.iter().map(|&k| AlgorithmSpec::new(k)).collect());
        c.checkpoints = Some(vec![50, 200, 500]);
        c.base_seed = 11;
        c
    }

    #[test]
    fn identical_arms_have_no_regret() {
        let c = small(Family::Bernoulli, vec![0.5, 0.5], &[AlgorithmKind::RbSda, AlgorithmKind::Ts]);
        let r = run_experiment(&c).unwrap();
        for a in &r.summary.algorithms {
            assert!(a.checkpoints.iter().all(|s| s.mean == 0.0 && s.quantiles.q99 == 0.0));
        }
    }

    #[test]
    fn deterministic_and_thread_independent() {
        let mut c = small(
            Family::Gaussian,
            vec![0.0, 0.5, 1.0],
            &[AlgorithmKind::RbSda, AlgorithmKind::Ssmc, AlgorithmKind::Ts, AlgorithmKind::Imed],
        );
        c.threads = 1;
        let one = run_experiment(&c).unwrap();
        c.threads = 3;
        let three = run_experiment(&c).unwrap();
        assert_eq!(one.traces, three.traces);
        assert_eq!(one.summary.algorithms, three.summary.algorithms);
        assert_eq!(run_experiment(&c).unwrap(), three);
    }

    #[test]
    fn means_are_nondecreasing() {
        let c = small(Family::Bernoulli, vec![0.3, 0.6], &[AlgorithmKind::LdsSda, AlgorithmKind::Phe]);
        let r = run_experiment(&c).unwrap();
        for a in &r.summary.algorithms {
            assert!(a.checkpoints.windows(2).all(|w| w[0].mean <= w[1].mean));
        }
        for t in &r.traces {
            assert_eq!(t.runs.iter().map(|tr| tr.run_index).collect::<Vec<_>>(), (0..6).collect::<Vec<_>>());
        }
    }

    #[test]
    fn fixed_prior_matches_fixed_campaign() {
        let c = small(Family::Bernoulli, vec![0.3, 0.6], &[AlgorithmKind::RbSda, AlgorithmKind::Ts]);
        let fixed = run_experiment(&c).unwrap();
        let mut b = c.clone();
        b.prior = Some(Prior::Fixed);
        let bayes = run_bayesian_experiment(&b).unwrap();
        assert_eq!(fixed.traces, bayes.traces);
    }

    #[test]
    fn bayesian_instances_are_shared() {
        let mut c = small(Family::Bernoulli, vec![], &[AlgorithmKind::RbSda, AlgorithmKind::Ts]);
        c.prior = Some(Prior::Uniform { lo: 0.0, hi: 1.0 });
        c.arms = Some(4);
        let r = run_bayesian_experiment(&c).unwrap();
        assert_eq!(r.traces[0].runs.len(), 6);
        assert!(r.summary.lower_bound_constant.is_none());
        let draw = |i| Prior::Uniform { lo: 0.0, hi: 1.0 }.draw(4, &[], &mut stream(instance_seed(11, i)));
        assert_eq!(draw(2), draw(2));
        assert_ne!(draw(2), draw(3));
        c.prior = Some(Prior::Normal { mean: 0.0, sd: 1.0 });
        assert!(run_bayesian_experiment(&c).is_err());
    }

    #[test]
    fn lower_bound_examples() {
        let inst = BanditInstance::from_means(Family::Bernoulli, &[0.8, 0.9], 1.0).unwrap();
        let curve = lower_bound_curve(&inst, &[1, 20_000]).unwrap();
        assert_eq!(curve[0], (1, 0.0));
        assert!((curve[1].1 - 22.30).abs() < 0.01, "{curve:?}");
        let flat = BanditInstance::from_means(Family::Gaussian, &[0.2, 0.2], 1.0).unwrap();
        assert!(lower_bound_curve(&flat, &[10, 100]).unwrap().iter().all(|p| p.1 == 0.0));
    }
}
