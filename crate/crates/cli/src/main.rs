use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use sda_core::analysis::{balance_function, diversity_pmf_estimate, diversity_pmf_exact, BalanceQuery, MAX_EXACT_DIVERSITY};
use sda_core::experiment::{
    emit, lower_bound_curve, run_bayesian_experiment, run_experiment, write_rows, write_summary_csv,
    write_summary_json, CampaignResult, ExperimentConfig, OutputFormat,
};
use sda_core::rng::stream;
use sda_core::Family;

/// Sub-sampling duelling bandit experiments and numerical tables.
#[derive(Parser)]
#[command(name = "sda", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Override the number of runs (instances for `bayes`).
    #[arg(long, global = true)]
    runs: Option<usize>,
    /// Override the base seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads, 0 for all cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output directory for campaigns, output file for tables. Defaults to stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Summary format for campaigns; tables are always CSV.
    #[arg(long, global = true, default_value = "csv")]
    format: OutputFormat,
}

#[derive(Subcommand)]
enum Command {
    /// Fixed-instance campaign.
    Run { config: PathBuf },
    /// Random-instance campaign, means drawn from the configured prior.
    Bayes { config: PathBuf },
    /// Lower-bound curve `C ln t` on the checkpoint grid of a config.
    Bound { config: PathBuf },
    /// Balance function table for M in 0..=Mmax and j in 1..=jmax.
    Balance {
        family: Family,
        mu1: f64,
        muk: f64,
        #[arg(value_name = "MMAX")]
        m_max: u64,
        #[arg(value_name = "JMAX")]
        j_max: u64,
        /// Reward scale for Gaussian and truncated Gaussian arms.
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
        /// Estimate by Monte Carlo with this many samples instead of exactly.
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Law of the number of disjoint blocks among m random blocks of a history of length H.
    Diversity {
        m: usize,
        #[arg(value_name = "H")]
        h: usize,
        #[arg(value_name = "JMAX")]
        j_max: usize,
        /// Monte Carlo samples for block lengths above 1.
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
    },
}

fn load(path: &Path, common: &Common) -> Result<ExperimentConfig> {
    let mut config = ExperimentConfig::from_path(path)?;
    if let Some(runs) = common.runs {
        config.runs = runs;
    }
    if let Some(seed) = common.seed {
        config.base_seed = seed;
    }
    if let Some(threads) = common.threads {
        config.threads = threads;
    }
    if let Some(out) = &common.out {
        config.output_path = Some(out.clone());
    }
    Ok(config)
}

fn report(result: &CampaignResult, config: &ExperimentConfig, format: OutputFormat) -> Result<()> {
    match &config.output_path {
        Some(dir) => {
            for path in emit(result, dir, format)? {
                eprintln!("wrote {}", path.display());
            }
        }
        None => {
            let out = io::stdout().lock();
            match format {
                OutputFormat::Csv => write_summary_csv(out, &result.summary)?,
                OutputFormat::Json => write_summary_json(out, &result.summary)?,
            }
        }
    }
    Ok(())
}

fn table_sink(common: &Common) -> Result<Box<dyn Write>> {
    if common.format != OutputFormat::Csv {
        bail!("--format: tables are only written as csv");
    }
    Ok(match &common.out {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn balance_rows(
    family: Family,
    mu1: f64,
    muk: f64,
    (m_max, j_max): (u64, u64),
    sigma: f64,
    samples: Option<usize>,
    seed: u64,
) -> Result<Vec<Vec<String>>> {
    if j_max == 0 {
        bail!("jmax must be at least 1");
    }
    let mut rng = stream(seed);
    let mut rows = Vec::new();
    for m in 0..=m_max {
        for j in 1..=j_max {
            let mut q = BalanceQuery::exact(family, mu1, muk, sigma, m, j);
            if let Some(n) = samples {
                q = q.monte_carlo(n);
            }
            let est = balance_function(&q, &mut rng)?;
            rows.push(vec![m.to_string(), j.to_string(), est.value.to_string(), est.std_error.to_string()]);
        }
    }
    Ok(rows)
}

fn diversity_rows(m: usize, h: usize, j_max: usize, samples: usize, seed: u64) -> Result<Vec<Vec<String>>> {
    if j_max == 0 || j_max > h {
        bail!("jmax must lie in 1..=H");
    }
    let mut rng = stream(seed);
    let mut rows = Vec::new();
    for j in 1..=j_max {
        let (method, pmf) = if j == 1 && m <= MAX_EXACT_DIVERSITY && h <= MAX_EXACT_DIVERSITY {
            let mut pmf = diversity_pmf_exact(m, h)?;
            pmf.insert(0, 0.0);
            ("exact", pmf)
        } else {
            ("monte_carlo", diversity_pmf_estimate(m, h, j, samples, &mut rng)?)
        };
        for (x, p) in pmf.iter().enumerate() {
            rows.push(vec![j.to_string(), x.to_string(), p.to_string(), method.to_string()]);
        }
    }
    Ok(rows)
}

fn run(cli: Cli) -> Result<()> {
    let common = &cli.common;
    match cli.command {
        Command::Run { config } => {
            let config = load(&config, common)?;
            let result = run_experiment(&config)?;
            report(&result, &config, common.format)
        }
        Command::Bayes { config } => {
            let config = load(&config, common)?;
            let result = run_bayesian_experiment(&config)?;
            report(&result, &config, common.format)
        }
        Command::Bound { config } => {
            let config = ExperimentConfig::from_path(&config)?;
            config.validate(false)?;
            let curve = lower_bound_curve(&config.instance()?, &config.checkpoints())?;
            let rows = curve.into_iter().map(|(t, b)| vec![t.to_string(), b.to_string()]);
            Ok(write_rows(table_sink(common)?, &["t", "bound"], rows)?)
        }
        Command::Balance { family, mu1, muk, m_max, j_max, sigma, samples } => {
            let rows = balance_rows(family, mu1, muk, (m_max, j_max), sigma, samples, common.seed.unwrap_or(0))?;
            Ok(write_rows(table_sink(common)?, &["M", "j", "alpha", "std_error"], rows)?)
        }
        Command::Diversity { m, h, j_max, samples } => {
            let rows = diversity_rows(m, h, j_max, samples, common.seed.unwrap_or(0))?;
            Ok(write_rows(table_sink(common)?, &["j", "x", "probability", "method"], rows)?)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("sda: error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
