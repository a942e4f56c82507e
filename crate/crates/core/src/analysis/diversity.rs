use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::samplers::rb_sample;
use crate::{Error, Result};

/// Largest `m` or `H` accepted by [`diversity_pmf_exact`].
pub const MAX_EXACT_DIVERSITY: usize = 1000;

/// Offsets `n0` of blocks `{n0+1, ..., n0+j}` drawn inside a history of length `h`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockDraw {
    starts: Vec<usize>,
    j: usize,
    h: usize,
}

impl BlockDraw {
    pub fn new(starts: Vec<usize>, j: usize, h: usize) -> Result<Self> {
        if j == 0 || j > h {
            return Err(Error::InvalidArgument(format!("block length {j} must lie in 1..={h}")));
        }
        if let Some(&s) = starts.iter().find(|&&s| s > h - j) {
            return Err(Error::InvalidArgument(format!("block start {s} exceeds {}", h - j)));
        }
        Ok(Self { starts, j, h })
    }

    pub fn starts(&self) -> &[usize] {
        &self.starts
    }

    pub fn j(&self) -> usize {
        self.j
    }

    pub fn h(&self) -> usize {
        self.h
    }
}

/// Size of the largest family of pairwise disjoint blocks. Equal-length
/// intervals sorted by start are also sorted by end, so the earliest-end
/// greedy scan is optimal.
pub fn max_disjoint_blocks(draw: &BlockDraw) -> usize {
    let mut starts = draw.starts.clone();
    starts.sort_unstable();
    let mut count = 0;
    let mut free_from = 0;
    for s in starts {
        if count == 0 || s >= free_from {
            count += 1;
            free_from = s + draw.j;
        }
    }
    count
}

/// Law of `X_{m,H,1}`, the number of distinct values among `m` uniform draws
/// on `H` points: `P(X = k) = H! / ((H-k)! H^m) S(m, k)`. Entry `k - 1` holds
/// `P(X = k)` for `k` in `1..=min(m, H)`.
///
/// Everything is computed with exact integers and rounded once per entry.
pub fn diversity_pmf_exact(m: usize, h: usize) -> Result<Vec<f64>> {
    if m == 0 || h == 0 || m > MAX_EXACT_DIVERSITY || h > MAX_EXACT_DIVERSITY {
        return Err(Error::InvalidArgument(format!(
            "exact diversity law needs 1 <= m, H <= {MAX_EXACT_DIVERSITY}, got m={m}, H={h}"
        )));
    }
    let top = m.min(h);
    // Row n of the Stirling triangle, truncated to k <= top.
    let mut row: Vec<BigUint> = vec![BigUint::zero(); top + 1];
    row[0] = BigUint::one();
    for n in 1..=m {
        for k in (1..=top.min(n)).rev() {
            let carried = std::mem::take(&mut row[k]) * BigUint::from(k);
            row[k] = carried + &row[k - 1];
        }
        row[0] = BigUint::zero();
    }
    let denominator = BigUint::from(h).pow(m as u32);
    let mut falling = BigUint::one();
    let mut pmf = Vec::with_capacity(top);
    for (k, stirling) in row.iter().enumerate().take(top + 1).skip(1) {
        falling *= BigUint::from(h - k + 1);
        pmf.push(ratio(&(&falling * stirling), &denominator));
    }
    Ok(pmf)
}

fn ratio(num: &BigUint, den: &BigUint) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    let shift = (den.bits() as i64 - num.bits() as i64 + 64).max(0);
    let q = (num << shift as usize) / den;
    libm::ldexp(q.to_f64().unwrap_or(f64::INFINITY), -(shift as i32))
}

/// Monte Carlo probability with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiversityEstimate {
    pub probability: f64,
    pub std_error: f64,
}

fn draw_blocks<R: Rng + ?Sized>(m: usize, h: usize, j: usize, rng: &mut R) -> Result<BlockDraw> {
    let starts = (0..m)
        .map(|_| rb_sample(h, j, rng).map(|s| s.block_start().expect("random blocks are contiguous")))
        .collect::<Result<Vec<_>>>()?;
    BlockDraw::new(starts, j, h)
}

/// Estimates `P(X_{m,H,j} < threshold)` from `samples` independent draws of
/// `m` random blocks of length `j` in a history of length `h`.
pub fn diversity_estimate<R: Rng + ?Sized>(
    m: usize,
    h: usize,
    j: usize,
    threshold: usize,
    samples: usize,
    rng: &mut R,
) -> Result<DiversityEstimate> {
    if samples == 0 {
        return Err(Error::InvalidArgument("diversity estimate needs samples".into()));
    }
    let mut hits = 0usize;
    for _ in 0..samples {
        if max_disjoint_blocks(&draw_blocks(m, h, j, rng)?) < threshold {
            hits += 1;
        }
    }
    let p = hits as f64 / samples as f64;
    Ok(DiversityEstimate {
        probability: p,
        std_error: (p * (1.0 - p) / samples as f64).sqrt(),
    })
}

/// Empirical law of `X_{m,H,j}`; entry `k` is the frequency of `X = k` for
/// `k` in `0..=min(m, H / j)`.
pub fn diversity_pmf_estimate<R: Rng + ?Sized>(
    m: usize,
    h: usize,
    j: usize,
    samples: usize,
    rng: &mut R,
) -> Result<Vec<f64>> {
    let mut counts = vec![0usize; m.min(h / j.max(1)) + 1];
    for _ in 0..samples {
        counts[max_disjoint_blocks(&draw_blocks(m, h, j, rng)?)] += 1;
    }
    Ok(counts.into_iter().map(|c| c as f64 / samples as f64).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use proptest::prelude::*;

    fn brute_force(draw: &BlockDraw) -> usize {
        let s = draw.starts();
        let mut best = 0;
        for mask in 0u32..(1 << s.len()) {
            let chosen: Vec<usize> = (0..s.len()).filter(|i| mask >> i & 1 == 1).map(|i| s[i]).collect();
            let disjoint = chosen
                .iter()
                .enumerate()
                .all(|(a, x)| chosen[a + 1..].iter().all(|y| x.abs_diff(*y) >= draw.j()));
            if disjoint {
                best = best.max(chosen.len());
            }
        }
        best
    }

    /// Law of the number of distinct values over all `h^m` sequences.
    fn enumerate_law(m: usize, h: usize) -> Vec<u64> {
        let mut counts = vec![0u64; m.min(h)];
        let mut seq = vec![0usize; m];
        loop {
            let mut seen = vec![false; h];
            seq.iter().for_each(|&v| seen[v] = true);
            counts[seen.iter().filter(|&&b| b).count() - 1] += 1;
            let mut i = 0;
            loop {
                if i == m {
                    return counts;
                }
                seq[i] += 1;
                if seq[i] < h {
                    break;
                }
                seq[i] = 0;
                i += 1;
            }
        }
    }

    #[test]
    fn disjoint_examples() {
        assert_eq!(max_disjoint_blocks(&BlockDraw::new(vec![0], 3, 5).unwrap()), 1);
        assert_eq!(max_disjoint_blocks(&BlockDraw::new(vec![0, 0, 0], 2, 5).unwrap()), 1);
        assert_eq!(max_disjoint_blocks(&BlockDraw::new(vec![0, 1, 4], 3, 8).unwrap()), 2);
        assert!(BlockDraw::new(vec![6], 3, 8).is_err());
    }

    #[test]
    fn pmf_examples() {
        assert_eq!(diversity_pmf_exact(2, 2).unwrap(), vec![0.5, 0.5]);
        assert_eq!(diversity_pmf_exact(1, 17).unwrap(), vec![1.0]);
        assert_eq!(diversity_pmf_exact(3, 2).unwrap(), vec![0.25, 0.75]);
        assert!(diversity_pmf_exact(0, 3).is_err());
        assert!(diversity_pmf_exact(3, MAX_EXACT_DIVERSITY + 1).is_err());
    }

    #[test]
    fn pmf_matches_enumeration() {
        for m in 1..=6 {
            for h in 1..=6 {
                let law = enumerate_law(m, h);
                let total = (h as u64).pow(m as u32) as f64;
                let pmf = diversity_pmf_exact(m, h).unwrap();
                for (p, c) in pmf.iter().zip(&law) {
                    assert_eq!(*p, *c as f64 / total, "m={m} H={h}");
                }
            }
        }
    }

    #[test]
    fn pmf_sums_to_one_at_size() {
        for (m, h) in [(30, 30), (120, 120), (500, 200)] {
            let s: f64 = diversity_pmf_exact(m, h).unwrap().iter().sum();
            assert!((s - 1.0).abs() < 1e-12, "{m} {h} {s}");
        }
    }

    #[test]
    fn lower_tail_values() {
        let p: f64 = diversity_pmf_exact(10, 10).unwrap()[..3].iter().sum();
        assert!((p - 0.000_676_36).abs() < 1e-8, "{p}");
        let tail = |h: usize| diversity_pmf_exact(h, h).unwrap()[..h / 3].iter().sum::<f64>();
        assert!((tail(30) / 9.41e-8 - 1.0).abs() < 0.01);
    }

    #[test]
    fn estimate_edges() {
        let mut rng = stream(1);
        assert_eq!(diversity_estimate(5, 10, 2, 0, 100, &mut rng).unwrap().probability, 0.0);
        assert_eq!(diversity_estimate(50, 10, 3, 4, 100, &mut rng).unwrap().probability, 1.0);
    }

    #[test]
    fn estimate_matches_exact_law() {
        let mut rng = stream(2);
        let exact: f64 = diversity_pmf_exact(10, 10).unwrap()[..3].iter().sum();
        let est = diversity_estimate(10, 10, 1, 4, 100_000, &mut rng).unwrap();
        let se = est.std_error.max((exact * (1.0 - exact) / 100_000.0).sqrt());
        assert!((est.probability - exact).abs() < 4.0 * se, "{est:?} {exact}");
        let pmf = diversity_pmf_estimate(4, 5, 1, 50_000, &mut rng).unwrap();
        let exact = diversity_pmf_exact(4, 5).unwrap();
        for k in 1..=4 {
            assert!((pmf[k] - exact[k - 1]).abs() < 0.01);
        }
    }

    proptest! {
        #[test]
        fn greedy_is_optimal(h in 1usize..40, j in 1usize..8, raw in proptest::collection::vec(0usize..1000, 1..=12)) {
            prop_assume!(j <= h);
            let starts = raw.into_iter().map(|s| s % (h - j + 1)).collect();
            let draw = BlockDraw::new(starts, j, h).unwrap();
            let x = max_disjoint_blocks(&draw);
            prop_assert_eq!(x, brute_force(&draw));
            prop_assert!(x <= draw.starts().len().min(h / j));
        }
    }
}
