//! Sub-sampling rules `SP(m, n, r)`.
//!
//! The four independent samplers (RB, WR, LB, LDS) only see lengths, the round
//! and a random stream, never rewards. SSMC's block rule reads the leader's
//! history and is kept apart as [`ssmc_select`].

use std::collections::HashMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::sda::History;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Positions {
    /// `start+1..=start+len`
    Block { start: usize, len: usize },
    /// Sorted, distinct, 1-based.
    Sparse(Vec<usize>),
}

/// A size-`n` subset of the 1-based positions `1..=m` of a history.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexSubset {
    m: usize,
    positions: Positions,
}

impl IndexSubset {
    /// The block `{start+1, ..., start+len}` inside `1..=m`.
    pub fn block(m: usize, start: usize, len: usize) -> Result<Self> {
        check_sizes(m, len)?;
        if start + len > m {
            return Err(Error::InvalidArgument(format!(
                "block at offset {start} of length {len} leaves 1..={m}"
            )));
        }
        Ok(Self {
            m,
            positions: Positions::Block { start, len },
        })
    }

    /// An arbitrary subset; positions are sorted and checked.
    pub fn from_positions(m: usize, mut positions: Vec<usize>) -> Result<Self> {
        check_sizes(m, positions.len())?;
        positions.sort_unstable();
        if positions[0] == 0 || *positions.last().unwrap() > m || positions.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidArgument("positions must be distinct and within 1..=m".into()));
        }
        Ok(Self {
            m,
            positions: Positions::Sparse(positions),
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        match &self.positions {
            Positions::Block { len, .. } => *len,
            Positions::Sparse(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Offset `n0` of a contiguous subset `{n0+1, ..., n0+n}`.
    pub fn block_start(&self) -> Option<usize> {
        match &self.positions {
            Positions::Block { start, .. } => Some(*start),
            Positions::Sparse(v) => {
                let contiguous = v.windows(2).all(|w| w[1] == w[0] + 1);
                contiguous.then(|| v[0] - 1)
            }
        }
    }

    pub fn is_contiguous(&self) -> bool {
        self.block_start().is_some()
    }

    /// Sorted 1-based positions.
    pub fn indices(&self) -> Vec<usize> {
        match &self.positions {
            Positions::Block { start, len } => (start + 1..=start + len).collect(),
            Positions::Sparse(v) => v.clone(),
        }
    }

    /// Empirical mean of `history` over this subset.
    pub fn mean_in(&self, history: &History) -> f64 {
        match &self.positions {
            Positions::Block { start, len } => history.block_mean(*start, start + len),
            Positions::Sparse(v) => v.iter().map(|&i| history.at(i)).sum::<f64>() / v.len() as f64,
        }
    }
}

fn check_sizes(m: usize, n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::EmptySubset);
    }
    if n > m {
        return Err(Error::SubsetTooLarge { m, n });
    }
    Ok(())
}

/// Sampler choice for an SDA engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SamplerKind {
    Rb,
    Wr,
    Lb,
    Lds,
    Ssmc,
}

impl SamplerKind {
    pub const ALL: [SamplerKind; 5] = [SamplerKind::Rb, SamplerKind::Wr, SamplerKind::Lb, SamplerKind::Lds, SamplerKind::Ssmc];

    pub fn name(self) -> &'static str {
        match self {
            SamplerKind::Rb => "RB",
            SamplerKind::Wr => "WR",
            SamplerKind::Lb => "LB",
            SamplerKind::Lds => "LDS",
            SamplerKind::Ssmc => "SSMC",
        }
    }

    /// The reward-independent sampler behind this kind, if any.
    pub fn independent(self) -> Option<IndependentSampler> {
        match self {
            SamplerKind::Rb => Some(IndependentSampler::Rb),
            SamplerKind::Wr => Some(IndependentSampler::Wr),
            SamplerKind::Lb => Some(IndependentSampler::Lb),
            SamplerKind::Lds => Some(IndependentSampler::Lds),
            SamplerKind::Ssmc => None,
        }
    }
}

/// Samplers whose output does not depend on rewards.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndependentSampler {
    Rb,
    Wr,
    Lb,
    Lds,
}

impl IndependentSampler {
    /// Draws `SP(m, n, round)`.
    pub fn draw<R: Rng + ?Sized>(self, m: usize, n: usize, round: u64, rng: &mut R) -> Result<IndexSubset> {
        match self {
            IndependentSampler::Rb => rb_sample(m, n, rng),
            IndependentSampler::Wr => wr_sample(m, n, rng),
            IndependentSampler::Lb => lb_sample(m, n),
            IndependentSampler::Lds => lds_sample(m, n, round),
        }
    }
}

/// Random Block: `n0` uniform on `{0, ..., m-n}`, block `{n0+1, ..., n0+n}`.
pub fn rb_sample<R: Rng + ?Sized>(m: usize, n: usize, rng: &mut R) -> Result<IndexSubset> {
    check_sizes(m, n)?;
    let start = if m == n { 0 } else { rng.random_range(0..=m - n) };
    IndexSubset::block(m, start, n)
}

/// Sampling without replacement: a uniform size-`n` subset of `1..=m`.
pub fn wr_sample<R: Rng + ?Sized>(m: usize, n: usize, rng: &mut R) -> Result<IndexSubset> {
    check_sizes(m, n)?;
    if m == n {
        return IndexSubset::block(m, 0, n);
    }
    let mut positions: Vec<usize> = rand::seq::index::sample(rng, m, n).into_iter().map(|i| i + 1).collect();
    positions.sort_unstable();
    Ok(IndexSubset {
        m,
        positions: Positions::Sparse(positions),
    })
}

/// Last Block: `{m-n+1, ..., m}`.
pub fn lb_sample(m: usize, n: usize) -> Result<IndexSubset> {
    check_sizes(m, n)?;
    IndexSubset::block(m, m - n, n)
}

/// Base-2 radical inverse of `r` (the van der Corput sequence).
pub fn van_der_corput(mut r: u64) -> f64 {
    let mut value = 0.0;
    let mut scale = 0.5;
    while r > 0 {
        if r & 1 == 1 {
            value += scale;
        }
        r >>= 1;
        scale *= 0.5;
    }
    value
}

/// Low Discrepancy Sampling: block starting at `ceil(u_r (m-n))`.
pub fn lds_sample(m: usize, n: usize, round: u64) -> Result<IndexSubset> {
    check_sizes(m, n)?;
    let span = (m - n) as f64;
    let start = (van_der_corput(round) * span).ceil() as usize;
    IndexSubset::block(m, start.min(m - n), n)
}

/// SSMC block rule: the length-`n` block of `leader` with the smallest mean,
/// ties going to the earliest block.
pub fn ssmc_select(leader: &History, n: usize) -> Result<IndexSubset> {
    let m = leader.len();
    check_sizes(m, n)?;
    let (start, _) = scan_min_block(leader, n, 0, (0, f64::INFINITY));
    IndexSubset::block(m, start, n)
}

fn scan_min_block(history: &History, n: usize, from: usize, mut best: (usize, f64)) -> (usize, f64) {
    let prefix = history.prefix();
    for start in from..=history.len() - n {
        let sum = prefix[start + n] - prefix[start];
        if sum < best.1 {
            best = (start, sum);
        }
    }
    best
}

/// Incremental [`ssmc_select`] for one append-only history.
///
/// Results for each block length are cached together with the history length
/// they were computed at, so a later query only scans the newly appended blocks.
#[derive(Debug, Clone, Default)]
pub struct SsmcCache {
    by_len: HashMap<usize, (usize, usize, f64)>,
}

impl SsmcCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn select(&mut self, history: &History, n: usize) -> Result<IndexSubset> {
        let m = history.len();
        check_sizes(m, n)?;
        let (start, sum) = match self.by_len.get(&n) {
            Some(&(seen, start, sum)) if seen <= m => scan_min_block(history, n, seen - n + 1, (start, sum)),
            _ => scan_min_block(history, n, 0, (0, f64::INFINITY)),
        };
        self.by_len.insert(n, (m, start, sum));
        IndexSubset::block(m, start, n)
    }
}
