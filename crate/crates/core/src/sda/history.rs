/// Append-only reward history of one arm with running prefix sums.
///
/// `prefix[i]` is the sum of the first `i` rewards, so the mean of any
/// contiguous block is available in O(1).
#[derive(Debug, Clone, PartialEq)]
pub struct History {
    values: Vec<f64>,
    prefix: Vec<f64>,
}

impl Default for History {
    fn default() -> Self {
        Self::new()
    }
}

impl History {
    pub fn new() -> Self {
        Self {
            values: Vec::new(),
            prefix: vec![0.0],
        }
    }

    pub fn with_capacity(capacity: usize) -> Self {
        let mut prefix = Vec::with_capacity(capacity + 1);
        prefix.push(0.0);
        Self {
            values: Vec::with_capacity(capacity),
            prefix,
        }
    }

    pub fn from_values(values: &[f64]) -> Self {
        let mut h = Self::with_capacity(values.len());
        for &v in values {
            h.push(v);
        }
        h
    }

    pub fn push(&mut self, reward: f64) {
        let last = *self.prefix.last().expect("prefix starts at zero");
        self.values.push(reward);
        self.prefix.push(last + reward);
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn prefix(&self) -> &[f64] {
        &self.prefix
    }

    /// Value at 1-based position `i`.
    pub fn at(&self, i: usize) -> f64 {
        self.values[i - 1]
    }

    pub fn total(&self) -> f64 {
        self.prefix[self.values.len()]
    }

    /// Mean of the whole history, `NaN` when empty.
    pub fn mean(&self) -> f64 {
        self.total() / self.values.len() as f64
    }

    /// Sum over the 1-based positions `a+1..=b`.
    pub fn block_sum(&self, a: usize, b: usize) -> f64 {
        self.prefix[b] - self.prefix[a]
    }

    /// Mean over the 1-based positions `a+1..=b`.
    pub fn block_mean(&self, a: usize, b: usize) -> f64 {
        self.block_sum(a, b) / (b - a) as f64
    }
}
