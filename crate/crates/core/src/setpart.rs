//! Set partitions as restricted growth strings.
//!
//! A string `a` of length `n` with `a[0] = 0` and `a[i] ≤ 1 + max(a[..i])`
//! names each set partition of `[0, n)` exactly once.

/// Iterates restricted growth strings of length `n` with at most `max_blocks`
/// distinct values, in lexicographic order.
#[derive(Debug, Clone)]
pub struct RestrictedGrowth {
    current: Vec<usize>,
    // prefix maxima: maxes[i] = max(current[..=i])
    maxes: Vec<usize>,
    max_blocks: usize,
    started: bool,
    done: bool,
}

impl RestrictedGrowth {
    pub fn new(n: usize, max_blocks: usize) -> Self {
        Self {
            current: vec![0; n],
            maxes: vec![0; n],
            max_blocks,
            started: false,
            done: max_blocks == 0 && n > 0,
        }
    }

    /// Advances to the next string; returns `None` when exhausted.
    #[allow(clippy::should_implement_trait)]
    pub fn next(&mut self) -> Option<&[usize]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.current);
        }
        let n = self.current.len();
        let mut i = n;
        while i > 1 {
            i -= 1;
            let bound = self.maxes[i - 1] + 1;
            if self.current[i] < bound && self.current[i] + 1 < self.max_blocks {
                self.current[i] += 1;
                self.maxes[i] = self.maxes[i - 1].max(self.current[i]);
                for j in i + 1..n {
                    self.current[j] = 0;
                    self.maxes[j] = self.maxes[i];
                }
                return Some(&self.current);
            }
        }
        self.done = true;
        None
    }

    pub fn num_blocks(&self) -> usize {
        self.maxes.last().map_or(0, |&m| m + 1)
    }
}

/// Calls `f(labels, num_blocks)` for every partition of `[0, n)` into at most
/// `max_blocks` blocks.
pub fn for_each_partition(n: usize, max_blocks: usize, mut f: impl FnMut(&[usize], usize)) {
    let mut it = RestrictedGrowth::new(n, max_blocks);
    while let Some(labels) = it.next() {
        let blocks = if labels.is_empty() { 0 } else { labels.iter().max().unwrap() + 1 };
        f(labels, blocks);
    }
}

/// Bell number `B(n)` (number of set partitions of `n` elements).
pub fn bell(n: usize) -> u128 {
    let mut row = vec![1u128];
    for _ in 0..n {
        let mut next = vec![*row.last().unwrap()];
        for v in &row {
            let last = *next.last().unwrap();
            next.push(last + v);
        }
        row = next;
    }
    row[0]
}
