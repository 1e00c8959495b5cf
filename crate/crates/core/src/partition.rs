//! Label assignments of `n` points to `K` groups.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A partition of `[0, n)` given by one label per point, each label in `[0, k)`.
///
/// Groups may be empty; `k` is the number of admissible labels, not the number
/// of groups in use.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawPartition")]
pub struct Partition {
    labels: Vec<usize>,
    k: usize,
}

#[derive(Deserialize)]
struct RawPartition {
    labels: Vec<usize>,
    k: usize,
}

impl TryFrom<RawPartition> for Partition {
    type Error = Error;

    fn try_from(raw: RawPartition) -> Result<Self> {
        Partition::new(raw.labels, raw.k)
    }
}

impl Partition {
    pub fn new(labels: Vec<usize>, k: usize) -> Result<Self> {
        if let Some((i, &l)) = labels.iter().enumerate().find(|(_, &l)| l >= k) {
            return Err(Error::InvalidParameter(format!(
                "label {l} of point {i} is outside [0, {k})"
            )));
        }
        Ok(Self { labels, k })
    }

    /// Builds a partition whose label range is `0..=max(labels)`.
    pub fn from_labels(labels: Vec<usize>) -> Self {
        let k = labels.iter().max().map_or(0, |&m| m + 1);
        Self { labels, k }
    }

    /// Partition from explicit groups of point indices covering `[0, n)`.
    pub fn from_groups(n: usize, groups: &[Vec<usize>]) -> Result<Self> {
        let mut labels = vec![usize::MAX; n];
        for (g, members) in groups.iter().enumerate() {
            for &i in members {
                if i >= n || labels[i] != usize::MAX {
                    return Err(Error::InvalidParameter(format!(
                        "point {i} is out of range or assigned twice"
                    )));
                }
                labels[i] = g;
            }
        }
        if let Some(i) = labels.iter().position(|&l| l == usize::MAX) {
            return Err(Error::InvalidParameter(format!("point {i} is not assigned")));
        }
        Ok(Self { labels, k: groups.len() })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    #[inline]
    pub fn label(&self, i: usize) -> usize {
        self.labels[i]
    }

    /// Sizes of all `k` groups, including empty ones.
    pub fn group_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &l in &self.labels {
            sizes[l] += 1;
        }
        sizes
    }

    /// Member lists of all `k` groups, including empty ones.
    pub fn groups(&self) -> Vec<Vec<usize>> {
        let mut groups = vec![Vec::new(); self.k];
        for (i, &l) in self.labels.iter().enumerate() {
            groups[l].push(i);
        }
        groups
    }

    pub fn num_nonempty(&self) -> usize {
        self.group_sizes().iter().filter(|&&s| s > 0).count()
    }

    /// Relabels groups in order of first occurrence, so that equal partitions
    /// have equal label vectors. `k` is kept.
    pub fn canonical(&self) -> Self {
        let mut map = vec![usize::MAX; self.k];
        let mut next = 0;
        let labels = self
            .labels
            .iter()
            .map(|&l| {
                if map[l] == usize::MAX {
                    map[l] = next;
                    next += 1;
                }
                map[l]
            })
            .collect();
        Self { labels, k: self.k }
    }

    /// First-occurrence relabeling with the label range set to `k`.
    pub fn canonical_with_k(&self, k: usize) -> Result<Self> {
        Partition::new(self.canonical().labels, k)
    }

    /// Same grouping of points, ignoring label names and `k`.
    pub fn same_grouping(&self, other: &Partition) -> bool {
        self.len() == other.len() && self.canonical().labels == other.canonical().labels
    }
}
