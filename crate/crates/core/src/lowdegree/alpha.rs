//! Sparse nonnegative-integer matrices viewed as bipartite multigraphs.
//!
//! Row `i` is the point node `u_i`, column `j` the coordinate node `v_j`, and
//! an entry of multiplicity `a` stands for `a` parallel edges between them.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AlphaMatrix {
    n: usize,
    p: usize,
    entries: BTreeMap<(usize, usize), u32>,
}

impl AlphaMatrix {
    pub fn zero(n: usize, p: usize) -> Self {
        Self { n, p, entries: BTreeMap::new() }
    }

    /// Builds from `(row, col, multiplicity)` triples; zero multiplicities are
    /// dropped and repeated positions add up.
    pub fn from_entries(n: usize, p: usize, entries: &[(usize, usize, u32)]) -> Result<Self> {
        let mut a = Self::zero(n, p);
        for &(i, j, m) in entries {
            if i >= n || j >= p {
                return Err(Error::DimensionMismatch(format!(
                    "entry ({i}, {j}) outside a {n}x{p} matrix"
                )));
            }
            if m > 0 {
                *a.entries.entry((i, j)).or_insert(0) += m;
            }
        }
        Ok(a)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries.get(&(i, j)).copied().unwrap_or(0)
    }

    /// Nonzero entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        self.entries.iter().map(|(&(i, j), &m)| (i, j, m))
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// `|α|`, the total number of edges.
    pub fn weight(&self) -> u32 {
        self.entries.values().sum()
    }

    /// `α! = Π α_ij!`.
    pub fn factorial(&self) -> BigUint {
        self.entries
            .values()
            .flat_map(|&m| 1..=m)
            .fold(BigUint::one(), |acc, v| acc * BigUint::from(v))
    }

    /// Sorted indices of rows with at least one edge.
    pub fn support_rows(&self) -> Vec<usize> {
        let mut rows: Vec<usize> = self.entries.keys().map(|&(i, _)| i).collect();
        rows.dedup();
        rows
    }

    /// Sorted indices of columns with at least one edge.
    pub fn support_cols(&self) -> Vec<usize> {
        let mut cols: Vec<usize> = self.entries.keys().map(|&(_, j)| j).collect();
        cols.sort_unstable();
        cols.dedup();
        cols
    }

    /// `self − other`, assuming `other ≤ self` entrywise.
    pub(crate) fn minus(&self, other: &AlphaMatrix) -> AlphaMatrix {
        let mut out = self.clone();
        for (&k, &m) in &other.entries {
            let slot = out.entries.get_mut(&k).expect("subtrahend dominated entrywise");
            *slot -= m;
            if *slot == 0 {
                out.entries.remove(&k);
            }
        }
        out
    }

    /// Canonical text encoding `i:j:m;i:j:m;...` (row-major), `-` when zero.
    pub fn encode(&self) -> String {
        if self.entries.is_empty() {
            return "-".into();
        }
        self.entries
            .iter()
            .map(|(&(i, j), &m)| format!("{i}:{j}:{m}"))
            .collect::<Vec<_>>()
            .join(";")
    }
}

impl fmt::Display for AlphaMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}[{}]", self.n, self.p, self.encode())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphStats {
    /// Non-isolated row nodes.
    pub m: usize,
    /// Non-isolated column nodes.
    pub r: usize,
    pub edges: u32,
    /// `m + r`.
    pub l: usize,
    /// Connected components among non-isolated nodes; 0 for the empty graph.
    pub cc: usize,
    pub connected: bool,
    /// Rows 0 and 1 (the two points whose co-membership is estimated) both carry edges.
    pub has_rows_1_2: bool,
    /// Smallest number of distinct row neighbours over non-isolated columns (0 if none).
    pub min_col_distinct_degree: usize,
}

pub fn graph_stats(alpha: &AlphaMatrix) -> GraphStats {
    let rows = alpha.support_rows();
    let cols = alpha.support_cols();
    let n = alpha.n();
    let mut uf = UnionFind::<usize>::new(n + alpha.p());
    let mut col_degree: BTreeMap<usize, usize> = BTreeMap::new();
    for (i, j, _) in alpha.entries() {
        uf.union(i, n + j);
        *col_degree.entry(j).or_insert(0) += 1;
    }
    let mut roots: Vec<usize> = rows.iter().map(|&i| uf.find(i)).collect();
    roots.extend(cols.iter().map(|&j| uf.find(n + j)));
    roots.sort_unstable();
    roots.dedup();
    let cc = roots.len();
    GraphStats {
        m: rows.len(),
        r: cols.len(),
        edges: alpha.weight(),
        l: rows.len() + cols.len(),
        cc,
        connected: cc == 1,
        has_rows_1_2: rows.contains(&0) && rows.contains(&1),
        min_col_distinct_degree: col_degree.values().copied().min().unwrap_or(0),
    }
}

/// True unless the cumulant of `alpha` is guaranteed to vanish: the graph must
/// be connected, contain rows 0 and 1, and every column must touch at least
/// two distinct rows.
pub fn null_cumulant_filter(alpha: &AlphaMatrix) -> Result<bool> {
    if alpha.is_zero() {
        return Err(Error::InvalidParameter(
            "the filter is undefined for α = 0 (κ₀ = 1/K)".into(),
        ));
    }
    let s = graph_stats(alpha);
    Ok(s.connected && s.has_rows_1_2 && s.min_col_distinct_degree >= 2)
}

/// Counting consequences of the filter: `m ≥ 2`, `|α| ≥ 2r`, `|α| ≥ r + m − 1`.
pub fn topology_conditions(stats: &GraphStats) -> bool {
    let e = stats.edges as usize;
    stats.m >= 2 && e >= 2 * stats.r && e + 1 >= stats.r + stats.m
}
