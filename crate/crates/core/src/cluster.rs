//! Clustering algorithms: exact K-means by branch and bound, Lloyd with
//! distance-squared seeding, single-linkage agglomeration, and a spectral
//! baseline on the Gram matrix.
//!
//! Every algorithm returns a partition relabeled in first-occurrence order.

use std::time::{Duration, Instant};

use nalgebra::linalg::SymmetricEigen;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{squared_distance, Matrix};
use crate::metrics::kmeans_criterion;
use crate::partition::Partition;
use crate::rng::{derive_seed, stream_rng};
use crate::setpart::RestrictedGrowth;

/// Relative tolerance on criterion comparisons during the exact search.
const CRIT_RTOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactKMeansOptions {
    /// Largest `n` searched without a time budget.
    pub n_max: usize,
    pub time_budget: Option<Duration>,
}

impl Default for ExactKMeansOptions {
    fn default() -> Self {
        Self { n_max: 14, time_budget: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactKMeansResult {
    pub partition: Partition,
    pub criterion: f64,
    /// False when the time budget ran out before the search completed.
    pub optimal: bool,
    pub nodes: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LloydResult {
    pub partition: Partition,
    pub criterion: f64,
    /// Criterion after each update step of the winning restart.
    pub history: Vec<f64>,
}

fn check_k(data: &Matrix, k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidParameter("K must be at least 1".into()));
    }
    if data.rows() == 0 {
        return Err(Error::InvalidParameter("no data points".into()));
    }
    Ok(())
}

/// Global minimizer of the K-means criterion over partitions into at most `k`
/// nonempty groups.
///
/// Depth-first search over restricted growth strings; a branch is cut as soon
/// as its partial criterion (which can only grow as points are added) reaches
/// the incumbent. The incumbent starts from a Lloyd run.
pub fn exact_kmeans(data: &Matrix, k: usize, opts: ExactKMeansOptions) -> Result<ExactKMeansResult> {
    check_k(data, k)?;
    let n = data.rows();
    if n > opts.n_max && opts.time_budget.is_none() {
        return Err(Error::TooLarge(format!(
            "exact K-means on n={n} points needs a time budget (n_max={})",
            opts.n_max
        )));
    }
    let seed_run = lloyd(data, k, 4, 100, 0x5eed)?;
    let mut search = BranchAndBound {
        data,
        k,
        counts: vec![0; k],
        sums: vec![vec![0.0; data.cols()]; k],
        labels: vec![0; n],
        best_labels: seed_run.partition.labels().to_vec(),
        best_cost: seed_run.criterion,
        nodes: 0,
        deadline: opts.time_budget.map(|b| Instant::now() + b),
        timed_out: false,
    };
    search.descend(0, 0, 0.0);
    let partition = Partition::new(search.best_labels, k)?.canonical();
    let criterion = kmeans_criterion(data, &partition)?;
    Ok(ExactKMeansResult { partition, criterion, optimal: !search.timed_out, nodes: search.nodes })
}

struct BranchAndBound<'a> {
    data: &'a Matrix,
    k: usize,
    counts: Vec<usize>,
    sums: Vec<Vec<f64>>,
    labels: Vec<usize>,
    best_labels: Vec<usize>,
    best_cost: f64,
    nodes: u64,
    deadline: Option<Instant>,
    timed_out: bool,
}

impl BranchAndBound<'_> {
    fn cutoff(&self) -> f64 {
        self.best_cost - CRIT_RTOL * self.best_cost.abs()
    }

    // Increase of the criterion when `x` joins group `g`: c/(c+1)·‖x − mean‖².
    fn join_cost(&self, g: usize, x: &[f64]) -> f64 {
        let c = self.counts[g];
        if c == 0 {
            return 0.0;
        }
        let cf = c as f64;
        let d: f64 = x.iter().zip(&self.sums[g]).map(|(v, s)| (v - s / cf).powi(2)).sum();
        cf / (cf + 1.0) * d
    }

    fn descend(&mut self, i: usize, used: usize, cost: f64) {
        self.nodes += 1;
        if self.timed_out {
            return;
        }
        if self.nodes % 4096 == 0 {
            if let Some(d) = self.deadline {
                if Instant::now() >= d {
                    self.timed_out = true;
                    return;
                }
            }
        }
        let n = self.data.rows();
        if i == n {
            if cost < self.cutoff() {
                self.best_cost = cost;
                self.best_labels.clone_from(&self.labels);
            }
            return;
        }
        let x = self.data.row(i);
        let limit = (used + 1).min(self.k);
        for g in 0..limit {
            let next = cost + self.join_cost(g, x);
            if next >= self.cutoff() {
                continue;
            }
            self.counts[g] += 1;
            for (s, v) in self.sums[g].iter_mut().zip(x) {
                *s += v;
            }
            self.labels[i] = g;
            self.descend(i + 1, used.max(g + 1), next);
            self.counts[g] -= 1;
            for (s, v) in self.sums[g].iter_mut().zip(x) {
                *s -= v;
            }
        }
    }
}

/// Exhaustive minimization over every partition into at most `k` groups, with
/// no pruning. Bell-number cost; used as an oracle for [`exact_kmeans`].
pub fn exact_kmeans_enumerate(data: &Matrix, k: usize) -> Result<(Partition, f64)> {
    check_k(data, k)?;
    let n = data.rows();
    let mut it = RestrictedGrowth::new(n, k);
    let mut best: Option<(Vec<usize>, f64)> = None;
    while let Some(labels) = it.next() {
        let part = Partition::new(labels.to_vec(), k)?;
        let c = kmeans_criterion(data, &part)?;
        if best.as_ref().map_or(true, |(_, b)| c < *b) {
            best = Some((labels.to_vec(), c));
        }
    }
    let (labels, c) = best.expect("at least one partition");
    Ok((Partition::new(labels, k)?, c))
}

/// Lloyd iterations from `restarts` distance-squared-weighted seedings; the
/// run with the lowest criterion wins (ties to the lowest restart index).
pub fn lloyd(data: &Matrix, k: usize, restarts: usize, max_iters: usize, seed: u64) -> Result<LloydResult> {
    check_k(data, k)?;
    let n = data.rows();
    if k >= n {
        let partition = Partition::new((0..n).collect(), k)?;
        return Ok(LloydResult { partition, criterion: 0.0, history: vec![0.0] });
    }
    let runs: Vec<(Vec<usize>, Vec<f64>)> = (0..restarts.max(1))
        .into_par_iter()
        .map(|r| lloyd_single(data, k, max_iters, derive_seed(seed, &[r as u64])))
        .collect();
    let (labels, history) = runs
        .into_iter()
        .min_by(|a, b| a.1.last().unwrap().total_cmp(b.1.last().unwrap()))
        .expect("at least one restart");
    let partition = Partition::new(labels, k)?.canonical();
    let criterion = kmeans_criterion(data, &partition)?;
    Ok(LloydResult { partition, criterion, history })
}

fn seed_centers(data: &Matrix, k: usize, rng: &mut impl Rng) -> Vec<Vec<f64>> {
    let n = data.rows();
    let mut centers = vec![data.row(rng.gen_range(0..n)).to_vec()];
    let mut d2: Vec<f64> = (0..n).map(|i| squared_distance(data.row(i), &centers[0])).collect();
    while centers.len() < k {
        let total: f64 = d2.iter().sum();
        let pick = if total > 0.0 {
            let mut u = rng.gen::<f64>() * total;
            let mut chosen = n - 1;
            for (i, &w) in d2.iter().enumerate() {
                if u < w {
                    chosen = i;
                    break;
                }
                u -= w;
            }
            chosen
        } else {
            rng.gen_range(0..n)
        };
        let c = data.row(pick).to_vec();
        for (i, d) in d2.iter_mut().enumerate() {
            *d = d.min(squared_distance(data.row(i), &c));
        }
        centers.push(c);
    }
    centers
}

fn nearest(x: &[f64], centers: &[Vec<f64>]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (g, c) in centers.iter().enumerate() {
        let d = squared_distance(x, c);
        if d < best.1 {
            best = (g, d);
        }
    }
    best
}

fn update_centers(data: &Matrix, labels: &[usize], k: usize) -> (Vec<Vec<f64>>, Vec<usize>) {
    let p = data.cols();
    let mut centers = vec![vec![0.0; p]; k];
    let mut counts = vec![0usize; k];
    for (i, &l) in labels.iter().enumerate() {
        counts[l] += 1;
        for (c, v) in centers[l].iter_mut().zip(data.row(i)) {
            *c += v;
        }
    }
    for (c, &m) in centers.iter_mut().zip(&counts) {
        if m > 0 {
            c.iter_mut().for_each(|v| *v /= m as f64);
        }
    }
    (centers, counts)
}

fn lloyd_single(data: &Matrix, k: usize, max_iters: usize, seed: u64) -> (Vec<usize>, Vec<f64>) {
    let n = data.rows();
    let mut rng = stream_rng(seed, 0);
    let mut centers = seed_centers(data, k, &mut rng);
    let mut labels = vec![usize::MAX; n];
    let mut history = Vec::new();
    for _ in 0..max_iters.max(1) {
        let mut changed = false;
        for i in 0..n {
            let (g, _) = nearest(data.row(i), &centers);
            if labels[i] != g {
                labels[i] = g;
                changed = true;
            }
        }
        let (mut new_centers, mut counts) = update_centers(data, &labels, k);
        // Re-seed empty clusters with the point farthest from its center,
        // taken from a group that keeps at least one member.
        while let Some(empty) = counts.iter().position(|&c| c == 0) {
            let far = (0..n)
                .filter(|&i| counts[labels[i]] > 1)
                .max_by(|&a, &b| {
                    let da = squared_distance(data.row(a), &new_centers[labels[a]]);
                    let db = squared_distance(data.row(b), &new_centers[labels[b]]);
                    da.total_cmp(&db).then(b.cmp(&a))
                })
                .expect("k < n leaves a group with two members");
            labels[far] = empty;
            changed = true;
            (new_centers, counts) = update_centers(data, &labels, k);
        }
        centers = new_centers;
        let crit: f64 = (0..n).map(|i| squared_distance(data.row(i), &centers[labels[i]])).sum();
        history.push(crit);
        if !changed {
            break;
        }
    }
    (labels, history)
}

/// Single-linkage agglomeration: start from singletons and repeatedly merge
/// the two groups with the smallest minimum pairwise squared distance until
/// `k` groups remain. Ties go to the lexicographically smallest pair of group
/// representatives (each group is represented by its smallest member).
pub fn single_linkage(data: &Matrix, k: usize) -> Result<Partition> {
    check_k(data, k)?;
    let n = data.rows();
    if k > n {
        return Err(Error::InvalidParameter(format!("K={k} exceeds n={n}")));
    }
    let mut link = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let d = squared_distance(data.row(i), data.row(j));
            link[i][j] = d;
            link[j][i] = d;
        }
    }
    let mut rep: Vec<usize> = (0..n).collect();
    let mut active = vec![true; n];
    for _ in 0..n - k {
        let mut best = (usize::MAX, usize::MAX, f64::INFINITY);
        for a in 0..n {
            if !active[a] {
                continue;
            }
            for b in a + 1..n {
                if active[b] && link[a][b] < best.2 {
                    best = (a, b, link[a][b]);
                }
            }
        }
        let (a, b, _) = best;
        active[b] = false;
        for c in 0..n {
            if active[c] && c != a {
                let v = link[a][c].min(link[b][c]);
                link[a][c] = v;
                link[c][a] = v;
            }
        }
        for r in rep.iter_mut() {
            if *r == b {
                *r = a;
            }
        }
    }
    Partition::new(rep, n)?.canonical_with_k(k)
}

/// Top-`k` eigenvectors of `YYᵀ` as an embedding, then Lloyd in that space.
pub fn spectral_cluster(data: &Matrix, k: usize, seed: u64) -> Result<Partition> {
    check_k(data, k)?;
    let n = data.rows();
    if k > n {
        return Err(Error::InvalidParameter(format!("K={k} exceeds n={n}")));
    }
    let y = data.to_nalgebra();
    let gram = &y * y.transpose();
    let eig = SymmetricEigen::try_new(gram, 1e-12, 10_000)
        .ok_or_else(|| Error::Eigen("symmetric eigensolver did not converge".into()))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]).then(a.cmp(&b)));
    let mut emb = Matrix::zeros(n, k);
    for (c, &idx) in order.iter().take(k).enumerate() {
        for i in 0..n {
            emb.set(i, c, eig.eigenvectors[(i, idx)]);
        }
    }
    Ok(lloyd(&emb, k, 10, 100, seed)?.partition)
}
