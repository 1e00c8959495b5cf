use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::Algorithm;
use crate::cluster::{exact_kmeans, lloyd, single_linkage, spectral_cluster, ExactKMeansOptions};
use crate::error::{Error, Result};
use crate::matrix::{squared_distance, Matrix};
use crate::metrics::misclassification_error;
use crate::model::{hypercube_packing, sample_fixed_means};
use crate::partition::Partition;
use crate::rng::derive_seed;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RecoveryPoint {
    pub delta_sq: f64,
    pub exact_recovery_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecoveryCurve {
    pub algorithm: Algorithm,
    pub n: usize,
    pub p: usize,
    #[serde(rename = "K")]
    pub k: usize,
    pub trials: usize,
    /// Sorted by `delta_sq`.
    pub points: Vec<RecoveryPoint>,
    /// Largest deviation of the rates from their nondecreasing least-squares fit.
    pub isotonic_residual: f64,
}

impl RecoveryCurve {
    /// CSV with columns `delta_sq,exact_recovery_rate`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for pt in &self.points {
            w.serialize(pt)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Pool-adjacent-violators fit of a nondecreasing sequence (unit weights).
pub fn isotonic_fit(values: &[f64]) -> Vec<f64> {
    // blocks of (sum, count)
    let mut blocks: Vec<(f64, usize)> = Vec::with_capacity(values.len());
    for &v in values {
        blocks.push((v, 1));
        while blocks.len() > 1 {
            let (s1, c1) = blocks[blocks.len() - 1];
            let (s0, c0) = blocks[blocks.len() - 2];
            if s0 / c0 as f64 <= s1 / c1 as f64 {
                break;
            }
            blocks.pop();
            *blocks.last_mut().unwrap() = (s0 + s1, c0 + c1);
        }
    }
    blocks.into_iter().flat_map(|(s, c)| std::iter::repeat(s / c as f64).take(c)).collect()
}

pub fn isotonic_residual(values: &[f64]) -> f64 {
    isotonic_fit(values).iter().zip(values).map(|(f, v)| (f - v).abs()).fold(0.0, f64::max)
}

/// Packing means rescaled so that the minimum normalized separation (σ = 1)
/// equals `delta_sq` exactly.
pub fn means_with_separation(k: usize, p: usize, delta_sq: f64) -> Result<Matrix> {
    if !(delta_sq >= 0.0 && delta_sq.is_finite()) {
        return Err(Error::InvalidParameter(format!("Δ² must be nonnegative, got {delta_sq}")));
    }
    let base = hypercube_packing(k, p, 1.0, 1.0)?;
    if k < 2 {
        return Ok(Matrix::zeros(k, p));
    }
    let mut min_sq = f64::INFINITY;
    for l in 0..k {
        for r in l + 1..k {
            min_sq = min_sq.min(squared_distance(base.row(l), base.row(r)) / 2.0);
        }
    }
    let scale = (delta_sq / min_sq).sqrt();
    let data = base.as_slice().iter().map(|v| v * scale).collect();
    Matrix::from_vec(k, p, data)
}

/// Fraction of trials with `err = 0` at each separation in `delta_grid`.
///
/// Labels are balanced (`i mod K`) and, for a given trial, the noise and the
/// algorithm seed are the same at every grid point, so the curve varies only
/// through the means.
pub fn recovery_curve(
    n: usize,
    p: usize,
    k: usize,
    delta_grid: &[f64],
    algorithm: Algorithm,
    trials: usize,
    seed: u64,
) -> Result<RecoveryCurve> {
    if trials == 0 || delta_grid.is_empty() {
        return Err(Error::InvalidParameter("need at least one trial and one grid point".into()));
    }
    if k == 0 || n < k {
        return Err(Error::InvalidParameter(format!("need 1 ≤ K ≤ n (n={n}, K={k})")));
    }
    if algorithm == Algorithm::ExactKmeans && n > ExactKMeansOptions::default().n_max {
        return Err(Error::InvalidParameter(format!("exact K-means is infeasible at n={n}")));
    }
    let mut grid = delta_grid.to_vec();
    grid.sort_by(f64::total_cmp);
    let labels = Partition::new((0..n).map(|i| i % k).collect(), k)?;
    let means: Vec<Matrix> = grid.iter().map(|&d| means_with_separation(k, p, d)).collect::<Result<_>>()?;
    let tasks: Vec<(usize, usize)> = (0..grid.len()).flat_map(|g| (0..trials).map(move |t| (g, t))).collect();
    let hits: Vec<bool> = tasks
        .par_iter()
        .map(|&(g, t)| -> Result<bool> {
            let inst = sample_fixed_means(&means[g], &labels, 1.0, derive_seed(seed, &[t as u64]))?;
            let alg_seed = derive_seed(seed, &[t as u64, algorithm.id()]);
            let est = match algorithm {
                Algorithm::ExactKmeans => exact_kmeans(&inst.data, k, ExactKMeansOptions::default())?.partition,
                Algorithm::Lloyd => lloyd(&inst.data, k, 10, 100, alg_seed)?.partition,
                Algorithm::SingleLinkage => single_linkage(&inst.data, k)?,
                Algorithm::Spectral => spectral_cluster(&inst.data, k, alg_seed)?,
            };
            Ok(misclassification_error(&est, &labels)? == 0.0)
        })
        .collect::<Result<_>>()?;
    let points: Vec<RecoveryPoint> = grid
        .iter()
        .enumerate()
        .map(|(g, &delta_sq)| {
            let ok = hits[g * trials..(g + 1) * trials].iter().filter(|&&h| h).count();
            RecoveryPoint { delta_sq, exact_recovery_rate: ok as f64 / trials as f64 }
        })
        .collect();
    let rates: Vec<f64> = points.iter().map(|p| p.exact_recovery_rate).collect();
    Ok(RecoveryCurve {
        algorithm,
        n,
        p,
        k,
        trials,
        isotonic_residual: isotonic_residual(&rates),
        points,
    })
}
