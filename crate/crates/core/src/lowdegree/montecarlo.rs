//! Sampling oracles: Monte Carlo moments of the noiseless signal and a
//! held-out least-squares estimate of the degree-`D` MMSE.

use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::alpha::AlphaMatrix;
use crate::error::{Error, Result};
use crate::model::sample_bernoulli_prior;
use crate::rng::{derive_seed, stream_rng};

const MC_CHUNK: u64 = 1 << 16;
pub const MIN_MC_SAMPLES: u64 = 1000;
pub const FEATURE_BUDGET: usize = 2000;
const BOOTSTRAP_RESAMPLES: usize = 200;
const RIDGE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub estimate: f64,
    pub stderr: f64,
}

/// Monte Carlo estimate of `E[X^γ]` for noiseless `X = Aμ̲` with uniform labels
/// and `±ε` mean entries.
pub fn mc_moment(gamma: &AlphaMatrix, k: u64, eps: f64, samples: u64, seed: u64) -> Result<Estimate> {
    if k == 0 {
        return Err(Error::InvalidParameter("K must be positive".into()));
    }
    if samples < MIN_MC_SAMPLES {
        return Err(Error::InvalidParameter(format!(
            "at least {MIN_MC_SAMPLES} samples required, got {samples}"
        )));
    }
    let rows = gamma.support_rows();
    let cols = gamma.support_cols();
    if cols.len() > 64 {
        return Err(Error::TooLarge(format!("{} support columns (limit 64)", cols.len())));
    }
    let mut odd = vec![0u64; rows.len()];
    for (i, j, m) in gamma.entries() {
        if m % 2 == 1 {
            let r = rows.binary_search(&i).expect("support row");
            let c = cols.binary_search(&j).expect("support column");
            odd[r] ^= 1 << c;
        }
    }
    let m = rows.len();
    let chunks = samples.div_ceil(MC_CHUNK);
    // Number of draws with a negative product, per chunk.
    let negatives: u64 = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let len = MC_CHUNK.min(samples - c * MC_CHUNK);
            let mut rng = stream_rng(derive_seed(seed, &[c]), 0);
            let mut labels = vec![0u64; m];
            let mut signs = vec![0u64; m];
            let mut neg = 0;
            for _ in 0..len {
                let mut parity = 0u32;
                for r in 0..m {
                    labels[r] = rng.gen_range(0..k);
                    // rows sharing a label share the sign vector of their group
                    signs[r] = match (0..r).find(|&q| labels[q] == labels[r]) {
                        Some(q) => signs[q],
                        None => rng.gen(),
                    };
                    parity ^= (odd[r] & signs[r]).count_ones() & 1;
                }
                neg += u64::from(parity);
            }
            neg
        })
        .sum();
    let scale = eps.powi(gamma.weight() as i32);
    let nf = samples as f64;
    let mean = 1.0 - 2.0 * negatives as f64 / nf;
    let var = (1.0 - mean * mean) * nf / (nf - 1.0);
    Ok(Estimate { estimate: scale * mean, stderr: scale.abs() * (var.max(0.0) / nf).sqrt() })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalMmse {
    pub estimate: f64,
    pub stderr: f64,
    pub features: usize,
    pub train: usize,
    pub test: usize,
    /// Whether the normal equations fell back to the ridge-regularized solve.
    pub ridge_fallback: bool,
}

/// All monomials of degree ≤ `d` in `v` variables, as sorted index multisets.
fn monomials(v: usize, d: u32) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::<usize>::new()];
    for _ in 0..d {
        let mut next = Vec::new();
        for mono in &frontier {
            let start = mono.last().copied().unwrap_or(0);
            for j in start..v {
                let mut m = mono.clone();
                m.push(j);
                next.push(m);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Held-out MSE of the least-squares degree-`D` polynomial predictor of
/// `x = 1{k₀ = k₁}` from `Y`, under the Bernoulli prior with `σ = 1`.
///
/// The first half of the draws trains, the second half tests; the standard
/// error is a bootstrap over test residuals.
pub fn empirical_mmse(
    n: usize,
    p: usize,
    k: usize,
    delta_bar_sq: f64,
    d: u32,
    samples: usize,
    seed: u64,
) -> Result<EmpiricalMmse> {
    if n < 2 {
        return Err(Error::InvalidParameter("x needs n ≥ 2".into()));
    }
    let count = super::enumerate::count_alphas(n, p, d);
    if count > FEATURE_BUDGET as u128 {
        return Err(Error::BudgetExceeded(format!(
            "{count} monomial features exceed the budget {FEATURE_BUDGET}"
        )));
    }
    let monos = monomials(n * p, d);
    let f = monos.len();
    if samples < 10 * f {
        return Err(Error::InvalidParameter(format!(
            "{samples} samples for {f} features; need at least {}",
            10 * f
        )));
    }
    let draw = |s: usize| -> Result<(Vec<f64>, f64)> {
        let inst = sample_bernoulli_prior(n, p, k, delta_bar_sq, 1.0, derive_seed(seed, &[s as u64]))?;
        let y = inst.data.as_slice();
        let phi = monos.iter().map(|m| m.iter().map(|&j| y[j]).product()).collect();
        let x = f64::from(inst.labels.label(0) == inst.labels.label(1));
        Ok((phi, x))
    };
    let rows: Vec<(Vec<f64>, f64)> = (0..samples).into_par_iter().map(draw).collect::<Result<_>>()?;
    let train = samples / 2;
    let (fit, test) = rows.split_at(train);

    let mut gram = DMatrix::<f64>::zeros(f, f);
    let mut rhs = DVector::<f64>::zeros(f);
    for (phi, x) in fit {
        for a in 0..f {
            rhs[a] += phi[a] * x;
            for b in a..f {
                gram[(a, b)] += phi[a] * phi[b];
            }
        }
    }
    for a in 0..f {
        for b in 0..a {
            gram[(a, b)] = gram[(b, a)];
        }
    }
    let scale = gram.diagonal().max().max(f64::MIN_POSITIVE);
    let svd = gram.clone().svd(true, true);
    let (coef, ridge_fallback) = match svd.solve(&rhs, 1e-12 * scale) {
        Ok(c) if c.iter().all(|v| v.is_finite()) => (c, false),
        _ => {
            let reg = gram + DMatrix::identity(f, f) * (RIDGE * scale);
            let chol = reg
                .cholesky()
                .ok_or_else(|| Error::InvalidParameter("normal equations are singular".into()))?;
            (chol.solve(&rhs), true)
        }
    };

    let residuals: Vec<f64> = test
        .iter()
        .map(|(phi, x)| {
            let pred: f64 = phi.iter().zip(coef.iter()).map(|(a, b)| a * b).sum();
            (x - pred).powi(2)
        })
        .collect();
    let t = residuals.len();
    let estimate = residuals.iter().sum::<f64>() / t as f64;
    let mut rng = stream_rng(derive_seed(seed, &[u64::MAX]), 0);
    let boots: Vec<f64> = (0..BOOTSTRAP_RESAMPLES)
        .map(|_| (0..t).map(|_| *residuals.choose(&mut rng).expect("nonempty")).sum::<f64>() / t as f64)
        .collect();
    let bm = boots.iter().sum::<f64>() / boots.len() as f64;
    let bv = boots.iter().map(|b| (b - bm).powi(2)).sum::<f64>() / (boots.len() - 1) as f64;
    Ok(EmpiricalMmse { estimate, stderr: bv.sqrt(), features: f, train, test: t, ridge_fallback })
}
