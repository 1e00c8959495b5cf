//! Exact moments of the noiseless signal `X = Aμ̲` under the Bernoulli prior.
//!
//! Conditionally on the labels, `E[X^γ]` is `ε^{|γ|}` when every induced group
//! carries an even multiplicity in every column, and 0 otherwise. The
//! probability of that event depends only on which set partition of the
//! support rows the labels induce, so it is computed once per partition and
//! weighted by the number `K(K−1)⋯(K−b+1)` of label assignments realising a
//! partition with `b` blocks.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::alpha::AlphaMatrix;
use super::scaled::ScaledRational;
use crate::error::{Error, Result};
use crate::setpart::RestrictedGrowth;

/// Largest support (in rows) enumerated for a moment.
pub const MAX_MOMENT_ROWS: usize = 10;

/// Number of even set partitions of the enumerated rows, by block count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityProfile {
    pub rows: usize,
    pub even_by_blocks: Vec<u64>,
}

impl ParityProfile {
    /// Probability that `rows` i.i.d. uniform labels in `[0, K)` induce an even partition.
    pub fn probability(&self, k: u64) -> Result<BigRational> {
        if k == 0 {
            return Err(Error::InvalidParameter("K must be positive".into()));
        }
        let mut num = BigUint::zero();
        let mut falling = BigUint::one();
        for (b, &c) in self.even_by_blocks.iter().enumerate() {
            if b > 0 {
                if (b as u64) > k {
                    break;
                }
                falling *= k - (b as u64 - 1);
            }
            if c > 0 {
                num += &falling * c;
            }
        }
        let den = BigUint::from(k).pow(self.rows as u32);
        Ok(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// Largest block count of an even partition, if any exists.
    pub fn max_even_blocks(&self) -> Option<usize> {
        self.even_by_blocks.iter().rposition(|&c| c > 0)
    }
}

/// Odd-multiplicity column bitsets of the given rows, over the support columns.
fn odd_masks(gamma: &AlphaMatrix, rows: &[usize]) -> (Vec<Vec<u64>>, usize) {
    let cols = gamma.support_cols();
    let words = cols.len().div_ceil(64).max(1);
    let mut masks = vec![vec![0u64; words]; rows.len()];
    for (i, j, m) in gamma.entries() {
        if m % 2 == 1 {
            let r = rows.iter().position(|&x| x == i).expect("support row listed");
            let c = cols.binary_search(&j).expect("support column listed");
            masks[r][c / 64] ^= 1 << (c % 64);
        }
    }
    (masks, words)
}

/// Enumerates set partitions of `rows`; with `pinned`, only those placing the
/// first two rows in one block.
fn profile_over(gamma: &AlphaMatrix, rows: &[usize], pinned: bool) -> ParityProfile {
    let m = rows.len();
    let (masks, words) = odd_masks(gamma, rows);
    let mut counts = vec![0u64; m + 1];
    let mut acc = vec![0u64; m.max(1) * words];
    let mut it = RestrictedGrowth::new(m, m.max(1));
    while let Some(labels) = it.next() {
        if pinned && labels[1] != 0 {
            continue;
        }
        let blocks = labels.iter().max().map_or(0, |&b| b + 1);
        acc[..blocks * words].iter_mut().for_each(|w| *w = 0);
        for (r, &b) in labels.iter().enumerate() {
            for w in 0..words {
                acc[b * words + w] ^= masks[r][w];
            }
        }
        if acc[..blocks * words].iter().all(|&w| w == 0) {
            counts[blocks] += 1;
        }
    }
    ParityProfile { rows: m, even_by_blocks: counts }
}

fn check_rows(m: usize, max: usize) -> Result<()> {
    if m > max {
        return Err(Error::TooLarge(format!("{m} support rows exceed the limit {max}")));
    }
    Ok(())
}

/// Even-partition profile of the support rows of `gamma`.
pub fn parity_profile(gamma: &AlphaMatrix) -> Result<ParityProfile> {
    let rows = gamma.support_rows();
    check_rows(rows.len(), MAX_MOMENT_ROWS)?;
    Ok(profile_over(gamma, &rows, false))
}

/// Profile over the support rows together with rows 0 and 1, restricted to
/// partitions placing rows 0 and 1 in the same block (the event `x = 1`).
pub fn cross_parity_profile(gamma: &AlphaMatrix) -> Result<ParityProfile> {
    if gamma.n() < 2 {
        return Err(Error::InvalidParameter("the cross moment needs n ≥ 2".into()));
    }
    let mut rows = vec![0, 1];
    rows.extend(gamma.support_rows().into_iter().filter(|&i| i > 1));
    check_rows(rows.len(), MAX_MOMENT_ROWS)?;
    Ok(profile_over(gamma, &rows, true))
}

/// Probability that the labels of the support rows make every group even in
/// every column.
pub fn parity_probability(gamma: &AlphaMatrix, k: u64) -> Result<BigRational> {
    parity_profile(gamma)?.probability(k)
}

/// Same probability by direct enumeration of all `K^m` label assignments.
pub fn parity_probability_brute(gamma: &AlphaMatrix, k: u64) -> Result<BigRational> {
    if k == 0 {
        return Err(Error::InvalidParameter("K must be positive".into()));
    }
    let rows = gamma.support_rows();
    let m = rows.len() as u32;
    let total = k.checked_pow(m).filter(|&t| t <= 1 << 24).ok_or_else(|| {
        Error::TooLarge(format!("{k}^{m} label assignments"))
    })?;
    let (masks, _) = odd_masks(gamma, &rows);
    let mut labels = vec![0u64; rows.len()];
    let mut hits = 0u64;
    for code in 0..total {
        let mut c = code;
        for l in labels.iter_mut() {
            *l = c % k;
            c /= k;
        }
        let mut groups: Vec<(u64, Vec<u64>)> = Vec::new();
        for (r, &l) in labels.iter().enumerate() {
            match groups.iter_mut().find(|(g, _)| *g == l) {
                Some((_, acc)) => acc.iter_mut().zip(&masks[r]).for_each(|(a, b)| *a ^= b),
                None => groups.push((l, masks[r].clone())),
            }
        }
        if groups.iter().all(|(_, acc)| acc.iter().all(|&w| w == 0)) {
            hits += 1;
        }
    }
    Ok(BigRational::new(BigInt::from(hits), BigInt::from(total)))
}

/// `E[X^γ] = ε^{|γ|}·P(parity)`.
pub fn moment(gamma: &AlphaMatrix, k: u64) -> Result<ScaledRational> {
    Ok(ScaledRational::new(gamma.weight(), parity_probability(gamma, k)?))
}

/// `E[x·X^γ]` with `x = 1{k₀ = k₁}`.
pub fn cross_moment(gamma: &AlphaMatrix, k: u64) -> Result<ScaledRational> {
    Ok(ScaledRational::new(gamma.weight(), cross_parity_profile(gamma)?.probability(k)?))
}
