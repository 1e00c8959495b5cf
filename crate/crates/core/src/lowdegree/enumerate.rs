//! Exhaustive enumeration of labelled α-matrices by total weight.

use super::alpha::AlphaMatrix;
use crate::error::Result;

/// Number of matrices in `N^{n×p}` with `|α| ≤ max_weight`, i.e. `C(np + D, D)`,
/// saturating at `u128::MAX`.
pub fn count_alphas(n: usize, p: usize, max_weight: u32) -> u128 {
    let v = (n * p) as u128;
    let mut c: u128 = 1;
    for i in 1..=max_weight as u128 {
        c = match c.checked_mul(v + i) {
            Some(x) => x / i,
            None => return u128::MAX,
        };
    }
    c
}

/// Calls `f` on every `n × p` matrix with `min_weight ≤ |α| ≤ max_weight`, in
/// a fixed order. Stops at the first error.
pub fn for_each_alpha(
    n: usize,
    p: usize,
    min_weight: u32,
    max_weight: u32,
    mut f: impl FnMut(&AlphaMatrix) -> Result<()>,
) -> Result<()> {
    let cells = n * p;
    let mut counts = vec![0u32; cells];
    fn rec(
        pos: usize,
        left: u32,
        used: u32,
        n: usize,
        p: usize,
        min_weight: u32,
        counts: &mut [u32],
        f: &mut dyn FnMut(&AlphaMatrix) -> Result<()>,
    ) -> Result<()> {
        if pos == counts.len() {
            if used >= min_weight {
                let entries: Vec<(usize, usize, u32)> = counts
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c > 0)
                    .map(|(idx, &c)| (idx / p, idx % p, c))
                    .collect();
                f(&AlphaMatrix::from_entries(n, p, &entries)?)?;
            }
            return Ok(());
        }
        for c in 0..=left {
            counts[pos] = c;
            rec(pos + 1, left - c, used + c, n, p, min_weight, counts, f)?;
        }
        counts[pos] = 0;
        Ok(())
    }
    rec(0, max_weight, 0, n, p, min_weight, &mut counts, &mut f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_match_binomial() {
        for (n, p, d) in [(2, 2, 3), (3, 2, 4), (1, 1, 5), (2, 3, 0)] {
            let mut c = 0u128;
            for_each_alpha(n, p, 0, d, |_| {
                c += 1;
                Ok(())
            })
            .unwrap();
            assert_eq!(c, count_alphas(n, p, d));
        }
        assert_eq!(count_alphas(5, 3, 8), 490_314);
        assert_eq!(count_alphas(5, 3, 5), 15_504);
    }

    #[test]
    fn weight_window() {
        for_each_alpha(2, 2, 2, 3, |a| {
            assert!((2..=3).contains(&a.weight()));
            Ok(())
        })
        .unwrap();
    }
}
