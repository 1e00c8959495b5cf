//! Isotropic Gaussian mixture generators and separation statistics.
//!
//! Three ways of choosing the means are supported: caller-provided means, the
//! symmetric Bernoulli prior on the scaled hypercube `{±ε}^p`, and the
//! centered Gaussian prior with per-coordinate variance `ε²`. In both random
//! priors `ε² = Δ̄²σ²/p` and labels are i.i.d. uniform on `[0, K)`.
//!
//! Noise for row `i` is drawn from its own ChaCha8 stream, so instances are
//! reproducible from the seed regardless of generation order.

use rand::Rng;
use rand_distr::{Distribution, Normal, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{squared_distance, Matrix};
use crate::partition::Partition;
use crate::rng::{stream_rng, STREAM_LABELS, STREAM_MEANS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Prior {
    FixedMeans,
    BernoulliHypercube,
    GaussianPrior,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixtureInstance {
    pub n: usize,
    pub p: usize,
    #[serde(rename = "K")]
    pub k: usize,
    pub sigma: f64,
    pub means: Matrix,
    pub labels: Partition,
    pub data: Matrix,
    pub prior: Prior,
    pub delta_bar_sq: Option<f64>,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeparationReport {
    pub delta_sq: f64,
    pub s_sq: f64,
    pub s_tilde_sq: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Balancedness {
    pub alpha: f64,
    pub m: usize,
    pub m_plus: usize,
}

fn check_sigma(sigma: f64) -> Result<()> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidParameter(format!("sigma must be positive, got {sigma}")));
    }
    Ok(())
}

fn check_prior_params(n: usize, p: usize, k: usize, delta_bar_sq: f64, sigma: f64) -> Result<()> {
    if n == 0 || p == 0 || k == 0 {
        return Err(Error::InvalidParameter(format!(
            "n, p, K must be positive (n={n}, p={p}, K={k})"
        )));
    }
    if !(delta_bar_sq >= 0.0 && delta_bar_sq.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "delta_bar_sq must be nonnegative, got {delta_bar_sq}"
        )));
    }
    check_sigma(sigma)
}

fn noise_data(means: &Matrix, labels: &Partition, sigma: f64, seed: u64) -> Matrix {
    let p = means.cols();
    let mut data = Matrix::zeros(labels.len(), p);
    for i in 0..labels.len() {
        let mut rng = stream_rng(seed, i as u64);
        let mu = means.row(labels.label(i));
        for (y, &m) in data.row_mut(i).iter_mut().zip(mu) {
            let z: f64 = StandardNormal.sample(&mut rng);
            *y = m + sigma * z;
        }
    }
    data
}

/// Labels i.i.d. uniform on `[0, k)`, from the label stream of `seed`.
pub fn uniform_labels(n: usize, k: usize, seed: u64) -> Partition {
    let mut rng = stream_rng(seed, STREAM_LABELS);
    let labels = (0..n).map(|_| rng.gen_range(0..k)).collect();
    Partition::new(labels, k).expect("labels drawn in range")
}

/// Draws `Y_i ~ N(means[label_i], σ² I_p)` for each point.
pub fn sample_fixed_means(
    means: &Matrix,
    labels: &Partition,
    sigma: f64,
    seed: u64,
) -> Result<MixtureInstance> {
    check_sigma(sigma)?;
    if labels.k() > means.rows() {
        return Err(Error::DimensionMismatch(format!(
            "partition uses {} labels but only {} means were given",
            labels.k(),
            means.rows()
        )));
    }
    if means.cols() == 0 {
        return Err(Error::DimensionMismatch("means have zero columns".into()));
    }
    Ok(MixtureInstance {
        n: labels.len(),
        p: means.cols(),
        k: means.rows(),
        sigma,
        means: means.clone(),
        labels: Partition::new(labels.labels().to_vec(), means.rows())?,
        data: noise_data(means, labels, sigma, seed),
        prior: Prior::FixedMeans,
        delta_bar_sq: None,
        seed,
    })
}

pub fn sample_bernoulli_prior(
    n: usize,
    p: usize,
    k: usize,
    delta_bar_sq: f64,
    sigma: f64,
    seed: u64,
) -> Result<MixtureInstance> {
    check_prior_params(n, p, k, delta_bar_sq, sigma)?;
    let eps = (delta_bar_sq * sigma * sigma / p as f64).sqrt();
    let labels = uniform_labels(n, k, seed);
    let mut rng = stream_rng(seed, STREAM_MEANS);
    let mut means = Matrix::zeros(k, p);
    for r in 0..k {
        for v in means.row_mut(r) {
            *v = if rng.gen::<bool>() { eps } else { -eps };
        }
    }
    let data = noise_data(&means, &labels, sigma, seed);
    Ok(MixtureInstance {
        n,
        p,
        k,
        sigma,
        means,
        labels,
        data,
        prior: Prior::BernoulliHypercube,
        delta_bar_sq: Some(delta_bar_sq),
        seed,
    })
}

/// Gaussian prior: mean entries i.i.d. `N(0, ε²)`.
pub fn sample_gaussian_prior(
    n: usize,
    p: usize,
    k: usize,
    delta_bar_sq: f64,
    sigma: f64,
    seed: u64,
) -> Result<MixtureInstance> {
    check_prior_params(n, p, k, delta_bar_sq, sigma)?;
    let eps = (delta_bar_sq * sigma * sigma / p as f64).sqrt();
    let labels = uniform_labels(n, k, seed);
    let mut rng = stream_rng(seed, STREAM_MEANS);
    let mut means = Matrix::zeros(k, p);
    if eps > 0.0 {
        let normal = Normal::new(0.0, eps).expect("finite positive std");
        for r in 0..k {
            for v in means.row_mut(r) {
                *v = normal.sample(&mut rng);
            }
        }
    }
    let data = noise_data(&means, &labels, sigma, seed);
    Ok(MixtureInstance {
        n,
        p,
        k,
        sigma,
        means,
        labels,
        data,
        prior: Prior::GaussianPrior,
        delta_bar_sq: Some(delta_bar_sq),
        seed,
    })
}

/// Dispatches on `prior`; `FixedMeans` is not a random prior and is rejected.
pub fn sample_prior(
    prior: Prior,
    n: usize,
    p: usize,
    k: usize,
    delta_bar_sq: f64,
    sigma: f64,
    seed: u64,
) -> Result<MixtureInstance> {
    match prior {
        Prior::BernoulliHypercube => sample_bernoulli_prior(n, p, k, delta_bar_sq, sigma, seed),
        Prior::GaussianPrior => sample_gaussian_prior(n, p, k, delta_bar_sq, sigma, seed),
        Prior::FixedMeans => Err(Error::InvalidParameter(
            "FixedMeans requires explicit means; use sample_fixed_means".into(),
        )),
    }
}

const PACKING_NODE_BUDGET: u64 = 50_000_000;

/// `K` points of the scaled hypercube `{±ε'}^p`, `ε' = Δ̄σ√(2/p)`, with pairwise
/// Hamming distance at least `⌈p/4⌉`, so that every pair satisfies
/// `Δ̄² ≤ ‖μ_l − μ_r‖²/(2σ²) ≤ 4Δ̄²`.
///
/// The points are the ones accepted by a greedy scan of the hypercube in
/// reflected-binary Gray-code order (starting at the all-plus corner). The
/// scan is carried out as a depth-first search for the next acceptable Gray
/// index, which returns exactly what a linear scan would without visiting
/// `2^p` vertices.
pub fn hypercube_packing(k: usize, p: usize, delta_bar_sq: f64, sigma: f64) -> Result<Matrix> {
    if k == 0 || p == 0 {
        return Err(Error::InvalidParameter(format!("K and p must be positive (K={k}, p={p})")));
    }
    check_sigma(sigma)?;
    if !(delta_bar_sq >= 0.0 && delta_bar_sq.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "delta_bar_sq must be nonnegative, got {delta_bar_sq}"
        )));
    }
    if (p as f64) * std::f64::consts::LN_2 / 4.0 < (k as f64).ln() {
        return Err(Error::InvalidParameter(format!(
            "packing needs p·ln2/4 ≥ ln K (p={p}, K={k})"
        )));
    }
    let codes = gray_greedy_codes(k, p)?;
    let eps = delta_bar_sq.sqrt() * sigma * (2.0 / p as f64).sqrt();
    let mut means = Matrix::zeros(k, p);
    for (r, code) in codes.iter().enumerate() {
        for (v, &bit) in means.row_mut(r).iter_mut().zip(code) {
            *v = if bit == 0 { eps } else { -eps };
        }
    }
    Ok(means)
}

/// Gray codewords (bit `j` = coordinate `j`) accepted by the greedy scan.
pub(crate) fn gray_greedy_codes(k: usize, p: usize) -> Result<Vec<Vec<u8>>> {
    let min_dist = p.div_ceil(4);
    let mut codes = vec![vec![0u8; p]];
    let mut last_index = vec![0u8; p];
    let mut search = GraySearch {
        p,
        min_dist,
        nodes: 0,
        k_bits: vec![0; p],
        g_bits: vec![0; p],
        dists: Vec::new(),
        agree_below: Vec::new(),
    };
    while codes.len() < k {
        search.dists = vec![0; codes.len()];
        search.agree_below = pair_agreements(&codes);
        match search.next_after(&last_index, &codes)? {
            Some((index, code)) => {
                last_index = index;
                codes.push(code);
            }
            None => return Err(Error::PackingExhausted { found: codes.len(), requested: k }),
        }
    }
    Ok(codes)
}

struct GraySearch {
    p: usize,
    min_dist: usize,
    nodes: u64,
    k_bits: Vec<u8>,
    g_bits: Vec<u8>,
    dists: Vec<usize>,
    // (a, b, c) with c[pos] = #{j < pos : codes[a][j] == codes[b][j]}
    agree_below: Vec<(usize, usize, Vec<usize>)>,
}

fn pair_agreements(codes: &[Vec<u8>]) -> Vec<(usize, usize, Vec<usize>)> {
    let mut out = Vec::new();
    for a in 0..codes.len() {
        for b in a + 1..codes.len() {
            let mut c = vec![0; codes[a].len() + 1];
            for j in 0..codes[a].len() {
                c[j + 1] = c[j] + usize::from(codes[a][j] == codes[b][j]);
            }
            out.push((a, b, c));
        }
    }
    out
}

impl GraySearch {
    /// Whether the `rem` free low positions can still bring every pair of
    /// codes to the target distance simultaneously.
    fn pairs_feasible(&self, rem: usize) -> bool {
        let t = self.min_dist as i64;
        self.agree_below.iter().all(|(a, b, c)| {
            let agree = c[rem] as i64;
            let split = rem as i64 - agree;
            let (da, db) = (self.dists[*a] as i64, self.dists[*b] as i64);
            let lo = (t - da - agree).max(0);
            let hi = split.min(split + db + agree - t);
            lo <= hi
        })
    }

    /// Smallest index strictly above `last` whose Gray code is far from all `codes`.
    fn next_after(&mut self, last: &[u8], codes: &[Vec<u8>]) -> Result<Option<(Vec<u8>, Vec<u8>)>> {
        if self.descend(self.p, 0, true, last, codes)? {
            Ok(Some((self.k_bits.clone(), self.g_bits.clone())))
        } else {
            Ok(None)
        }
    }

    // Chooses index bits from the most significant one down; `pos` bits remain.
    fn descend(&mut self, pos: usize, prev: u8, tight: bool, last: &[u8], codes: &[Vec<u8>]) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > PACKING_NODE_BUDGET {
            return Err(Error::BudgetExceeded("hypercube packing search".into()));
        }
        if pos == 0 {
            return Ok(!tight && self.dists.iter().all(|&d| d >= self.min_dist));
        }
        let bit_pos = pos - 1;
        for b in 0..=1u8 {
            if tight && b < last[bit_pos] {
                continue;
            }
            let g = b ^ prev;
            self.k_bits[bit_pos] = b;
            self.g_bits[bit_pos] = g;
            let mut feasible = true;
            for (d, code) in self.dists.iter_mut().zip(codes) {
                if code[bit_pos] != g {
                    *d += 1;
                }
                if *d + bit_pos < self.min_dist {
                    feasible = false;
                }
            }
            let feasible = feasible && self.pairs_feasible(bit_pos);
            let found = feasible && self.descend(bit_pos, b, tight && b == last[bit_pos], last, codes)?;
            if found {
                return Ok(true);
            }
            for (d, code) in self.dists.iter_mut().zip(codes) {
                if code[bit_pos] != g {
                    *d -= 1;
                }
            }
        }
        Ok(false)
    }
}

/// Minimum normalized squared distance between means, and the derived rates
/// `s² = Δ² ∧ nΔ⁴/(pK)` and `s̃² = Δ² ∧ Δ⁴m/p` (`m` the smallest nonempty group).
pub fn separation(means: &Matrix, sigma: f64, labels: &Partition) -> Result<SeparationReport> {
    check_sigma(sigma)?;
    let k = means.rows();
    if k < 2 {
        return Err(Error::InvalidParameter(format!("separation needs K ≥ 2, got {k}")));
    }
    let mut min_sq = f64::INFINITY;
    for l in 0..k {
        for r in l + 1..k {
            min_sq = min_sq.min(squared_distance(means.row(l), means.row(r)));
        }
    }
    let delta_sq = min_sq / (2.0 * sigma * sigma);
    let n = labels.len() as f64;
    let p = means.cols() as f64;
    let m = balancedness(labels)?.m as f64;
    Ok(SeparationReport {
        delta_sq,
        s_sq: delta_sq.min(n * delta_sq * delta_sq / (p * k as f64)),
        s_tilde_sq: delta_sq.min(delta_sq * delta_sq * m / p),
    })
}

/// Ratio of largest to smallest group size, over nonempty groups.
pub fn balancedness(labels: &Partition) -> Result<Balancedness> {
    let sizes: Vec<usize> = labels.group_sizes().into_iter().filter(|&s| s > 0).collect();
    let (Some(&m), Some(&m_plus)) = (sizes.iter().min(), sizes.iter().max()) else {
        return Err(Error::InvalidParameter("balancedness of an empty partition".into()));
    };
    Ok(Balancedness { alpha: m_plus as f64 / m as f64, m, m_plus })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hamming(a: &[u8], b: &[u8]) -> usize {
        a.iter().zip(b).filter(|(x, y)| x != y).count()
    }

    // Linear Gray-order scan, feasible for small p only.
    fn linear_gray_greedy(k: usize, p: usize) -> Option<Vec<Vec<u8>>> {
        let w = p.div_ceil(4);
        let mut out: Vec<Vec<u8>> = Vec::new();
        for idx in 0u64..(1 << p) {
            let g = idx ^ (idx >> 1);
            let code: Vec<u8> = (0..p).map(|j| ((g >> j) & 1) as u8).collect();
            if out.iter().all(|c| hamming(c, &code) >= w) {
                out.push(code);
                if out.len() == k {
                    return Some(out);
                }
            }
        }
        None
    }

    #[test]
    fn gray_search_matches_linear_scan() {
        for p in 1..=12 {
            for k in 1..=6 {
                let fast = gray_greedy_codes(k, p).ok();
                assert_eq!(fast, linear_gray_greedy(k, p), "p={p} k={k}");
            }
        }
    }

    #[test]
    fn packing_single_point() {
        let m = hypercube_packing(1, 3, 2.0, 1.0).unwrap();
        assert_eq!(m.shape(), (1, 3));
    }

    #[test]
    fn antipodal_pair_hits_upper_bound() {
        // all-plus vs all-minus: Hamming distance p gives exactly 4Δ̄².
        let (p, dbar, sigma) = (4, 1.5, 2.0);
        let eps = f64::sqrt(dbar) * sigma * (2.0 / p as f64).sqrt();
        let means = Matrix::from_rows(&[vec![eps; p], vec![-eps; p]]).unwrap();
        let labels = Partition::from_labels(vec![0, 1]);
        let rep = separation(&means, sigma, &labels).unwrap();
        assert!((rep.delta_sq - 4.0 * dbar).abs() < 1e-12);
    }

    #[test]
    fn packing_k4_p16_within_bounds() {
        let dbar = 0.7;
        let m = hypercube_packing(4, 16, dbar, 1.3).unwrap();
        for l in 0..4 {
            for r in l + 1..4 {
                let v = squared_distance(m.row(l), m.row(r)) / (2.0 * 1.3 * 1.3);
                assert!(v >= dbar - 1e-12 && v <= 4.0 * dbar + 1e-12, "{v}");
            }
        }
    }

    #[test]
    fn packing_large_dimension() {
        let m = hypercube_packing(3, 192, 1.0, 1.0).unwrap();
        for l in 0..3 {
            for r in l + 1..3 {
                let v = squared_distance(m.row(l), m.row(r)) / 2.0;
                assert!((1.0 - 1e-12..=4.0 + 1e-12).contains(&v));
            }
        }
    }

    #[test]
    fn packing_precondition() {
        // p=4: ln(2) ≥ ln K only for K ≤ 2.
        assert!(hypercube_packing(3, 4, 1.0, 1.0).is_err());
        assert!(hypercube_packing(2, 4, 1.0, 1.0).is_ok());
    }

    #[test]
    fn separation_plug_in() {
        let means = Matrix::from_rows(&[vec![0.0, 0.0], vec![3.0, 4.0]]).unwrap();
        let labels = Partition::from_labels(vec![0, 1, 0]);
        let rep = separation(&means, 1.0, &labels).unwrap();
        assert_eq!(rep.delta_sq, 12.5);

        // n=100, p=400, K=2, Δ²=3: s² = min(3, 100·9/(400·2)) = 1.125.
        let d = (6.0f64).sqrt() / 20.0;
        let means = Matrix::from_rows(&[vec![0.0; 400], vec![d; 400]]).unwrap();
        let labels = Partition::from_labels((0..100).map(|i| i % 2).collect());
        let rep = separation(&means, 1.0, &labels).unwrap();
        assert!((rep.delta_sq - 3.0).abs() < 1e-12);
        assert!((rep.s_sq - 1.125).abs() < 1e-12);
        // s̃² = min(3, 9·50/400) = 1.125 as well for balanced halves.
        assert!((rep.s_tilde_sq - 1.125).abs() < 1e-12);
        assert!(separation(&Matrix::zeros(1, 2), 1.0, &labels).is_err());
    }

    #[test]
    fn balancedness_examples() {
        let b = balancedness(&Partition::from_labels(vec![0, 1, 0, 1])).unwrap();
        assert_eq!((b.alpha, b.m, b.m_plus), (1.0, 2, 2));
        let b = balancedness(&Partition::from_labels(vec![0, 0, 1, 1, 1])).unwrap();
        assert_eq!(b.alpha, 1.5);
        let mut labels = vec![0, 1];
        labels.extend([2; 8]);
        let b = balancedness(&Partition::from_labels(labels)).unwrap();
        assert_eq!((b.alpha, b.m, b.m_plus), (8.0, 1, 8));
        // empty groups are ignored
        let b = balancedness(&Partition::new(vec![0, 2], 3).unwrap()).unwrap();
        assert_eq!(b.alpha, 1.0);
        assert!(balancedness(&Partition::from_labels(vec![])).is_err());
    }

    #[test]
    fn zero_noise_limit() {
        let means = Matrix::from_rows(&[vec![1.0, -2.0], vec![5.0, 0.5]]).unwrap();
        let labels = Partition::from_labels(vec![1, 0, 1]);
        let inst = sample_fixed_means(&means, &labels, 1e-300, 3).unwrap();
        for i in 0..3 {
            assert_eq!(inst.data.row(i), means.row(labels.label(i)));
        }
    }

    #[test]
    fn fixed_means_errors() {
        let means = Matrix::zeros(2, 3);
        let labels = Partition::from_labels(vec![0, 2]);
        assert!(sample_fixed_means(&means, &labels, 1.0, 0).is_err());
        let labels = Partition::from_labels(vec![0, 1]);
        assert!(sample_fixed_means(&means, &labels, 0.0, 0).is_err());
        assert!(sample_fixed_means(&means, &labels, -1.0, 0).is_err());
    }

    #[test]
    fn identical_means_sample_mean() {
        let (n, p) = (500, 8);
        let means = Matrix::from_rows(&[vec![2.0; p], vec![2.0; p]]).unwrap();
        let labels = Partition::from_labels((0..n).map(|i| i % 2).collect());
        let inst = sample_fixed_means(&means, &labels, 1.5, 11).unwrap();
        let mean: f64 = inst.data.as_slice().iter().sum::<f64>() / (n * p) as f64;
        assert!((mean - 2.0).abs() < 4.0 * 1.5 / ((n * p) as f64).sqrt());
    }

    #[test]
    fn within_cluster_covariance_is_identity() {
        let means = Matrix::from_rows(&[vec![0.0, 0.0], vec![10.0, 0.0]]).unwrap();
        let labels = Partition::from_labels((0..1000).map(|i| i % 2).collect());
        let inst = sample_fixed_means(&means, &labels, 1.0, 5).unwrap();
        let mut cov = [[0.0; 2]; 2];
        for i in 0..1000 {
            let mu = means.row(labels.label(i));
            let r = inst.data.row(i);
            for a in 0..2 {
                for b in 0..2 {
                    cov[a][b] += (r[a] - mu[a]) * (r[b] - mu[b]) / 1000.0;
                }
            }
        }
        for a in 0..2 {
            for b in 0..2 {
                let target = if a == b { 1.0 } else { 0.0 };
                assert!((cov[a][b] - target).abs() < 0.2, "{cov:?}");
            }
        }
    }

    #[test]
    fn bernoulli_support_and_zero_signal() {
        let inst = sample_bernoulli_prior(20, 10, 3, 2.0, 1.5, 9).unwrap();
        let eps = (2.0 * 1.5 * 1.5 / 10.0f64).sqrt();
        assert!(inst.means.as_slice().iter().all(|v| v.abs() == eps));
        let inst = sample_bernoulli_prior(20, 10, 3, 0.0, 1.0, 9).unwrap();
        assert!(inst.means.as_slice().iter().all(|&v| v == 0.0));
        assert!(sample_bernoulli_prior(0, 10, 3, 1.0, 1.0, 9).is_err());
        assert!(sample_bernoulli_prior(5, 10, 3, -1.0, 1.0, 9).is_err());
    }

    #[test]
    fn bernoulli_label_frequencies() {
        // Chernoff: P(|freq − 1/4| > 0.05) ≈ 2·exp(−2·4000·0.05²) ≈ 4e-9 per label.
        let inst = sample_bernoulli_prior(4000, 2, 4, 1.0, 1.0, 123).unwrap();
        for s in inst.labels.group_sizes() {
            let f = s as f64 / 4000.0;
            assert!((0.2..=0.3).contains(&f), "{f}");
        }
    }

    #[test]
    fn gaussian_prior_variance() {
        let (k, p, dbar) = (8, 250, 3.0);
        let inst = sample_gaussian_prior(10, p, k, dbar, 1.0, 17).unwrap();
        let eps_sq = dbar / p as f64;
        let vals = inst.means.as_slice();
        let n = vals.len() as f64;
        let var = vals.iter().map(|v| v * v).sum::<f64>() / n;
        // std error of the mean of squares of N(0, ε²) is ε²√(2/n)
        assert!((var - eps_sq).abs() < 5.0 * eps_sq * (2.0 / n).sqrt());
        let zero = sample_gaussian_prior(10, p, k, 0.0, 1.0, 17).unwrap();
        assert!(zero.means.as_slice().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn gaussian_prior_distance_concentrates() {
        let (k, p, dbar) = (3, 20_000, 2.0);
        let inst = sample_gaussian_prior(3, p, k, dbar, 1.0, 4).unwrap();
        for l in 0..k {
            for r in l + 1..k {
                let v = squared_distance(inst.means.row(l), inst.means.row(r)) / 2.0;
                assert!((v - dbar).abs() < 0.1 * dbar, "{v}");
            }
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        let a = sample_bernoulli_prior(30, 7, 3, 1.0, 1.0, 99).unwrap();
        let b = sample_bernoulli_prior(30, 7, 3, 1.0, 1.0, 99).unwrap();
        assert_eq!(a, b);
        let c = sample_bernoulli_prior(30, 7, 3, 1.0, 1.0, 100).unwrap();
        assert_ne!(a.data, c.data);
    }

    #[test]
    fn instance_json_fields() {
        let inst = sample_bernoulli_prior(3, 2, 2, 1.0, 1.0, 1).unwrap();
        let v: serde_json::Value = serde_json::to_value(&inst).unwrap();
        for key in ["n", "p", "K", "sigma", "means", "labels", "data", "prior", "delta_bar_sq", "seed"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["data"].as_array().unwrap().len(), 3);
        let back: MixtureInstance = serde_json::from_value(v).unwrap();
        assert_eq!(back, inst);
    }
}
