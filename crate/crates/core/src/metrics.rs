//! Partition comparison: misclassification error, partnership matrices, the
//! normalized-partnership projection `B(G)`, and the K-means criterion.
//!
//! Matrix-valued discrepancies come in a float64 flavour and an exact
//! `Rational64` flavour; the exact one is meant for small `n` and serves as
//! an oracle for the float path.

use num_rational::Rational64;
use num_traits::{Signed, Zero};
use pathfinding::kuhn_munkres::kuhn_munkres;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::model::balancedness;
use crate::partition::Partition;

/// Binary `M_ij = 1{k_i = k_j}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartnershipMatrix {
    n: usize,
    labels: Vec<usize>,
}

impl PartnershipMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u8 {
        u8::from(self.labels[i] == self.labels[j])
    }

    pub fn to_matrix(&self) -> Matrix {
        let mut m = Matrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                m.set(i, j, f64::from(self.get(i, j)));
            }
        }
        m
    }
}

/// `B_ij = 1/|G_k|` when `i, j ∈ G_k`, else 0.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedPartnership {
    pub matrix: Matrix,
}

fn check_same_len(a: &Partition, b: &Partition) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch(format!(
            "partitions of {} and {} points",
            a.len(),
            b.len()
        )));
    }
    Ok(())
}

/// Overlap counts `|G*_r ∩ G_l|`, padded with zeros to a square of side
/// `max(K*, K)`.
fn overlap_matrix(g: &Partition, g_star: &Partition) -> Vec<Vec<i64>> {
    let side = g.k().max(g_star.k()).max(1);
    let mut ov = vec![vec![0i64; side]; side];
    for i in 0..g.len() {
        ov[g_star.label(i)][g.label(i)] += 1;
    }
    ov
}

/// Fraction of misclassified points, minimized over label permutations
/// (Hungarian algorithm on the overlap matrix).
pub fn misclassification_error(g: &Partition, g_star: &Partition) -> Result<f64> {
    check_same_len(g, g_star)?;
    if g.is_empty() {
        return Ok(0.0);
    }
    let ov = overlap_matrix(g, g_star);
    let weights = pathfinding::matrix::Matrix::from_rows(ov).expect("square overlap matrix");
    let (best, _) = kuhn_munkres(&weights);
    let n = g.len() as i64;
    Ok((n - best) as f64 / n as f64)
}

/// Same quantity by explicit minimization over all permutations of the padded
/// label set, using the symmetric-difference form. Intended for `K ≤ 8`.
pub fn misclassification_error_brute(g: &Partition, g_star: &Partition) -> Result<f64> {
    check_same_len(g, g_star)?;
    if g.is_empty() {
        return Ok(0.0);
    }
    let side = g.k().max(g_star.k()).max(1);
    if side > 8 {
        return Err(Error::TooLarge(format!("{side}! permutations")));
    }
    let star_groups = Partition::new(g_star.labels().to_vec(), side)?.groups();
    let groups = Partition::new(g.labels().to_vec(), side)?.groups();
    let n = g.len();
    let mut perm: Vec<usize> = (0..side).collect();
    let mut best = usize::MAX;
    loop {
        let sym_diff: usize = (0..side)
            .map(|k| {
                let a = &star_groups[k];
                let b = &groups[perm[k]];
                let inter = a.iter().filter(|i| g.label(**i) == perm[k]).count();
                a.len() + b.len() - 2 * inter
            })
            .sum();
        best = best.min(sym_diff);
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(best as f64 / (2 * n) as f64)
}

fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = v.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = v.iter().rposition(|&x| x > v[i]).expect("pivot has a successor");
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}

pub fn partnership_matrix(g: &Partition) -> PartnershipMatrix {
    PartnershipMatrix { n: g.len(), labels: g.labels().to_vec() }
}

/// Off-diagonal squared Frobenius distance divided by `n(n−1)`.
pub fn partnership_mse(m_hat: &Matrix, m_star: &PartnershipMatrix) -> Result<f64> {
    let n = m_star.n();
    if m_hat.shape() != (n, n) {
        return Err(Error::DimensionMismatch(format!(
            "estimate is {:?}, target is {n}x{n}",
            m_hat.shape()
        )));
    }
    if n < 2 {
        return Ok(0.0);
    }
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let d = m_hat.get(i, j) - f64::from(m_star.get(i, j));
                acc += d * d;
            }
        }
    }
    Ok(acc / (n * (n - 1)) as f64)
}

/// `‖M^G − M^{G*}‖²_F / (n(n−1))` computed from labels without materializing.
pub fn partnership_distance(g: &Partition, g_star: &Partition) -> Result<f64> {
    check_same_len(g, g_star)?;
    let n = g.len();
    if n < 2 {
        return Ok(0.0);
    }
    let mut disagree = 0usize;
    for i in 0..n {
        for j in 0..n {
            if i != j && (g.label(i) == g.label(j)) != (g_star.label(i) == g_star.label(j)) {
                disagree += 1;
            }
        }
    }
    Ok(disagree as f64 / (n * (n - 1)) as f64)
}

/// The trivial estimator of `M*`: ones on the diagonal, `1/K` elsewhere.
pub fn trivial_estimator(n: usize, k: usize) -> Matrix {
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            m.set(i, j, if i == j { 1.0 } else { 1.0 / k as f64 });
        }
    }
    m
}

fn nonempty_sizes(g: &Partition) -> Result<Vec<usize>> {
    let sizes = g.group_sizes();
    // unused label slots are never referenced by an entry of B
    if g.is_empty() {
        return Err(Error::EmptyGroup(0));
    }
    Ok(sizes)
}

pub fn normalized_partnership(g: &Partition) -> Result<NormalizedPartnership> {
    let sizes = nonempty_sizes(g)?;
    let n = g.len();
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if g.label(i) == g.label(j) {
                m.set(i, j, 1.0 / sizes[g.label(i)] as f64);
            }
        }
    }
    Ok(NormalizedPartnership { matrix: m })
}

/// Exact `B(G)` as dense rows of rationals.
pub fn normalized_partnership_exact(g: &Partition) -> Result<Vec<Vec<Rational64>>> {
    let sizes = nonempty_sizes(g)?;
    let n = g.len();
    Ok((0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if g.label(i) == g.label(j) {
                        Rational64::new(1, sizes[g.label(i)] as i64)
                    } else {
                        Rational64::zero()
                    }
                })
                .collect()
        })
        .collect())
}

pub(crate) fn rational_matmul(a: &[Vec<Rational64>], b: &[Vec<Rational64>]) -> Vec<Vec<Rational64>> {
    let n = a.len();
    let m = b.first().map_or(0, Vec::len);
    let mut out = vec![vec![Rational64::zero(); m]; n];
    for i in 0..n {
        for (c, bc) in b.iter().enumerate() {
            let aic = a[i][c];
            if aic.is_zero() {
                continue;
            }
            for j in 0..m {
                if !bc[j].is_zero() {
                    out[i][j] += aic * bc[j];
                }
            }
        }
    }
    out
}

/// The two expressions of `δ = ‖B* − B*B‖₁`: entrywise, and as twice the mass
/// of `B` outside the diagonal blocks of `G*`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct L1Discrepancy {
    pub direct: f64,
    pub cross_block: f64,
}

pub fn b_l1_discrepancy(g_star: &Partition, g: &Partition) -> Result<L1Discrepancy> {
    check_same_len(g_star, g)?;
    let bs = normalized_partnership(g_star)?.matrix;
    let b = normalized_partnership(g)?.matrix;
    let n = g.len();
    let mut direct = 0.0;
    for i in 0..n {
        for j in 0..n {
            let mut prod = 0.0;
            for c in 0..n {
                prod += bs.get(i, c) * b.get(c, j);
            }
            direct += (bs.get(i, j) - prod).abs();
        }
    }
    let mut cross = 0.0;
    for a in 0..n {
        for c in 0..n {
            if g_star.label(a) != g_star.label(c) {
                cross += b.get(a, c).abs();
            }
        }
    }
    Ok(L1Discrepancy { direct, cross_block: 2.0 * cross })
}

/// Exact version of [`b_l1_discrepancy`], returning `(direct, cross_block)`.
pub fn b_l1_discrepancy_exact(g_star: &Partition, g: &Partition) -> Result<(Rational64, Rational64)> {
    check_same_len(g_star, g)?;
    let bs = normalized_partnership_exact(g_star)?;
    let b = normalized_partnership_exact(g)?;
    let prod = rational_matmul(&bs, &b);
    let n = g.len();
    let mut direct = Rational64::zero();
    let mut cross = Rational64::zero();
    for i in 0..n {
        for j in 0..n {
            direct += (bs[i][j] - prod[i][j]).abs();
            if g_star.label(i) != g_star.label(j) {
                cross += b[i][j].abs();
            }
        }
    }
    Ok((direct, cross * 2))
}

/// Sum over groups of squared distances to the group mean.
pub fn kmeans_criterion(data: &Matrix, g: &Partition) -> Result<f64> {
    if data.rows() != g.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} data rows, {} labels",
            data.rows(),
            g.len()
        )));
    }
    let p = data.cols();
    let sizes = g.group_sizes();
    let mut centers = vec![vec![0.0; p]; g.k()];
    for i in 0..g.len() {
        for (c, &y) in centers[g.label(i)].iter_mut().zip(data.row(i)) {
            *c += y;
        }
    }
    for (c, &s) in centers.iter_mut().zip(&sizes) {
        if s > 0 {
            c.iter_mut().for_each(|v| *v /= s as f64);
        }
    }
    Ok((0..g.len())
        .map(|i| crate::matrix::squared_distance(data.row(i), &centers[g.label(i)]))
        .sum())
}

/// `(‖M^G − M*‖²_F/(n(n−1)), 2·err(G, G*))`; the first never exceeds the second.
pub fn err_vs_partnership_check(g: &Partition, g_star: &Partition) -> Result<(f64, f64)> {
    Ok((partnership_distance(g, g_star)?, 2.0 * misclassification_error(g, g_star)?))
}

/// `(err(G, G*), 2·(m⁺/m)·‖B* − B*B‖₁/n)` with `m, m⁺` the extreme group sizes of `G*`.
pub fn err_vs_l1_check(g_star: &Partition, g: &Partition) -> Result<(f64, f64)> {
    let bal = balancedness(g_star)?;
    let delta = b_l1_discrepancy(g_star, g)?.direct;
    let err = misclassification_error(g, g_star)?;
    Ok((err, 2.0 * bal.alpha * delta / g.len() as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn part(labels: &[usize]) -> Partition {
        Partition::from_labels(labels.to_vec())
    }

    #[test]
    fn err_examples() {
        let gs = part(&[0, 0, 1, 1]);
        assert_eq!(misclassification_error(&gs, &gs).unwrap(), 0.0);
        assert_eq!(misclassification_error(&part(&[1, 1, 0, 0]), &gs).unwrap(), 0.0);
        let g = part(&[0, 0, 0, 1]);
        assert_eq!(misclassification_error(&g, &gs).unwrap(), 0.25);
        assert_eq!(misclassification_error_brute(&g, &gs).unwrap(), 0.25);
        assert!(misclassification_error(&part(&[0]), &gs).is_err());
    }

    #[test]
    fn err_with_different_group_counts() {
        let gs = part(&[0, 0, 1, 1, 2, 2]);
        let g = part(&[0, 0, 0, 0, 0, 0]);
        // best match keeps one group of two
        assert!((misclassification_error(&g, &gs).unwrap() - 4.0 / 6.0).abs() < 1e-15);
        assert_eq!(
            misclassification_error(&g, &gs).unwrap(),
            misclassification_error_brute(&g, &gs).unwrap()
        );
    }

    #[test]
    fn partnership_examples() {
        let id = partnership_matrix(&part(&[0, 1, 2])).to_matrix();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(id.get(i, j), if i == j { 1.0 } else { 0.0 });
            }
        }
        let ones = partnership_matrix(&part(&[0, 0, 0])).to_matrix();
        assert!(ones.as_slice().iter().all(|&v| v == 1.0));
        let m = partnership_matrix(&part(&[0, 0, 1]));
        assert_eq!((m.get(0, 1), m.get(0, 2), m.get(1, 2)), (1, 0, 0));
    }

    #[test]
    fn partnership_mse_examples() {
        let g = part(&[0, 1, 0, 2]);
        let m = partnership_matrix(&g);
        assert_eq!(partnership_mse(&m.to_matrix(), &m).unwrap(), 0.0);
        assert!(partnership_mse(&Matrix::zeros(3, 3), &m).is_err());
    }

    #[test]
    fn trivial_estimator_mse_under_uniform_labels() {
        // Exact expectation by enumerating all K^n labelings.
        for (n, k) in [(3usize, 2usize), (4, 2), (3, 3)] {
            let est = trivial_estimator(n, k);
            let mut total = 0.0;
            let count = k.pow(n as u32);
            for code in 0..count {
                let labels: Vec<usize> = (0..n).map(|i| (code / k.pow(i as u32)) % k).collect();
                let m = partnership_matrix(&Partition::new(labels, k).unwrap());
                total += partnership_mse(&est, &m).unwrap();
            }
            let expected = 1.0 / k as f64 - 1.0 / (k * k) as f64;
            assert!((total / count as f64 - expected).abs() < 1e-12);
            if k == 2 {
                assert!((expected - 0.25).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn normalized_partnership_examples() {
        let b = normalized_partnership(&part(&[0, 1, 2])).unwrap().matrix;
        assert_eq!(b, partnership_matrix(&part(&[0, 1, 2])).to_matrix());
        let b = normalized_partnership(&part(&[0, 0, 0, 0])).unwrap().matrix;
        assert!(b.as_slice().iter().all(|&v| v == 0.25));
        let bx = normalized_partnership_exact(&part(&[0, 0, 1, 1])).unwrap();
        assert_eq!(rational_matmul(&bx, &bx), bx);
        assert_eq!(bx[0][1], Rational64::new(1, 2));
        assert_eq!(bx[0][2], Rational64::zero());
        assert!(normalized_partnership(&part(&[])).is_err());
    }

    #[test]
    fn l1_examples() {
        let gs = part(&[0, 0, 1, 1]);
        let d = b_l1_discrepancy(&gs, &gs).unwrap();
        assert_eq!((d.direct, d.cross_block), (0.0, 0.0));

        // B = all 1/4, B*B = all 1/4; |B* − B*B| is 1/4 everywhere: δ = 16/4 = 4.
        // Cross blocks hold 8 entries of 1/4: 2·2 = 4.
        let g = part(&[0, 0, 0, 0]);
        let d = b_l1_discrepancy(&gs, &g).unwrap();
        assert!((d.direct - 4.0).abs() < 1e-12 && (d.cross_block - 4.0).abs() < 1e-12);
        let (x, y) = b_l1_discrepancy_exact(&gs, &g).unwrap();
        assert_eq!((x, y), (Rational64::from(4), Rational64::from(4)));
    }

    #[test]
    fn kmeans_criterion_examples() {
        let data = Matrix::from_rows(&[vec![0.0], vec![2.0], vec![7.0]]).unwrap();
        assert_eq!(kmeans_criterion(&data, &part(&[0, 1, 2])).unwrap(), 0.0);
        assert_eq!(kmeans_criterion(&data, &part(&[0, 0, 1])).unwrap(), 2.0);
        assert_eq!(
            kmeans_criterion(&data, &part(&[0, 0, 1])).unwrap(),
            kmeans_criterion(&data, &part(&[1, 1, 0])).unwrap()
        );
        assert!(kmeans_criterion(&data, &part(&[0, 0])).is_err());
    }

    #[test]
    fn err_vs_partnership_examples() {
        let gs = part(&[0, 0, 1, 1]);
        assert_eq!(err_vs_partnership_check(&gs, &gs).unwrap(), (0.0, 0.0));
        let (lhs, rhs) = err_vs_partnership_check(&part(&[0, 0, 0, 1]), &gs).unwrap();
        // pairs (0,2),(1,2),(2,3) disagree in both orders: 6/12, tight against 2·err.
        assert_eq!(lhs, 0.5);
        assert_eq!(rhs, 0.5);
    }

    fn labels_strategy() -> impl Strategy<Value = (Vec<usize>, Vec<usize>, Vec<usize>)> {
        (1usize..25, 1usize..6).prop_flat_map(|(n, k)| {
            (
                proptest::collection::vec(0..k, n),
                proptest::collection::vec(0..k, n),
                proptest::collection::vec(0..k, n),
            )
        })
    }

    proptest! {
        #[test]
        fn err_is_a_pseudometric((a, b, c) in labels_strategy()) {
            let (a, b, c) = (part(&a), part(&b), part(&c));
            let ab = misclassification_error(&a, &b).unwrap();
            let ba = misclassification_error(&b, &a).unwrap();
            let bc = misclassification_error(&b, &c).unwrap();
            let ac = misclassification_error(&a, &c).unwrap();
            prop_assert_eq!(ab, ba);
            prop_assert!(ac <= ab + bc + 1e-12);
            prop_assert_eq!(misclassification_error(&a, &a).unwrap(), 0.0);
            prop_assert!((0.0..=1.0).contains(&ab));
            prop_assert_eq!(ab, misclassification_error_brute(&a, &b).unwrap());
            prop_assert_eq!(ab, misclassification_error(&a.canonical(), &b).unwrap());
        }

        #[test]
        fn l1_forms_agree((a, b, _c) in labels_strategy()) {
            let (a, b) = (part(&a), part(&b));
            let d = b_l1_discrepancy(&a, &b).unwrap();
            prop_assert!((d.direct - d.cross_block).abs() < 1e-10);
            let (x, y) = b_l1_discrepancy_exact(&a, &b).unwrap();
            prop_assert_eq!(x, y);
        }

        #[test]
        fn b_is_a_projection((a, _b, _c) in labels_strategy()) {
            let g = part(&a);
            let b = normalized_partnership_exact(&g).unwrap();
            prop_assert_eq!(rational_matmul(&b, &b), b.clone());
            let trace: Rational64 = (0..g.len()).map(|i| b[i][i]).sum();
            prop_assert_eq!(trace, Rational64::from(g.num_nonempty() as i64));
            for row in &b {
                prop_assert_eq!(row.iter().copied().sum::<Rational64>(), Rational64::from(1));
                prop_assert!(row.iter().all(|v| !v.is_negative()));
            }
        }
    }
}
