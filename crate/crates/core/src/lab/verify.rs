//! Invariant suites with counterexample reporting.
//!
//! Each check runs a deterministic battery and stops at the first failing
//! case, which is recorded verbatim. The operations under test are reached
//! through [`Ops`] so that a deliberately broken implementation can be swapped
//! in to confirm that the suite notices.

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::cluster::{exact_kmeans, exact_kmeans_enumerate, lloyd, ExactKMeansOptions};
use crate::error::{Error, Result};
use crate::lowdegree::{
    corr_bound_sum, corr_sq_upper_floor, cross_parity_profile, cumulant_bound_holds, for_each_alpha,
    graph_stats, mc_moment, moment_bound_holds, null_cumulant_filter, numbergroups_check,
    parity_probability_brute, zeta_exact, AlphaMatrix, CumulantEngine,
};
use crate::matrix::Matrix;
use crate::metrics::{
    b_l1_discrepancy_exact, err_vs_l1_check, err_vs_partnership_check, kmeans_criterion,
    misclassification_error, misclassification_error_brute,
};
use crate::partition::Partition;
use crate::rng::stream_rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Metrics,
    Cluster,
    Lowdegree,
    All,
}

impl Suite {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "metrics" => Ok(Suite::Metrics),
            "cluster" => Ok(Suite::Cluster),
            "lowdegree" => Ok(Suite::Lowdegree),
            "all" => Ok(Suite::All),
            _ => Err(Error::Config(format!("unknown suite {s:?}"))),
        }
    }
}

/// Operations exercised by the suites.
#[derive(Clone, Copy)]
pub struct Ops {
    pub parity_probability: fn(&AlphaMatrix, u64) -> Result<BigRational>,
}

impl Default for Ops {
    fn default() -> Self {
        Self { parity_probability: crate::lowdegree::parity_probability }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub suite: Suite,
    pub name: String,
    pub passed: bool,
    pub cases: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Case counter plus the first failure.
struct Battery {
    cases: u64,
    failure: Option<String>,
}

impl Battery {
    fn new() -> Self {
        Self { cases: 0, failure: None }
    }

    /// Records one case; returns whether to keep going.
    fn case(&mut self, ok: bool, describe: impl FnOnce() -> String) -> bool {
        self.cases += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(describe());
        }
        self.failure.is_none()
    }

    fn finish(self, suite: Suite, name: &str, outcome: Result<()>) -> CheckResult {
        let counterexample = match outcome {
            Err(e) => Some(format!("error: {e}")),
            Ok(()) => self.failure,
        };
        CheckResult { suite, name: name.into(), passed: counterexample.is_none(), cases: self.cases, counterexample }
    }
}

fn run_check(suite: Suite, name: &str, body: impl FnOnce(&mut Battery) -> Result<()>) -> CheckResult {
    let mut b = Battery::new();
    let outcome = body(&mut b);
    b.finish(suite, name, outcome)
}

fn random_partition(rng: &mut impl Rng, n: usize, k: usize) -> Partition {
    Partition::new((0..n).map(|_| rng.gen_range(0..k)).collect(), k).expect("in range")
}

fn balanced_partition(rng: &mut impl Rng, n: usize, k: usize) -> Partition {
    let mut labels: Vec<usize> = (0..n).map(|i| i % k).collect();
    labels.shuffle(rng);
    Partition::new(labels, k).expect("in range")
}

fn metrics_suite() -> Vec<CheckResult> {
    let s = Suite::Metrics;
    vec![
        run_check(s, "hungarian_matches_brute_force", |b| {
            let mut rng = stream_rng(0x6d31, 0);
            for _ in 0..300 {
                let n = rng.gen_range(1..=20);
                let (k1, k2) = (rng.gen_range(1..=5), rng.gen_range(1..=5));
                let (g, h) = (random_partition(&mut rng, n, k1), random_partition(&mut rng, n, k2));
                let (fast, slow) = (misclassification_error(&g, &h)?, misclassification_error_brute(&g, &h)?);
                if !b.case(fast == slow, || format!("G={:?} G*={:?}: {fast} vs {slow}", g.labels(), h.labels())) {
                    break;
                }
            }
            Ok(())
        }),
        run_check(s, "partnership_vs_err", |b| {
            let mut rng = stream_rng(0x6d32, 0);
            for _ in 0..300 {
                let n = rng.gen_range(2..=30);
                let k = rng.gen_range(1..=5);
                let (g, h) = (random_partition(&mut rng, n, k), random_partition(&mut rng, n, k));
                let (lhs, rhs) = err_vs_partnership_check(&g, &h)?;
                if !b.case(lhs <= rhs + 1e-12, || format!("G={:?} G*={:?}: {lhs} > {rhs}", g.labels(), h.labels())) {
                    break;
                }
            }
            Ok(())
        }),
        run_check(s, "err_vs_l1_discrepancy", |b| {
            let mut rng = stream_rng(0x6d33, 0);
            for _ in 0..300 {
                let k = rng.gen_range(1..=4);
                let n = k * rng.gen_range(1..=8);
                let (g, h) = (random_partition(&mut rng, n, k), balanced_partition(&mut rng, n, k));
                let (err, rhs) = err_vs_l1_check(&h, &g)?;
                if !b.case(err <= rhs + 1e-12, || format!("G={:?} G*={:?}: {err} > {rhs}", g.labels(), h.labels())) {
                    break;
                }
            }
            Ok(())
        }),
        run_check(s, "l1_forms_agree", |b| {
            let mut rng = stream_rng(0x6d34, 0);
            for _ in 0..200 {
                let n = rng.gen_range(1..=15);
                let k = rng.gen_range(1..=4);
                let (g, h) = (random_partition(&mut rng, n, k), random_partition(&mut rng, n, k));
                let (direct, block) = b_l1_discrepancy_exact(&h, &g)?;
                if !b.case(direct == block, || format!("G={:?} G*={:?}: {direct} vs {block}", g.labels(), h.labels())) {
                    break;
                }
            }
            Ok(())
        }),
        run_check(s, "err_triangle_inequality", |b| {
            let mut rng = stream_rng(0x6d35, 0);
            for _ in 0..200 {
                let n = rng.gen_range(1..=20);
                let k = rng.gen_range(1..=4);
                let [a, c, d] = [0; 3].map(|_| random_partition(&mut rng, n, k));
                let lhs = misclassification_error(&a, &d)?;
                let rhs = misclassification_error(&a, &c)? + misclassification_error(&c, &d)?;
                if !b.case(lhs <= rhs + 1e-12, || format!("{:?} {:?} {:?}", a.labels(), c.labels(), d.labels())) {
                    break;
                }
            }
            Ok(())
        }),
    ]
}

fn random_data(rng: &mut impl Rng, n: usize, p: usize) -> Matrix {
    let data = (0..n * p).map(|_| rng.gen_range(-3.0..3.0)).collect();
    Matrix::from_vec(n, p, data).expect("sized")
}

fn cluster_suite() -> Vec<CheckResult> {
    let s = Suite::Cluster;
    vec![
        run_check(s, "exact_matches_enumeration", |b| {
            let mut rng = stream_rng(0xc1, 0);
            for _ in 0..40 {
                let n = rng.gen_range(1..=8);
                let k = rng.gen_range(1..=3);
                let data = random_data(&mut rng, n, 2);
                let bb = exact_kmeans(&data, k, ExactKMeansOptions::default())?;
                let (_, c) = exact_kmeans_enumerate(&data, k)?;
                if !b.case(bb.criterion == c, || format!("data={:?} K={k}: {} vs {c}", data.to_rows(), bb.criterion)) {
                    break;
                }
            }
            Ok(())
        }),
        run_check(s, "lloyd_not_below_exact", |b| {
            let mut rng = stream_rng(0xc2, 0);
            for t in 0..40 {
                let n = rng.gen_range(2..=9);
                let k = rng.gen_range(1..=3);
                let data = random_data(&mut rng, n, 2);
                let exact = exact_kmeans(&data, k, ExactKMeansOptions::default())?.criterion;
                let heur = lloyd(&data, k, 3, 100, t)?;
                let crit = kmeans_criterion(&data, &heur.partition)?;
                let ok = crit >= exact - 1e-9 * exact.abs().max(1.0)
                    && heur.history.windows(2).all(|w| w[1] <= w[0] + 1e-9 * w[0].abs().max(1.0));
                if !b.case(ok, || format!("data={:?} K={k}: lloyd {crit} exact {exact}", data.to_rows())) {
                    break;
                }
            }
            Ok(())
        }),
    ]
}

fn lowdegree_suite(ops: &Ops) -> Vec<CheckResult> {
    let s = Suite::Lowdegree;
    let parity = ops.parity_probability;
    vec![
        run_check(s, "parity_matches_label_enumeration", |b| {
            for k in 1..=3u64 {
                for_each_alpha(3, 2, 0, 4, |g| {
                    if b.failure.is_none() {
                        let (got, want) = (parity(g, k)?, parity_probability_brute(g, k)?);
                        b.case(got == want, || format!("γ={g} K={k}: {got} vs {want}"));
                    }
                    Ok(())
                })?;
            }
            Ok(())
        }),
        run_check(s, "filter_matches_recursion", |b| {
            let mut engine = CumulantEngine::new(2)?.with_shortcut(false);
            for_each_alpha(3, 2, 1, 3, |a| {
                if b.failure.is_none() && !null_cumulant_filter(a)? {
                    let kappa = engine.cumulant(a)?;
                    b.case(kappa.is_zero(), || format!("α={a}: κ={kappa}"));
                }
                Ok(())
            })
        }),
        run_check(s, "moment_and_group_bounds", |b| {
            for k in [2u64, 3] {
                for_each_alpha(4, 2, 0, 5, |g| {
                    if b.failure.is_none() {
                        let st = graph_stats(g);
                        let pr = parity(g, k)?;
                        let cr = cross_parity_profile(g)?.probability(k)?;
                        let cap = BigRational::new(1.into(), k.into());
                        let ok = moment_bound_holds(&pr, &st, k, &BigRational::one())
                            && moment_bound_holds(&cr, &st, k, &cap)
                            && numbergroups_check(g)?;
                        b.case(ok, || format!("γ={g} K={k}: P={pr}, cross={cr}"));
                    }
                    Ok(())
                })?;
            }
            Ok(())
        }),
        run_check(s, "cumulant_bound", |b| {
            for k in [2u64, 3] {
                let mut engine = CumulantEngine::new(k)?;
                for_each_alpha(3, 2, 1, 4, |a| {
                    if b.failure.is_none() && null_cumulant_filter(a)? {
                        let kappa = engine.cumulant(a)?;
                        let ok = kappa.eps_degree == a.weight() && cumulant_bound_holds(&kappa.coeff, &graph_stats(a), k);
                        b.case(ok, || format!("α={a} K={k}: κ={kappa}"));
                    }
                    Ok(())
                })?;
            }
            Ok(())
        }),
        run_check(s, "monte_carlo_moments", |b| {
            let cases: [&[(usize, usize, u32)]; 4] = [
                &[(0, 0, 1), (1, 0, 1)],
                &[(0, 0, 1), (1, 0, 1), (0, 1, 1), (1, 1, 1)],
                &[(0, 0, 2), (1, 1, 2), (2, 1, 1), (0, 1, 1)],
                &[(0, 0, 1), (1, 0, 1), (2, 0, 1), (3, 0, 1)],
            ];
            for (i, e) in cases.iter().enumerate() {
                let g = AlphaMatrix::from_entries(4, 2, e)?;
                let exact: f64 = num_traits::ToPrimitive::to_f64(&parity(&g, 2)?).unwrap_or(f64::NAN);
                let mc = mc_moment(&g, 2, 1.0, 200_000, 0x3c + i as u64)?;
                if !b.case((mc.estimate - exact).abs() <= 4.0 * mc.stderr + 1e-12, || {
                    format!("γ={g}: exact {exact}, MC {} ± {}", mc.estimate, mc.stderr)
                }) {
                    break;
                }
            }
            Ok(())
        }),
        run_check(s, "correlation_sum_below_bound", |b| {
            let delta_bar_sq = BigRational::new(1.into(), 200.into());
            for (n, p, k, d) in [(2usize, 2usize, 2usize, 2u32), (2, 3, 2, 2)] {
                let zeta = zeta_exact(n, p, k, &delta_bar_sq, d);
                let eps_sq = &delta_bar_sq / BigRational::from_integer(p.into());
                let sum = corr_bound_sum(n, p, d, k, &eps_sq)?.value;
                let bound = corr_sq_upper_floor(k, &zeta)?;
                if !b.case(sum <= bound && !sum.is_zero(), || format!("n={n} p={p} K={k} D={d}: {sum} > {bound}")) {
                    break;
                }
            }
            Ok(())
        }),
    ]
}

pub fn verify(suite: Suite) -> VerifyReport {
    verify_with(suite, &Ops::default())
}

pub fn verify_with(suite: Suite, ops: &Ops) -> VerifyReport {
    let mut checks = Vec::new();
    if matches!(suite, Suite::Metrics | Suite::All) {
        checks.extend(metrics_suite());
    }
    if matches!(suite, Suite::Cluster | Suite::All) {
        checks.extend(cluster_suite());
    }
    if matches!(suite, Suite::Lowdegree | Suite::All) {
        checks.extend(lowdegree_suite(ops));
    }
    VerifyReport { passed: checks.iter().all(|c| c.passed), checks }
}
