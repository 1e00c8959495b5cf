//! Acceptance suite. Each criterion prints one PASS/FAIL line; the process
//! exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, ToPrimitive};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use clustlab::cluster::{exact_kmeans, exact_kmeans_enumerate, ExactKMeansOptions};
use clustlab::lab::{recovery_curve, run_sweep, write_records, Algorithm, SweepConfig};
use clustlab::lowdegree::{
    bound_report, corr_bound_sum, corr_sq_upper_floor, cross_parity_profile, cumulant_bound_holds, empirical_mmse,
    for_each_alpha, graph_stats, mc_moment, moment, moment_bound_holds, null_cumulant_filter, numbergroups_holds,
    parity_profile, zeta_exact, AlphaMatrix, CumulantEngine,
};
use clustlab::metrics::{b_l1_discrepancy_exact, misclassification_error, misclassification_error_brute};
use clustlab::model::{balancedness, sample_prior, Prior};
use clustlab::Partition;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn all_alphas(n: usize, p: usize, min_w: u32, max_w: u32) -> Vec<AlphaMatrix> {
    let mut out = Vec::new();
    for_each_alpha(n, p, min_w, max_w, |a| {
        out.push(a.clone());
        Ok(())
    })
    .unwrap();
    out
}

fn null_cumulants() -> Outcome {
    let alphas = all_alphas(3, 2, 1, 4);
    let mut filtered = 0;
    let mut bad = Vec::new();
    for k in [2u64, 3, 4] {
        let mut engine = CumulantEngine::new(k).unwrap().with_shortcut(false);
        for a in &alphas {
            if !null_cumulant_filter(a).unwrap() {
                filtered += 1;
                let kappa = engine.cumulant(a).unwrap();
                if !kappa.is_zero() {
                    bad.push(format!("K={k} {a}: {kappa}"));
                }
            }
        }
    }
    outcome(
        bad.is_empty(),
        format!(
            "{} matrices x K in {{2,3,4}}, {filtered} filtered, {} nonzero{}",
            alphas.len(),
            bad.len(),
            bad.first().map(|b| format!(", e.g. {b}")).unwrap_or_default()
        ),
    )
}

fn random_gamma(r: &mut ChaCha8Rng) -> AlphaMatrix {
    let w = r.gen_range(1..=6);
    let entries: Vec<(usize, usize, u32)> = (0..w).map(|_| (r.gen_range(0..4), r.gen_range(0..3), 1)).collect();
    AlphaMatrix::from_entries(4, 3, &entries).unwrap()
}

fn monte_carlo_moments() -> Outcome {
    let mut r = rng(2);
    let mut agree = 0;
    let mut worst = 0.0f64;
    for case in 0..50u64 {
        let gamma = random_gamma(&mut r);
        let k = r.gen_range(2..=4u64);
        let eps = r.gen_range(0.5..1.5);
        let exact = moment(&gamma, k).unwrap().to_f64(eps);
        let mc = mc_moment(&gamma, k, eps, 1_000_000, 1000 + case).unwrap();
        let diff = (mc.estimate - exact).abs();
        // deterministic products have zero stderr; allow only representation error
        let slack = 1e-12 * exact.abs().max(1.0);
        if diff <= 4.0 * mc.stderr + slack {
            agree += 1;
        }
        if mc.stderr > 0.0 {
            worst = worst.max(diff / mc.stderr);
        }
    }
    outcome(agree >= 48, format!("{agree}/50 within 4 stderr, largest z = {worst:.2}"))
}

fn lemma_bounds() -> Outcome {
    let ks = [2u64, 3, 4, 5];
    let gammas = all_alphas(5, 3, 1, 8);
    let violations: Vec<String> = gammas
        .par_iter()
        .flat_map_iter(|g| {
            let stats = graph_stats(g);
            let profile = parity_profile(g).unwrap();
            let cross = cross_parity_profile(g).unwrap();
            let mut v = Vec::new();
            if !numbergroups_holds(&profile, &stats) {
                v.push(format!("groups {g}"));
            }
            for &k in &ks {
                let cap = BigRational::new(BigInt::one(), BigInt::from(k));
                if !moment_bound_holds(&profile.probability(k).unwrap(), &stats, k, &BigRational::one()) {
                    v.push(format!("moment K={k} {g}"));
                }
                if !moment_bound_holds(&cross.probability(k).unwrap(), &stats, k, &cap) {
                    v.push(format!("cross moment K={k} {g}"));
                }
            }
            v
        })
        .collect();
    let alphas: Vec<AlphaMatrix> =
        all_alphas(5, 3, 1, 5).into_iter().filter(|a| null_cumulant_filter(a).unwrap()).collect();
    let cumulant_violations: Vec<String> = ks
        .par_iter()
        .flat_map_iter(|&k| {
            let mut engine = CumulantEngine::new(k).unwrap();
            alphas
                .iter()
                .filter_map(|a| {
                    let kappa = engine.cumulant(a).unwrap();
                    (kappa.eps_degree != a.weight() || !cumulant_bound_holds(&kappa.coeff, &graph_stats(a), k))
                        .then(|| format!("cumulant K={k} {a}: {kappa}"))
                })
                .collect::<Vec<_>>()
        })
        .collect();
    let total = violations.len() + cumulant_violations.len();
    outcome(
        total == 0,
        format!(
            "{} gammas and {} filter-passing alphas on 5x3, K in {{2,3,4,5}}: {total} violations{}",
            gammas.len(),
            alphas.len(),
            violations.iter().chain(&cumulant_violations).next().map(|s| format!(", e.g. {s}")).unwrap_or_default()
        ),
    )
}

fn theorem_chain() -> Outcome {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mut lines = Vec::new();
    let mut ok = true;
    for (n, p, k, d) in [(2, 2, 2, 2), (2, 2, 2, 3), (3, 3, 2, 2), (3, 3, 3, 2)] {
        // largest power-of-two Δ̄² with ζ < 1/2, so ζ ∈ [1/8, 1/2)
        let mut dbs = BigRational::one();
        while zeta_exact(n, p, k, &dbs, d) >= half {
            dbs = dbs / BigInt::from(2);
        }
        let zeta = zeta_exact(n, p, k, &dbs, d);
        let eps_sq = &dbs / BigInt::from(p);
        let sum = corr_bound_sum(n, p, d, k, &eps_sq).unwrap().value;
        let upper = corr_sq_upper_floor(k, &zeta).unwrap();
        ok &= sum <= upper;
        lines.push(format!(
            "({n},{p},{k},{d}) dbs={dbs} zeta={:.3} sum={:.6} upper={:.6}",
            zeta.to_f64().unwrap(),
            sum.to_f64().unwrap(),
            upper.to_f64().unwrap()
        ));
    }
    let bound = bound_report(4, 4, 2, 0.1, 2).unwrap();
    let emp = empirical_mmse(4, 4, 2, 0.1, 2, 50_000, 4).unwrap();
    ok &= emp.estimate >= bound.mmse_lower - 3.0 * emp.stderr;
    lines.push(format!(
        "mmse {:.4} ± {:.4} vs lower {:.4} (zeta {:.2}, applicable {})",
        emp.estimate, emp.stderr, bound.mmse_lower, bound.zeta, bound.applicable
    ));
    outcome(ok, lines.join("; "))
}

fn random_partition(r: &mut ChaCha8Rng, n: usize, k: usize) -> Partition {
    Partition::new((0..n).map(|_| r.gen_range(0..k)).collect(), k).unwrap()
}

fn balanced_pair(r: &mut ChaCha8Rng) -> (Partition, Partition) {
    let k = r.gen_range(2..=5);
    let n = k * r.gen_range(1..=40 / k);
    let mut star: Vec<usize> = (0..n).map(|i| i % k).collect();
    star.shuffle(r);
    let mut est = star.clone();
    if r.gen_bool(0.5) {
        est.shuffle(r);
    } else {
        for _ in 0..r.gen_range(0..=n / 2) {
            let (a, b) = (r.gen_range(0..n), r.gen_range(0..n));
            est.swap(a, b);
        }
    }
    (Partition::new(star, k).unwrap(), Partition::new(est, k).unwrap())
}

fn ordered_disagreements(g: &Partition, h: &Partition) -> usize {
    let n = g.len();
    (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| i != j && (g.label(i) == g.label(j)) != (h.label(i) == h.label(j)))
        .count()
}

fn metric_oracles() -> Outcome {
    let mut r = rng(5);
    let mut mismatches = 0;
    for _ in 0..1000 {
        let k = r.gen_range(1..=5);
        let n = r.gen_range(1..=40);
        let g = random_partition(&mut r, n, k);
        let h = random_partition(&mut r, n, k);
        if misclassification_error(&g, &h).unwrap() != misclassification_error_brute(&g, &h).unwrap() {
            mismatches += 1;
        }
    }
    let mut partnership_violations = 0;
    let mut l1_violations = 0;
    for _ in 0..1000 {
        let (star, est) = balanced_pair(&mut r);
        let n = star.len() as i64;
        let missed = (misclassification_error(&est, &star).unwrap() * n as f64).round() as i64;
        let err = Rational64::new(missed, n);
        // ‖M^G − M*‖²_F counts ordered pairs; compare against 2·err·n(n−1) in integers
        if ordered_disagreements(&est, &star) as i64 > 2 * missed * (n - 1) {
            partnership_violations += 1;
        }
        let bal = balancedness(&star).unwrap();
        let (delta, _) = b_l1_discrepancy_exact(&star, &est).unwrap();
        let rhs = Rational64::from(2) * Rational64::new(bal.m_plus as i64, bal.m as i64) * delta / n;
        if err > rhs {
            l1_violations += 1;
        }
    }
    outcome(
        mismatches + partnership_violations + l1_violations == 0,
        format!(
            "hungarian vs brute force: {mismatches}/1000 mismatches; partnership: {partnership_violations}/1000, \
             l1 discrepancy: {l1_violations}/1000 violations"
        ),
    )
}

fn exact_kmeans_oracle() -> Outcome {
    let mut r = rng(6);
    let mut mismatches = 0;
    let mut nodes = 0;
    for t in 0..200u64 {
        let k = r.gen_range(1..=3);
        let n = r.gen_range(k.max(2)..=10);
        let p = r.gen_range(1..=4);
        let inst = sample_prior(Prior::BernoulliHypercube, n, p, k, r.gen_range(0.0..6.0), 1.0, t).unwrap();
        let bb = exact_kmeans(&inst.data, k, ExactKMeansOptions::default()).unwrap();
        let (_, best) = exact_kmeans_enumerate(&inst.data, k).unwrap();
        nodes += bb.nodes;
        if !bb.optimal || bb.criterion != best {
            mismatches += 1;
        }
    }
    outcome(mismatches == 0, format!("{mismatches}/200 mismatches, {nodes} search nodes"))
}

fn recovery_phase() -> Outcome {
    let (n, p, k) = (48usize, 192usize, 3usize);
    let ln = (n as f64).ln();
    let high = 40.0 * (ln + (p as f64 * ln).sqrt()) / 10.0;
    let grid: Vec<f64> = std::iter::once(0.1).chain((1..=10).map(|i| high * i as f64 / 10.0)).collect();
    let mut ok = true;
    let mut lines = Vec::new();
    for alg in [Algorithm::SingleLinkage, Algorithm::Lloyd] {
        let curve = recovery_curve(n, p, k, &grid, alg, 100, 7).unwrap();
        let low_rate = curve.points.first().unwrap().exact_recovery_rate;
        let high_rate = curve.points.last().unwrap().exact_recovery_rate;
        ok &= low_rate <= 0.05 && high_rate >= 0.95 && curve.isotonic_residual <= 0.05;
        let rates: Vec<String> = curve.points.iter().map(|pt| format!("{:.2}", pt.exact_recovery_rate)).collect();
        lines.push(format!(
            "{}: [{}] residual {:.3}",
            alg.name(),
            rates.join(" "),
            curve.isotonic_residual
        ));
    }
    outcome(ok, format!("grid 0.1..{high:.1}; {}", lines.join("; ")))
}

const SWEEP: &str = r#"{
  "schema_version": 1,
  "n": [10, 24], "p": [8, 30], "K": [2, 3], "delta_bar_sq": [0.0, 4.0, 30.0],
  "algorithms": ["exact_kmeans", "lloyd", "single_linkage", "spectral"],
  "trials": 3, "seed": 8, "D": 2
}"#;

fn sweep_determinism() -> Outcome {
    let cfg = SweepConfig::from_json(SWEEP).unwrap();
    let csv = |threads: Option<usize>| {
        let mut buf = Vec::new();
        write_records(&run_sweep(&cfg, threads).unwrap(), &mut buf).unwrap();
        buf
    };
    let reference = csv(Some(1));
    let same = [Some(2), Some(4), Some(7), None].into_iter().all(|t| csv(t) == reference);
    let rows = reference.iter().filter(|&&b| b == b'\n').count() - 1;
    outcome(same, format!("{rows} records, thread counts 1, 2, 4, 7 and default"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("null cumulants vanish exactly", null_cumulants),
        ("monte carlo moments", monte_carlo_moments),
        ("moment, cumulant and group-count bounds", lemma_bounds),
        ("correlation sum below the closed-form bound", theorem_chain),
        ("metric oracles", metric_oracles),
        ("exact k-means oracle", exact_kmeans_oracle),
        ("recovery phase behavior", recovery_phase),
        ("sweep determinism", sweep_determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        failed += usize::from(!o.passed);
        println!(
            "criterion {}: {} {name} ({:.1}s) {}",
            i + 1,
            if o.passed { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64(),
            o.detail
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
