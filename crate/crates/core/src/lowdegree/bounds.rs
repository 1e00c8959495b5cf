//! Closed-form low-degree bounds, the exact correlation sum, and the
//! combinatorial moment/cumulant/group-count inequalities.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::alpha::{graph_stats, null_cumulant_filter, topology_conditions, AlphaMatrix, GraphStats};
use super::cumulant::CumulantEngine;
use super::enumerate::{count_alphas, for_each_alpha};
use super::moments::ParityProfile;
use super::scaled::{pow_rational, ratio};
use crate::error::{Error, Result};
use crate::model::Prior;

/// Default cap on `C(np + D, D)` for [`corr_bound_sum`].
pub const CORR_ENUMERATION_BUDGET: u128 = 5_000_000;

/// Largest support for [`numbergroups_check`].
pub const MAX_GROUP_ROWS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DimensionRegime {
    /// `p ≥ n`: the bound uses `ζ_n`.
    HighDimensional,
    /// `p < n`: the bound uses `ζ̄_n`.
    LowDimensional,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub zeta: f64,
    pub zeta_bar: f64,
    pub regime: DimensionRegime,
    /// Whether the `ζ` of the active regime is below 1.
    pub applicable: bool,
    /// `1/K − corr_sq_upper`.
    pub mmse_lower: f64,
    /// `(1/K²)(1 + ζ/(1−√ζ)³)` when applicable, otherwise the trivial `E[x²] = 1/K`.
    pub corr_sq_upper: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

impl BoundReport {
    /// `ζ` of the active regime.
    pub fn active_zeta(&self) -> f64 {
        match self.regime {
            DimensionRegime::HighDimensional => self.zeta,
            DimensionRegime::LowDimensional => self.zeta_bar,
        }
    }
}

fn check_dims(n: usize, p: usize, k: usize) -> Result<()> {
    if n == 0 || p == 0 || k == 0 {
        return Err(Error::InvalidParameter(format!(
            "n, p, K must be positive (n={n}, p={p}, K={k})"
        )));
    }
    Ok(())
}

/// `(1/K²)(1 + ζ/(1−√ζ)³)` for `ζ < 1`.
pub fn corr_sq_upper(k: usize, zeta: f64) -> f64 {
    let kf = k as f64;
    (1.0 + zeta / (1.0 - zeta.sqrt()).powi(3)) / (kf * kf)
}

/// `ζ_n = Δ̄⁴D⁸(1+D)⁴/p · max(n/K², 1)` and `ζ̄_n = ζ_n·n/p`.
pub fn zeta(n: usize, p: usize, k: usize, delta_bar_sq: f64, d: u32) -> (f64, f64) {
    let (nf, pf, kf, df) = (n as f64, p as f64, k as f64, d as f64);
    let z = delta_bar_sq * delta_bar_sq * df.powi(8) * (1.0 + df).powi(4) / pf
        * (nf / (kf * kf)).max(1.0);
    (z, z * nf / pf)
}

pub fn bound_report(n: usize, p: usize, k: usize, delta_bar_sq: f64, d: u32) -> Result<BoundReport> {
    check_dims(n, p, k)?;
    if !(delta_bar_sq >= 0.0 && delta_bar_sq.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "delta_bar_sq must be nonnegative, got {delta_bar_sq}"
        )));
    }
    let (zeta, zeta_bar) = zeta(n, p, k, delta_bar_sq, d);
    let regime = if p >= n { DimensionRegime::HighDimensional } else { DimensionRegime::LowDimensional };
    let active = if p >= n { zeta } else { zeta_bar };
    let applicable = active < 1.0;
    let corr = if applicable { corr_sq_upper(k, active) } else { 1.0 / k as f64 };
    Ok(BoundReport {
        zeta,
        zeta_bar,
        regime,
        applicable,
        mmse_lower: 1.0 / k as f64 - corr,
        corr_sq_upper: corr,
        warning: None,
    })
}

/// [`bound_report`] for a given prior. Only the Bernoulli prior carries the
/// guarantee; the Gaussian prior reuses its formula with a warning.
pub fn bound_report_for_prior(
    prior: Prior,
    n: usize,
    p: usize,
    k: usize,
    delta_bar_sq: f64,
    d: u32,
) -> Result<BoundReport> {
    let mut report = bound_report(n, p, k, delta_bar_sq, d)?;
    match prior {
        Prior::BernoulliHypercube => {}
        Prior::GaussianPrior => {
            report.warning = Some(
                "Gaussian prior: the bound holds with an unspecified power of D; Bernoulli formula shown".into(),
            )
        }
        Prior::FixedMeans => {
            report.warning = Some("fixed means: the bound concerns the Bernoulli prior only".into())
        }
    }
    Ok(report)
}

/// Exact `ζ_n` for rational `Δ̄²`.
pub fn zeta_exact(n: usize, p: usize, k: usize, delta_bar_sq: &BigRational, d: u32) -> BigRational {
    let dd = BigInt::from(d);
    let poly = num_traits::pow(dd.clone(), 8) * num_traits::pow(dd + 1, 4);
    let ratio_nk = ratio(n as u64, (k * k) as u64);
    let factor = if ratio_nk > BigRational::one() { ratio_nk } else { BigRational::one() };
    delta_bar_sq * delta_bar_sq * BigRational::from_integer(poly) / BigRational::from_integer(p.into()) * factor
}

/// A rational `r ≤ (1/K²)(1 + ζ/(1−√ζ)³)` within about `10⁻¹²` of it, for
/// `0 ≤ ζ < 1`; the right side increases in `√ζ`, so a rational lower bound
/// on `√ζ` gives a lower bound on the whole expression.
pub fn corr_sq_upper_floor(k: usize, zeta: &BigRational) -> Result<BigRational> {
    if zeta.is_negative() || *zeta >= BigRational::one() {
        return Err(Error::InvalidParameter(format!("ζ = {zeta} outside [0, 1)")));
    }
    let scale = BigUint::from(10u64).pow(12);
    let num = zeta.numer().to_biguint().expect("nonnegative");
    let den = zeta.denom().to_biguint().expect("positive");
    // √(a/b) = √(ab)/b ≥ ⌊√(ab·S²)⌋/(bS)
    let root = (num * &den * &scale * &scale).sqrt();
    let s_lo = BigRational::new(BigInt::from(root), BigInt::from(den * scale));
    let gap = BigRational::one() - s_lo;
    let k2 = ratio(1, (k * k) as u64);
    Ok(k2 * (BigRational::one() + zeta / pow_rational(&gap, 3)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrBoundSum {
    /// `Σ_{|α|≤D} κ_α²/α!` at the given `ε²`.
    pub value: BigRational,
    /// Matrices with a nonzero cumulant (including `α = 0`).
    pub nonzero_terms: usize,
    /// Matrices enumerated.
    pub enumerated: u128,
}

/// Exact `Σ_{|α|≤D} κ_α²/α!` over `N^{n×p}` with `ε²` substituted.
pub fn corr_bound_sum(n: usize, p: usize, d: u32, k: usize, eps_sq: &BigRational) -> Result<CorrBoundSum> {
    corr_bound_sum_with_budget(n, p, d, k, eps_sq, CORR_ENUMERATION_BUDGET)
}

pub fn corr_bound_sum_with_budget(
    n: usize,
    p: usize,
    d: u32,
    k: usize,
    eps_sq: &BigRational,
    budget: u128,
) -> Result<CorrBoundSum> {
    check_dims(n, p, k)?;
    if n < 2 {
        return Err(Error::InvalidParameter("the correlation sum needs n ≥ 2".into()));
    }
    if eps_sq.is_negative() {
        return Err(Error::InvalidParameter("ε² must be nonnegative".into()));
    }
    let enumerated = count_alphas(n, p, d);
    if enumerated > budget {
        return Err(Error::BudgetExceeded(format!(
            "{enumerated} matrices with |α| ≤ {d} on {n}x{p} exceed the budget {budget}"
        )));
    }
    let mut survivors = Vec::new();
    for_each_alpha(n, p, 2, d, |alpha| {
        if topology_conditions(&graph_stats(alpha)) && null_cumulant_filter(alpha)? {
            survivors.push(alpha.clone());
        }
        Ok(())
    })?;
    let partial: Result<Vec<(BigRational, usize)>> = survivors
        .par_iter()
        .map_init(
            || CumulantEngine::new(k as u64).expect("K is positive").with_max_weight(d),
            |engine, alpha| {
                let kappa = engine.cumulant(alpha)?;
                if kappa.is_zero() {
                    return Ok((BigRational::zero(), 0));
                }
                let sq = &kappa * &kappa;
                let term = sq.substitute(eps_sq)?
                    / BigRational::from_integer(BigInt::from(alpha.factorial()));
                Ok((term, 1))
            },
        )
        .collect();
    let k2 = ratio(1, (k * k) as u64);
    let (value, nonzero) = partial?
        .into_iter()
        .fold((k2, 1), |(acc, c), (t, z)| (acc + t, c + z));
    Ok(CorrBoundSum { value, nonzero_terms: nonzero, enumerated })
}

/// `K^{e}` compared through squares: returns `lhs·K^{e⁺} ≤ rhs·K^{e⁻}`.
fn scaled_le(lhs: &BigRational, rhs: &BigRational, k: u64, exponent: i64) -> bool {
    let kp = BigRational::from_integer(BigInt::from(k).pow(exponent.unsigned_abs() as u32));
    if exponent >= 0 {
        lhs * kp <= *rhs
    } else {
        *lhs <= rhs * kp
    }
}

fn int_pow(base: u64, exp: u32) -> BigRational {
    BigRational::from_integer(BigInt::from(base).pow(exp))
}

/// Moment bound: `P ≤ min(cap, |γ|^{|γ|}·K^{−(l − |γ|/2 − CC)})` for the
/// parity probability `P = E[X^γ]/ε^{|γ|}` (cap 1), or the cross-moment
/// coefficient (cap `1/K`). Half-integer exponents are cleared by squaring.
pub fn moment_bound_holds(coeff: &BigRational, stats: &GraphStats, k: u64, cap: &BigRational) -> bool {
    if coeff > cap {
        return false;
    }
    let w = stats.edges;
    let exponent = 2 * stats.l as i64 - w as i64 - 2 * stats.cc as i64;
    scaled_le(&(coeff * coeff), &int_pow(w as u64, 2 * w), k, exponent)
}

/// Cumulant bound: `|κ| ≤ (1+|α|)^{|α|}·min(1/K, |α|^{|α|}·K^{−(l − |α|/2 − 1)})`
/// for the coefficient of `ε^{|α|}`.
pub fn cumulant_bound_holds(kappa: &BigRational, stats: &GraphStats, k: u64) -> bool {
    let w = stats.edges;
    let lead = int_pow(1 + w as u64, w);
    let abs = kappa.abs();
    if abs > &lead * ratio(1, k) {
        return false;
    }
    let exponent = 2 * stats.l as i64 - w as i64 - 2;
    let rhs = &lead * &lead * int_pow(w as u64, 2 * w);
    scaled_le(&(&abs * &abs), &rhs, k, exponent)
}

/// Group-count bound on a precomputed profile: every even partition has at
/// most `|γ|/2 − r + CC` blocks.
pub fn numbergroups_holds(profile: &ParityProfile, stats: &GraphStats) -> bool {
    match profile.max_even_blocks() {
        None => true,
        Some(b) => 2 * b as i64 <= stats.edges as i64 - 2 * stats.r as i64 + 2 * stats.cc as i64,
    }
}

/// Exhaustive group-count check over all set partitions of the support rows.
pub fn numbergroups_check(gamma: &AlphaMatrix) -> Result<bool> {
    let stats = graph_stats(gamma);
    if stats.m > MAX_GROUP_ROWS {
        return Err(Error::TooLarge(format!(
            "{} support rows exceed the limit {MAX_GROUP_ROWS}",
            stats.m
        )));
    }
    let profile = super::moments::parity_profile(gamma)?;
    Ok(numbergroups_holds(&profile, &stats))
}
