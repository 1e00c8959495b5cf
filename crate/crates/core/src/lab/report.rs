use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lowdegree::{bound_report, corr_bound_sum, empirical_mmse, BoundReport, EmpiricalMmse};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrSumSummary {
    pub value: f64,
    pub numerator: String,
    pub denominator: String,
    pub nonzero_terms: usize,
    pub enumerated: String,
    /// `1/K − value`, the MMSE lower bound implied by the exact sum.
    pub mmse_lower: f64,
}

/// One document comparing the closed-form bound, the exact correlation sum,
/// the regression estimate and the trivial constant predictor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LowDegreeReport {
    pub n: usize,
    pub p: usize,
    #[serde(rename = "K")]
    pub k: usize,
    pub delta_bar_sq: f64,
    #[serde(rename = "D")]
    pub d: u32,
    pub samples: usize,
    pub seed: u64,
    pub bound: BoundReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corr_bound_sum: Option<CorrSumSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corr_bound_sum_omitted: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub empirical_mmse: Option<EmpiricalMmse>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub empirical_mmse_omitted: Option<String>,
    /// `1/K − 1/K²`, the MSE of the constant predictor `1/K`.
    pub trivial_mse: f64,
    /// `empirical ≥ mmse_lower − 3·stderr`, when the estimate is available.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub consistent: Option<bool>,
}

fn omitted(e: Error) -> Result<String> {
    match e {
        Error::BudgetExceeded(_) | Error::TooLarge(_) | Error::InvalidParameter(_) => Ok(e.to_string()),
        other => Err(other),
    }
}

pub fn lowdegree_report(
    n: usize,
    p: usize,
    k: usize,
    delta_bar_sq: f64,
    d: u32,
    samples: usize,
    seed: u64,
) -> Result<LowDegreeReport> {
    let bound = bound_report(n, p, k, delta_bar_sq, d)?;
    let kf = k as f64;
    let eps_sq = BigRational::from_float(delta_bar_sq)
        .ok_or_else(|| Error::InvalidParameter(format!("delta_bar_sq {delta_bar_sq} is not finite")))?
        / BigRational::from_integer(p.into());
    let (corr, corr_omitted) = match corr_bound_sum(n, p, d, k, &eps_sq) {
        Ok(s) => {
            let value = s.value.to_f64().unwrap_or(f64::NAN);
            (
                Some(CorrSumSummary {
                    value,
                    numerator: s.value.numer().to_string(),
                    denominator: s.value.denom().to_string(),
                    nonzero_terms: s.nonzero_terms,
                    enumerated: s.enumerated.to_string(),
                    mmse_lower: 1.0 / kf - value,
                }),
                None,
            )
        }
        Err(e) => (None, Some(omitted(e)?)),
    };
    let (emp, emp_omitted) = match empirical_mmse(n, p, k, delta_bar_sq, d, samples, seed) {
        Ok(e) => (Some(e), None),
        Err(e) => (None, Some(omitted(e)?)),
    };
    let consistent = emp.as_ref().map(|e| e.estimate >= bound.mmse_lower - 3.0 * e.stderr);
    Ok(LowDegreeReport {
        n,
        p,
        k,
        delta_bar_sq,
        d,
        samples,
        seed,
        bound,
        corr_bound_sum: corr,
        corr_bound_sum_omitted: corr_omitted,
        empirical_mmse: emp,
        empirical_mmse_omitted: emp_omitted,
        trivial_mse: 1.0 / kf - 1.0 / (kf * kf),
        consistent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_zero_agrees_with_trivial() {
        let r = lowdegree_report(3, 2, 2, 0.3, 0, 20_000, 1).unwrap();
        assert_eq!(r.bound.mmse_lower, r.trivial_mse);
        let c = r.corr_bound_sum.as_ref().unwrap();
        assert_eq!(c.mmse_lower, r.trivial_mse);
        let e = r.empirical_mmse.as_ref().unwrap();
        assert!((e.estimate - r.trivial_mse).abs() < 4.0 * e.stderr + 1e-3, "{e:?}");
        assert_eq!(r.consistent, Some(true));
    }

    #[test]
    fn no_signal_bound_is_trivial() {
        let r = lowdegree_report(2, 2, 3, 0.0, 2, 5000, 2).unwrap();
        assert_eq!(r.bound.mmse_lower, r.trivial_mse);
    }

    #[test]
    fn oversized_parts_are_omitted() {
        let r = lowdegree_report(6, 6, 2, 0.01, 3, 100, 3).unwrap();
        assert!(r.corr_bound_sum.is_some());
        assert!(r.empirical_mmse.is_none() && r.empirical_mmse_omitted.is_some());
        let json = serde_json::to_value(&r).unwrap();
        assert!(json.get("empirical_mmse").is_none());
        assert!(json["empirical_mmse_omitted"].is_string());
    }
}
