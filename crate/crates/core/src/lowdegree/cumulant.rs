//! Joint cumulants `κ_α` of `x` and the entries of `X`, through the recursion
//! `κ_α = E[xX^α] − Σ_{β⪇α} E[X^{α−β}]·C(α,β)·κ_β`, `κ₀ = 1/K`.

use std::collections::HashMap;
use std::io::Write;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::alpha::{graph_stats, null_cumulant_filter, AlphaMatrix};
use super::moments::{cross_parity_profile, parity_profile};
use super::scaled::{ratio, ScaledRational};
use crate::error::{Error, Result};

pub const DEFAULT_MAX_WEIGHT: u32 = 6;

/// Memoizing evaluator for one value of `K`. Coefficients are stored without
/// the `ε^{|α|}` factor.
#[derive(Debug, Clone)]
pub struct CumulantEngine {
    k: u64,
    shortcut: bool,
    max_weight: u32,
    moments: HashMap<AlphaMatrix, BigRational>,
    cumulants: HashMap<AlphaMatrix, BigRational>,
}

impl CumulantEngine {
    pub fn new(k: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("K must be positive".into()));
        }
        Ok(Self {
            k,
            shortcut: true,
            max_weight: DEFAULT_MAX_WEIGHT,
            moments: HashMap::new(),
            cumulants: HashMap::new(),
        })
    }

    /// With `false`, every cumulant is obtained from the full recursion.
    pub fn with_shortcut(mut self, shortcut: bool) -> Self {
        self.shortcut = shortcut;
        self
    }

    pub fn with_max_weight(mut self, max_weight: u32) -> Self {
        self.max_weight = max_weight;
        self
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn cumulant(&mut self, alpha: &AlphaMatrix) -> Result<ScaledRational> {
        if alpha.weight() > self.max_weight {
            return Err(Error::TooLarge(format!(
                "|α| = {} exceeds the cumulant limit {}",
                alpha.weight(),
                self.max_weight
            )));
        }
        if alpha.n() < 2 {
            return Err(Error::InvalidParameter("cumulants need n ≥ 2".into()));
        }
        Ok(ScaledRational::new(alpha.weight(), self.kappa(alpha)?))
    }

    fn moment_coeff(&mut self, gamma: &AlphaMatrix) -> Result<BigRational> {
        if let Some(v) = self.moments.get(gamma) {
            return Ok(v.clone());
        }
        let v = parity_profile(gamma)?.probability(self.k)?;
        self.moments.insert(gamma.clone(), v.clone());
        Ok(v)
    }

    fn kappa(&mut self, alpha: &AlphaMatrix) -> Result<BigRational> {
        if alpha.is_zero() {
            return Ok(ratio(1, self.k));
        }
        if let Some(v) = self.cumulants.get(alpha) {
            return Ok(v.clone());
        }
        if self.shortcut && !null_cumulant_filter(alpha)? {
            self.cumulants.insert(alpha.clone(), BigRational::zero());
            return Ok(BigRational::zero());
        }
        let mut value = cross_parity_profile(alpha)?.probability(self.k)?;
        let entries: Vec<(usize, usize, u32)> = alpha.entries().collect();
        let mut beta: Vec<u32> = vec![0; entries.len()];
        loop {
            let strict = beta.iter().zip(&entries).any(|(&b, &(_, _, a))| b < a);
            if strict {
                let sub = AlphaMatrix::from_entries(
                    alpha.n(),
                    alpha.p(),
                    &entries.iter().zip(&beta).map(|(&(i, j, _), &b)| (i, j, b)).collect::<Vec<_>>(),
                )?;
                let m = self.moment_coeff(&alpha.minus(&sub))?;
                if !m.is_zero() {
                    let kb = self.kappa(&sub)?;
                    if !kb.is_zero() {
                        let binom = entries
                            .iter()
                            .zip(&beta)
                            .fold(BigUint::one(), |acc, (&(_, _, a), &b)| acc * binomial(a, b));
                        value -= m * kb * BigRational::from_integer(BigInt::from(binom));
                    }
                }
            }
            // odometer over 0 ≤ β ≤ α
            let mut pos = 0;
            loop {
                if pos == entries.len() {
                    self.cumulants.insert(alpha.clone(), value.clone());
                    return Ok(value);
                }
                if beta[pos] < entries[pos].2 {
                    beta[pos] += 1;
                    break;
                }
                beta[pos] = 0;
                pos += 1;
            }
        }
    }
}

fn binomial(n: u32, k: u32) -> BigUint {
    (0..k).fold(BigUint::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// `κ_α` with a fresh engine.
pub fn cumulant(alpha: &AlphaMatrix, k: u64) -> Result<ScaledRational> {
    CumulantEngine::new(k)?.cumulant(alpha)
}

#[derive(Debug, Clone, Serialize)]
struct CumulantRow {
    support_encoding: String,
    #[serde(rename = "|alpha|")]
    weight: u32,
    m: usize,
    r: usize,
    cc: usize,
    kappa_numerator: String,
    kappa_denominator: String,
    eps_degree: u32,
}

/// Writes `(α, κ_α)` pairs as CSV.
pub fn write_cumulant_table<W: Write>(rows: &[(AlphaMatrix, ScaledRational)], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for (alpha, kappa) in rows {
        let s = graph_stats(alpha);
        w.serialize(CumulantRow {
            support_encoding: alpha.encode(),
            weight: alpha.weight(),
            m: s.m,
            r: s.r,
            cc: s.cc,
            kappa_numerator: kappa.coeff.numer().to_string(),
            kappa_denominator: kappa.coeff.denom().to_string(),
            eps_degree: kappa.eps_degree,
        })?;
    }
    w.flush()?;
    Ok(())
}
