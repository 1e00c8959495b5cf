//! Hardness regimes of the high-dimensional (`p ≥ n`) clustering table.
//!
//! - Impossible: `Δ² < log K ∨ √(pK log K / n)`.
//! - Easy: `Δ² ≥ √(pK²/n) ∧ √(p log n)`.
//! - Hard: in between.
//!
//! Logarithms are natural; constants and polylog factors are set to 1.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Impossible,
    Hard,
    Easy,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Regime::Impossible => "impossible",
            Regime::Hard => "hard",
            Regime::Easy => "easy",
        }
    }
}

pub fn impossible_threshold(n: usize, p: usize, k: usize) -> f64 {
    let (nf, pf, kf) = (n as f64, p as f64, k as f64);
    kf.ln().max((pf * kf * kf.ln() / nf).sqrt())
}

pub fn easy_threshold(n: usize, p: usize, k: usize) -> f64 {
    let (nf, pf, kf) = (n as f64, p as f64, k as f64);
    (pf * kf * kf / nf).sqrt().min((pf * nf.ln()).sqrt())
}

/// Label of separation `delta_sq`; the easy test takes precedence when the
/// two thresholds cross.
pub fn regime(n: usize, p: usize, k: usize, delta_sq: f64) -> Regime {
    if delta_sq >= easy_threshold(n, p, k) {
        Regime::Easy
    } else if delta_sq < impossible_threshold(n, p, k) {
        Regime::Impossible
    } else {
        Regime::Hard
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_placed_points() {
        // n=100, p=10000, K=10: impossible below max(ln 10, √(1000·ln 10)) ≈ 47.99,
        // easy above min(√(10000), √(10000·ln 100)) = 100.
        let (n, p, k) = (100, 10_000, 10);
        assert!((impossible_threshold(n, p, k) - (1000.0 * 10f64.ln()).sqrt()).abs() < 1e-12);
        assert_eq!(easy_threshold(n, p, k), 100.0);
        assert_eq!(regime(n, p, k, 47.9), Regime::Impossible);
        assert_eq!(regime(n, p, k, 48.0), Regime::Hard);
        assert_eq!(regime(n, p, k, 99.9), Regime::Hard);
        assert_eq!(regime(n, p, k, 100.0), Regime::Easy);
    }

    #[test]
    fn log_k_and_log_n_branches() {
        // p=n=20, K=1000: impossible = √(1000·ln 1000) ≈ 83.1 while
        // easy = √(20·ln 20) ≈ 7.74, so the thresholds cross.
        let (n, p, k) = (20, 20, 1000);
        assert!((easy_threshold(n, p, k) - (20.0 * 20f64.ln()).sqrt()).abs() < 1e-12);
        assert_eq!(regime(n, p, k, 8.0), Regime::Easy);
        assert_eq!(regime(n, p, k, 7.0), Regime::Impossible);
        // K=2, p=n: √(2 ln 2) ≈ 1.18 > ln 2
        assert!((impossible_threshold(50, 50, 2) - (2.0 * 2f64.ln()).sqrt()).abs() < 1e-12);
        assert_eq!(regime(50, 50, 1, 0.0), Regime::Hard);
    }
}
