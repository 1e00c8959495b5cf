use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Prior;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    ExactKmeans,
    Lloyd,
    SingleLinkage,
    Spectral,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] =
        [Algorithm::ExactKmeans, Algorithm::Lloyd, Algorithm::SingleLinkage, Algorithm::Spectral];

    /// Stable identifier mixed into seeds.
    pub fn id(self) -> u64 {
        match self {
            Algorithm::ExactKmeans => 0,
            Algorithm::Lloyd => 1,
            Algorithm::SingleLinkage => 2,
            Algorithm::Spectral => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::ExactKmeans => "exact_kmeans",
            Algorithm::Lloyd => "lloyd",
            Algorithm::SingleLinkage => "single_linkage",
            Algorithm::Spectral => "spectral",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown algorithm {s:?}")))
    }
}

fn default_sigma() -> f64 {
    1.0
}

fn default_prior() -> Prior {
    Prior::BernoulliHypercube
}

fn default_lloyd_restarts() -> usize {
    10
}

fn default_exact_n_max() -> usize {
    crate::cluster::ExactKMeansOptions::default().n_max
}

/// A grid of experiment cells. Cells are the Cartesian product of the four
/// grids in the order `n`, `p`, `K`, `delta_bar_sq` (last varies fastest).
///
/// With `prior = fixed_means` the means come from the hypercube packing at
/// the cell's `delta_bar_sq`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub schema_version: u32,
    pub n: Vec<usize>,
    pub p: Vec<usize>,
    #[serde(rename = "K")]
    pub k: Vec<usize>,
    pub delta_bar_sq: Vec<f64>,
    pub algorithms: Vec<Algorithm>,
    pub trials: usize,
    #[serde(default = "default_sigma")]
    pub sigma: f64,
    #[serde(default = "default_prior")]
    pub prior: Prior,
    pub seed: u64,
    #[serde(default)]
    pub output_path: Option<String>,
    /// Degree for the per-cell low-degree bound, reported in `flags`.
    #[serde(default, rename = "D")]
    pub d: Option<u32>,
    /// Fill `runtime_ms`; makes the CSV timing-dependent.
    #[serde(default)]
    pub record_timing: bool,
    #[serde(default = "default_lloyd_restarts")]
    pub lloyd_restarts: usize,
    #[serde(default = "default_exact_n_max")]
    pub exact_n_max: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub index: usize,
    pub n: usize,
    pub p: usize,
    pub k: usize,
    pub delta_bar_sq: f64,
}

impl SweepConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: SweepConfig =
            serde_json::from_str(text).map_err(|e| Error::Config(format!("invalid sweep config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Config(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        for (name, empty) in [
            ("n", self.n.is_empty()),
            ("p", self.p.is_empty()),
            ("K", self.k.is_empty()),
            ("delta_bar_sq", self.delta_bar_sq.is_empty()),
            ("algorithms", self.algorithms.is_empty()),
        ] {
            if empty {
                return Err(Error::Config(format!("grid {name} is empty")));
            }
        }
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.n.contains(&0) || self.p.contains(&0) || self.k.contains(&0) {
            return Err(Error::Config("n, p and K values must be positive".into()));
        }
        if self.delta_bar_sq.iter().any(|d| !(*d >= 0.0 && d.is_finite())) {
            return Err(Error::Config("delta_bar_sq values must be finite and nonnegative".into()));
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(Error::Config(format!("sigma must be positive, got {}", self.sigma)));
        }
        if self.lloyd_restarts == 0 {
            return Err(Error::Config("lloyd_restarts must be at least 1".into()));
        }
        Ok(())
    }

    pub fn cells(&self) -> Vec<Cell> {
        let mut out = Vec::new();
        for &n in &self.n {
            for &p in &self.p {
                for &k in &self.k {
                    for &delta_bar_sq in &self.delta_bar_sq {
                        out.push(Cell { index: out.len(), n, p, k, delta_bar_sq });
                    }
                }
            }
        }
        out
    }
}
