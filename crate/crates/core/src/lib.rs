//! Clustering-hardness laboratory for isotropic Gaussian mixtures.
//!
//! - [`model`]: mixture generators, hypercube packings, separation statistics.
//! - [`metrics`]: misclassification error, partnership matrices, K-means criterion.
//! - [`cluster`]: exact K-means, Lloyd, single linkage, spectral baseline.
//! - [`lowdegree`]: exact moments and cumulants of the Bernoulli-prior signal,
//!   the low-degree correlation bound and its Monte Carlo / regression oracles.
//! - [`lab`]: sweep configuration, deterministic experiment runs, CSV/JSON output
//!   and the invariant verification suites.

pub mod cluster;
pub mod error;
pub mod lab;
pub mod lowdegree;
pub mod matrix;
pub mod metrics;
pub mod model;
pub mod partition;
pub mod rng;
pub mod setpart;

pub use error::{Error, Result};
pub use matrix::Matrix;
pub use partition::Partition;
