//! Experiment plumbing: sweep configuration and execution, CSV records,
//! recovery curves, low-degree comparison reports and verification suites.
//!
//! Seeds: the data of `(cell, trial)` is drawn from
//! `derive_seed(master, [cell, trial])`, and an algorithm's own randomness
//! from `derive_seed(master, [cell, algorithm_id, trial])`, where
//! [`derive_seed`](crate::rng::derive_seed) folds each index into a SplitMix64 state.

pub mod config;
pub mod record;
pub mod recovery;
pub mod regime;
pub mod report;
pub mod sweep;
pub mod verify;

pub use config::{Algorithm, Cell, SweepConfig, SCHEMA_VERSION};
pub use record::{read_records, records_to_csv, write_records, SweepRecord};
pub use recovery::{isotonic_fit, isotonic_residual, means_with_separation, recovery_curve, RecoveryCurve, RecoveryPoint};
pub use regime::{easy_threshold, impossible_threshold, regime, Regime};
pub use report::{lowdegree_report, CorrSumSummary, LowDegreeReport};
pub use sweep::{algorithm_seed, instance_seed, run_sweep, run_sweep_to_file};
pub use verify::{verify, verify_with, CheckResult, Ops, Suite, VerifyReport};
