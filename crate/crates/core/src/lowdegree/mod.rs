//! Exact low-degree calculus for the Bernoulli-prior mixture.
//!
//! Matrices `α ∈ N^{n×p}` index monomials `X^α` of the noiseless signal and
//! are handled as bipartite multigraphs. Row 0 and row 1 are the two points
//! whose co-membership `x = 1{k₀ = k₁}` is the estimation target.
//!
//! Moments and cumulants are exact rationals times a tracked power of `ε`.

pub mod alpha;
pub mod bounds;
pub mod cumulant;
pub mod enumerate;
pub mod moments;
pub mod montecarlo;
pub mod scaled;

pub use alpha::{graph_stats, null_cumulant_filter, topology_conditions, AlphaMatrix, GraphStats};
pub use bounds::{
    bound_report, bound_report_for_prior, corr_bound_sum, corr_bound_sum_with_budget, corr_sq_upper,
    corr_sq_upper_floor, cumulant_bound_holds, moment_bound_holds, numbergroups_check,
    numbergroups_holds, zeta, zeta_exact, BoundReport, CorrBoundSum, DimensionRegime,
};
pub use cumulant::{cumulant, write_cumulant_table, CumulantEngine};
pub use enumerate::{count_alphas, for_each_alpha};
pub use moments::{
    cross_moment, cross_parity_profile, moment, parity_probability, parity_probability_brute,
    parity_profile, ParityProfile,
};
pub use montecarlo::{empirical_mmse, mc_moment, EmpiricalMmse, Estimate};
pub use scaled::ScaledRational;
