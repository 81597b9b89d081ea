//! Finite-n checks of the character bounds behind the sieve lower bound.

pub mod experiment;
pub mod qn;
pub mod scans;

pub use experiment::{homogeneous_rate_experiment, RateReport, RateRow};
pub use qn::{cycle_count_recurrence, qn_bound_check, qn_polynomial, z_squared, z_three_halves, QnBoundReport, QnPolynomial, QN_GUARD};
pub use scans::{
    big_sets, conjecture_scan, collision_bound_check, really_big_closure_check, smoothness_scan, width_check, BigSets,
    ClosureReport, ConjectureReport, CollisionBoundReport, Regime, SmoothnessReport, WidthReport,
};
