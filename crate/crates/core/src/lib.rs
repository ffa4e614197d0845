//! Streaming maximization of non-negative submodular functions under
//! k-set-system and k-extendible constraints.
//!
//! The crate is organised bottom-up:
//!
//! * [`oracle`] and [`set`]: ground-set representation and counted, memoized
//!   objective evaluation.
//! * [`objectives`]: cut, linear, facility-location, log-det and coverage
//!   objectives.
//! * [`constraints`]: independence-system oracles (cardinality, knapsack,
//!   labeled limits, node independent sets, planarity) and intersections.
//! * [`offline`]: greedy variants, double greedy, repeated greedy and a
//!   brute-force optimum for small instances.
//! * [`streaming`]: the threshold sieves with known and unknown parameters
//!   and the framework that turns them into algorithms for non-monotone
//!   objectives.
//! * [`baselines`]: streaming greedy, sieve-streaming and two swap-based
//!   algorithms.
//! * [`counterexamples`]: cut instances on which the swap-based baselines
//!   fail.
//! * [`experiment`]: graph generators, loaders and the benchmark runner.

// NaN-rejecting guards are written as `!(x > 0.0)`.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod baselines;
pub mod constraints;
pub mod counterexamples;
pub mod error;
pub mod experiment;
pub mod objectives;
pub mod offline;
pub mod oracle;
pub mod set;
pub mod streaming;

/// Index of an element in the ground set `0..n`.
pub type ElementId = usize;

/// Absolute tolerance used by every inequality test on oracle values.
pub const TOLERANCE: f64 = 1e-9;

pub use error::{Error, Result};
pub use oracle::{ApproximationProfile, Objective, ObjectiveOracle};
pub use set::ElementSet;
