//! Single-pass algorithms and the framework that chains them.
//!
//! Every algorithm implements [`StreamingComponent`]: elements are pushed in
//! batches, each push reports the elements the algorithm dropped from
//! memory, and [`finish`](StreamingComponent::finish) returns the solution
//! `S`, the set `A` the solution was chosen from, and the set `D` of
//! elements still held outside `A`.

mod adaptive;
mod audit;
mod buckets;
mod framework;
mod sieve;
mod tau_free;

use serde::{Deserialize, Serialize};

use crate::constraints::IndependenceSystem;
use crate::{ApproximationProfile, ElementId, ElementSet, Error, Result};

pub use adaptive::{AdaptiveSieve, RejectedElement};
pub use audit::{contract_audit, write_trace_csv, AuditReport, TraceRow};
pub use framework::{framework_run, CopyOutcome, FrameworkConfig, FrameworkOutcome};
pub use sieve::{SieveSummary, ThresholdSieve};
pub use tau_free::TauFreeSieve;

/// The result of a streaming component at end of stream.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct StreamOutcome {
    /// The solution; independent and contained in `a`.
    pub s: ElementSet,
    pub a: ElementSet,
    /// Elements still held in memory that are not in `a`.
    pub d: ElementSet,
}

impl StreamOutcome {
    /// Checks `S ⊆ A`, `A ∩ D = ∅` and `S ∈ I`.
    pub fn validate(&self, sys: &IndependenceSystem) -> Result<()> {
        if !self.s.is_subset(&self.a) {
            return Err(Error::ContractViolation("S is not a subset of A".into()));
        }
        if !self.a.is_disjoint(&self.d) {
            return Err(Error::ContractViolation("A and D intersect".into()));
        }
        if !sys.is_independent(&self.s)? {
            return Err(Error::ContractViolation("S is not independent".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceKind {
    Accept,
    Evict,
    Swap,
}

/// One step of an algorithm's memory trace.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceEvent {
    pub kind: TraceKind,
    pub element: ElementId,
    /// Bucket index for the sieves; `None` for single-set algorithms.
    pub bucket: Option<usize>,
    pub value: f64,
}

/// A single-pass algorithm with explicit memory accounting.
pub trait StreamingComponent {
    /// Processes new elements and returns the ones dropped from memory.
    fn push(&mut self, batch: &[ElementId]) -> Result<Vec<ElementId>>;

    /// Processes the final elements and reports `(S, A, D)`.
    fn finish(&mut self, batch: &[ElementId]) -> Result<StreamOutcome>;

    /// The `(alpha, gamma)` guarantee, if the algorithm has one.
    fn profile(&self) -> Option<ApproximationProfile> {
        None
    }

    /// Number of stored elements right now, counted with multiplicity
    /// across internal sets.
    fn stored(&self) -> usize;

    /// Largest value [`stored`](Self::stored) has taken, including the
    /// end-of-stream phase.
    fn peak_stored(&self) -> usize;

    /// Starts recording accept and swap events.
    fn enable_trace(&mut self) {}

    /// Returns and clears the events recorded since the last call.
    fn take_events(&mut self) -> Vec<TraceEvent> {
        Vec::new()
    }

    fn name(&self) -> &str;
}

/// Event buffer shared by the component implementations.
#[derive(Clone, Debug, Default)]
pub(crate) struct Tracer {
    enabled: bool,
    events: Vec<TraceEvent>,
}

impl Tracer {
    pub(crate) fn enable(&mut self) {
        self.enabled = true;
    }

    pub(crate) fn record(&mut self, kind: TraceKind, element: ElementId, bucket: Option<usize>, value: f64) {
        if self.enabled {
            self.events.push(TraceEvent {
                kind,
                element,
                bucket,
                value,
            });
        }
    }

    pub(crate) fn take(&mut self) -> Vec<TraceEvent> {
        std::mem::take(&mut self.events)
    }
}

/// `floor(log2 x)`, nudged up by 1e-12 so exact powers of two are not
/// rounded down by representation error.
pub fn floor_log2(x: f64) -> i64 {
    (x.log2() + 1e-12).floor() as i64
}

/// `ceil(log2 x)`, nudged down by 1e-12 so exact powers of two are not
/// rounded up by representation error.
pub fn ceil_log2(x: f64) -> i64 {
    (x.log2() - 1e-12).ceil() as i64
}

/// `h = ceil(log2(2k + 1))`: the number of candidate output sets.
pub fn candidate_count(k: usize) -> usize {
    ceil_log2((2 * k + 1) as f64) as usize
}

/// `alpha = 4 k h (2k + 1)` for the threshold sieves.
pub fn sieve_alpha(k: usize) -> f64 {
    let k = k as f64;
    let h = candidate_count(k as usize) as f64;
    4.0 * k * h * (2.0 * k + 1.0)
}

/// Smallest power of two that is at least `x > 0`.
pub fn pow2_at_least(x: f64) -> f64 {
    2f64.powi(pow2_exponent_at_least(x))
}

pub(crate) fn pow2_exponent_at_least(x: f64) -> i32 {
    let mut i = x.log2().ceil() as i32;
    while 2f64.powi(i) < x {
        i += 1;
    }
    while 2f64.powi(i - 1) >= x {
        i -= 1;
    }
    i
}

pub(crate) fn pow2_exponent_at_most(x: f64) -> i32 {
    let mut i = x.log2().floor() as i32;
    while 2f64.powi(i) > x {
        i -= 1;
    }
    while 2f64.powi(i + 1) <= x {
        i += 1;
    }
    i
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_helpers_at_powers_of_two() {
        assert_eq!(floor_log2(8.0), 3);
        assert_eq!(floor_log2(8.0 / 3.0), 1);
        assert_eq!(floor_log2(0.5), -1);
        assert_eq!(ceil_log2(8.0), 3);
        assert_eq!(candidate_count(1), 2);
        assert_eq!(candidate_count(2), 3);
        assert_eq!(sieve_alpha(1), 24.0);
        assert_eq!(pow2_at_least(5.0), 8.0);
        assert_eq!(pow2_at_least(4.0), 4.0);
        assert_eq!(pow2_at_least(0.3), 0.5);
        assert_eq!(pow2_exponent_at_most(640.0), 9);
        assert_eq!(pow2_exponent_at_most(512.0), 9);
    }
}
