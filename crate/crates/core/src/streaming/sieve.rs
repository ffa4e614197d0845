use super::buckets::{best_of, BucketCore};
use super::{candidate_count, floor_log2, sieve_alpha, StreamOutcome, StreamingComponent, TraceEvent, TraceKind, Tracer};
use crate::constraints::IndependenceSystem;
use crate::{ApproximationProfile, ElementId, ElementSet, Error, ObjectiveOracle, Result};

/// The end-of-stream state of a threshold sieve.
#[derive(Clone, Debug, PartialEq)]
pub struct SieveSummary {
    /// The best candidate.
    pub t: ElementSet,
    pub t_value: f64,
    /// `T_0, ..., T_{h-1}`.
    pub candidates: Vec<ElementSet>,
    /// Union of all buckets.
    pub e: ElementSet,
}

/// Threshold sieve for a known threshold `tau` and a known bound `rho` on
/// the size of independent sets.
///
/// Each arriving element `u` gets `m(u)`, its marginal gain with respect to
/// everything kept so far, and goes into bucket `floor(log2(tau / m(u)))`
/// if that index is in `0..=ell` and the bucket stays independent, where
/// `ell = floor(log2(4 rho))`. At the end the buckets are merged greedily
/// into `h = ceil(log2(2k + 1))` candidates and the best one is returned.
///
/// For `tau` in `[M, 2M]`, with `M` the largest feasible singleton value,
/// this is an `(alpha, tau/4)`-approximation with `alpha = 4 k h (2k + 1)`.
pub struct ThresholdSieve<'a> {
    f: &'a ObjectiveOracle,
    sys: &'a IndependenceSystem,
    rho: usize,
    ell: i64,
    h: usize,
    core: BucketCore,
    peak: usize,
    summary: Option<SieveSummary>,
    tracer: Tracer,
}

impl<'a> ThresholdSieve<'a> {
    pub fn new(f: &'a ObjectiveOracle, sys: &'a IndependenceSystem, tau: f64, rho: usize) -> Result<Self> {
        if !(tau > 0.0) || !tau.is_finite() {
            return Err(Error::InvalidConfig(format!("tau must be positive, got {tau}")));
        }
        if rho == 0 {
            return Err(Error::InvalidConfig("rho must be at least 1".into()));
        }
        let ell = floor_log2(4.0 * rho as f64);
        Ok(Self {
            f,
            sys,
            rho,
            ell,
            h: candidate_count(sys.k()),
            core: BucketCore::new(tau, (ell + 1) as usize),
            peak: 0,
            summary: None,
            tracer: Tracer::default(),
        })
    }

    pub fn tau(&self) -> f64 {
        self.core.tau
    }

    pub fn rho(&self) -> usize {
        self.rho
    }

    pub fn ell(&self) -> i64 {
        self.ell
    }

    pub fn h(&self) -> usize {
        self.h
    }

    pub fn buckets(&self) -> &[ElementSet] {
        &self.core.buckets
    }

    /// `m(u)` as recorded when `u` was accepted.
    pub fn cached_gain(&self, u: ElementId) -> Option<f64> {
        self.core.m.get(&u).copied()
    }

    /// The end-of-stream summary, available after [`finish`](StreamingComponent::finish).
    pub fn summary(&self) -> Option<&SieveSummary> {
        self.summary.as_ref()
    }

    /// Offers one element; returns whether it was kept.
    pub fn process(&mut self, u: ElementId) -> Result<bool> {
        let decision = self.core.consider(self.f, self.sys, u, self.ell)?;
        if let Some(i) = decision.bucket {
            self.tracer.record(TraceKind::Accept, u, Some(i), decision.m);
            self.peak = self.peak.max(self.stored());
        }
        Ok(decision.bucket.is_some())
    }

    /// Builds the candidates and picks the best one.
    pub fn finalize(&mut self) -> Result<SieveSummary> {
        let candidates = self.core.candidates(self.sys, self.h)?;
        let with_candidates = self.stored() + candidates.iter().map(ElementSet::len).sum::<usize>();
        self.peak = self.peak.max(with_candidates);
        let (j, t_value) = best_of(self.f, &candidates)?;
        let summary = SieveSummary {
            t: candidates.get(j).cloned().unwrap_or_default(),
            t_value,
            candidates,
            e: self.core.union.clone(),
        };
        self.summary = Some(summary.clone());
        Ok(summary)
    }
}

impl StreamingComponent for ThresholdSieve<'_> {
    fn push(&mut self, batch: &[ElementId]) -> Result<Vec<ElementId>> {
        let mut evicted = Vec::new();
        for &u in batch {
            if !self.process(u)? {
                evicted.push(u);
            }
        }
        Ok(evicted)
    }

    fn finish(&mut self, batch: &[ElementId]) -> Result<StreamOutcome> {
        // Rejected final elements were in memory when the stream ended.
        let d: ElementSet = self.push(batch)?.into_iter().collect();
        let summary = self.finalize()?;
        Ok(StreamOutcome {
            s: summary.t,
            a: summary.e,
            d,
        })
    }

    fn profile(&self) -> Option<ApproximationProfile> {
        Some(ApproximationProfile {
            alpha: sieve_alpha(self.sys.k()),
            gamma: self.core.tau / 4.0,
            beta: 1.0,
        })
    }

    fn stored(&self) -> usize {
        self.core.bucket_sizes()
    }

    fn peak_stored(&self) -> usize {
        self.peak
    }

    fn enable_trace(&mut self) {
        self.tracer.enable();
    }

    fn take_events(&mut self) -> Vec<TraceEvent> {
        self.tracer.take()
    }

    fn name(&self) -> &str {
        "threshold_sieve"
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraints::{make_system, SystemSpec};
    use crate::objectives::{make_modular, CutGraph};

    #[test]
    fn bucket_index_examples() {
        // tau = 8: gain 3 lands in bucket 1, gain 16 has index -1.
        let f = make_modular(&[3.0, 16.0, 0.0]).unwrap();
        let sys = make_system(SystemSpec::Cardinality { n: 3, rho: 3 }).unwrap();
        let mut sieve = ThresholdSieve::new(&f, &sys, 8.0, 3).unwrap();
        assert!(sieve.process(0).unwrap());
        assert_eq!(sieve.buckets()[1], [0].into());
        assert!(!sieve.process(1).unwrap());
        assert!(!sieve.process(2).unwrap());
        assert_eq!(sieve.cached_gain(0), Some(3.0));
    }

    #[test]
    fn candidates_drain_interleaved_buckets() {
        // k = 1 gives h = 2; rho = 2 gives ell = 3. Gains 8, 4, 2, 1 with
        // tau = 8 fill buckets 0..=3 in order.
        let f = make_modular(&[8.0, 4.0, 2.0, 1.0]).unwrap();
        let sys = make_system(SystemSpec::Cardinality { n: 4, rho: 2 }).unwrap();
        let mut sieve = ThresholdSieve::new(&f, &sys, 8.0, 2).unwrap();
        assert_eq!((sieve.ell(), sieve.h()), (3, 2));
        let evicted = sieve.push(&[0, 1, 2, 3]).unwrap();
        assert!(evicted.is_empty());
        let summary = sieve.finalize().unwrap();
        assert_eq!(summary.candidates, vec![[0, 2].into(), [1, 3].into()]);
        assert_eq!(summary.t, [0, 2].into());
        assert_eq!(summary.t_value, 10.0);
    }

    #[test]
    fn empty_stream() {
        let f = make_modular(&[1.0]).unwrap();
        let sys = make_system(SystemSpec::Cardinality { n: 1, rho: 1 }).unwrap();
        let mut sieve = ThresholdSieve::new(&f, &sys, 1.0, 1).unwrap();
        let out = sieve.finish(&[]).unwrap();
        assert!(out.s.is_empty() && out.a.is_empty() && out.d.is_empty());
    }

    #[test]
    fn rejected_final_elements_are_reported_in_d() {
        let g = CutGraph::new(2, vec![(0, 1, 1.0)]).unwrap();
        let f = crate::objectives::make_directed_cut(g);
        let sys = make_system(SystemSpec::Cardinality { n: 2, rho: 2 }).unwrap();
        let mut sieve = ThresholdSieve::new(&f, &sys, 1.0, 2).unwrap();
        let out = sieve.finish(&[0, 1]).unwrap();
        assert_eq!(out.a, [0].into());
        assert_eq!(out.d, [1].into());
    }
}
