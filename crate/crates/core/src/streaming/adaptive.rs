use super::buckets::{best_of, BucketCore};
use super::sieve::SieveSummary;
use super::{
    candidate_count, floor_log2, sieve_alpha, StreamOutcome, StreamingComponent, TraceEvent,
    TraceKind, Tracer,
};
use crate::constraints::IndependenceSystem;
use crate::{ApproximationProfile, ElementId, ElementSet, Error, ObjectiveOracle, Result};

/// An element that cleared the independence check of no bucket because its
/// index fell outside `0..=ell`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RejectedElement {
    pub element: ElementId,
    pub m: f64,
}

/// `ell' = floor(2 log2(k |G|) + 3)`, or `-1` while `G` is empty.
pub(crate) fn adaptive_ell(k: usize, g_len: usize) -> i64 {
    if g_len == 0 {
        return -1;
    }
    floor_log2(((k * g_len) as f64).powi(2)) + 3
}

/// Threshold sieve for a known `tau` that does not need `rho`.
///
/// It runs unweighted greedy on the whole stream to maintain a base `G`,
/// and uses `|G|` in place of `rho` to decide how many buckets to keep,
/// creating new buckets as `G` grows. The outcome has `A` equal to the
/// bucket union and `D = G \ A`.
pub struct AdaptiveSieve<'a> {
    f: &'a ObjectiveOracle,
    sys: &'a IndependenceSystem,
    g: ElementSet,
    ell: i64,
    h: usize,
    core: BucketCore,
    rejected: Vec<RejectedElement>,
    peak: usize,
    summary: Option<SieveSummary>,
    tracer: Tracer,
}

impl<'a> AdaptiveSieve<'a> {
    pub fn new(f: &'a ObjectiveOracle, sys: &'a IndependenceSystem, tau: f64) -> Result<Self> {
        if !(tau > 0.0) || !tau.is_finite() {
            return Err(Error::InvalidConfig(format!("tau must be positive, got {tau}")));
        }
        Ok(Self {
            f,
            sys,
            g: ElementSet::new(),
            ell: -1,
            h: candidate_count(sys.k()),
            core: BucketCore::new(tau, 0),
            rejected: Vec::new(),
            peak: 0,
            summary: None,
            tracer: Tracer::default(),
        })
    }

    pub fn tau(&self) -> f64 {
        self.core.tau
    }

    pub fn ell(&self) -> i64 {
        self.ell
    }

    pub fn h(&self) -> usize {
        self.h
    }

    pub fn greedy_base(&self) -> &ElementSet {
        &self.g
    }

    pub fn buckets(&self) -> &[ElementSet] {
        &self.core.buckets
    }

    pub fn cached_gain(&self, u: ElementId) -> Option<f64> {
        self.core.m.get(&u).copied()
    }

    /// Elements whose bucket index was outside `0..=ell` on arrival, with
    /// their `m(u)`.
    pub fn rejected(&self) -> &[RejectedElement] {
        &self.rejected
    }

    pub fn summary(&self) -> Option<&SieveSummary> {
        self.summary.as_ref()
    }

    /// Offers one element; returns whether it is still held afterwards
    /// (in `G` or in a bucket).
    pub fn process(&mut self, u: ElementId) -> Result<bool> {
        if self.sys.can_add(&self.g, u)? {
            self.g.insert(u);
        }
        self.ell = self.ell.max(adaptive_ell(self.sys.k(), self.g.len()));
        self.core.grow(self.ell);
        let decision = self.core.consider(self.f, self.sys, u, self.ell)?;
        let out_of_range = match decision.index {
            None => true,
            Some(i) => i < 0 || i > self.ell,
        };
        if out_of_range {
            self.rejected.push(RejectedElement {
                element: u,
                m: decision.m,
            });
        }
        if let Some(i) = decision.bucket {
            self.tracer.record(TraceKind::Accept, u, Some(i), decision.m);
        }
        self.peak = self.peak.max(self.stored());
        Ok(decision.bucket.is_some() || self.g.contains(u))
    }

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

impl StreamingComponent for AdaptiveSieve<'_> {
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
        let mut d: ElementSet = self.push(batch)?.into_iter().collect();
        let summary = self.finalize()?;
        d.extend(self.g.difference(&summary.e).iter());
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
        self.g.len() + self.core.bucket_sizes()
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
        "adaptive_sieve"
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraints::{make_system, SystemSpec};
    use crate::objectives::make_modular;

    #[test]
    fn ell_follows_greedy_base() {
        assert_eq!(adaptive_ell(1, 0), -1);
        assert_eq!(adaptive_ell(1, 1), 3);
        assert_eq!(adaptive_ell(1, 2), 5);

        let f = make_modular(&[1.0, 1.0, 1.0]).unwrap();
        let sys = make_system(SystemSpec::Cardinality { n: 3, rho: 2 }).unwrap();
        let mut alg = AdaptiveSieve::new(&f, &sys, 1.0).unwrap();
        alg.process(0).unwrap();
        assert_eq!(alg.ell(), 3);
        assert_eq!(alg.buckets().len(), 4);
        alg.process(1).unwrap();
        assert_eq!(alg.ell(), 5);
        alg.process(2).unwrap();
        assert_eq!(alg.ell(), 5);
    }

    #[test]
    fn no_independent_singletons_means_no_buckets() {
        let f = make_modular(&[1.0, 2.0]).unwrap();
        // Every element costs more than the budget.
        let sys = make_system(SystemSpec::Knapsack(crate::constraints::KnapsackSpec {
            costs: vec![5.0, 5.0],
            budget: 1.0,
        }))
        .unwrap();
        let mut alg = AdaptiveSieve::new(&f, &sys, 2.0).unwrap();
        assert_eq!(alg.push(&[0, 1]).unwrap(), vec![0, 1]);
        assert_eq!(alg.ell(), -1);
        assert_eq!(alg.rejected().len(), 2);
        let out = alg.finish(&[]).unwrap();
        assert!(out.s.is_empty() && out.a.is_empty() && out.d.is_empty());
    }

    #[test]
    fn greedy_base_outside_buckets_goes_to_d() {
        // Element 1 has gain 0.01 against tau = 8: index 9 > ell = 5 once
        // |G| = 2, so it is held only through G.
        let f = make_modular(&[4.0, 0.01]).unwrap();
        let sys = make_system(SystemSpec::Cardinality { n: 2, rho: 2 }).unwrap();
        let mut alg = AdaptiveSieve::new(&f, &sys, 8.0).unwrap();
        assert!(alg.push(&[0, 1]).unwrap().is_empty());
        let out = alg.finish(&[]).unwrap();
        assert_eq!(out.a, [0].into());
        assert_eq!(out.d, [1].into());
        assert_eq!(alg.rejected()[0].element, 1);
    }
}
