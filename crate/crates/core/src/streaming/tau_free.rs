use std::collections::BTreeMap;

use super::adaptive::adaptive_ell;
use super::buckets::{best_of, BucketCore};
use super::sieve::SieveSummary;
use super::{
    candidate_count, pow2_exponent_at_least, pow2_exponent_at_most, sieve_alpha, StreamOutcome,
    StreamingComponent, TraceEvent, TraceKind, Tracer,
};
use crate::constraints::IndependenceSystem;
use crate::{ApproximationProfile, ElementId, ElementSet, ObjectiveOracle, Result};

/// Threshold sieve that needs neither `tau` nor `rho`.
///
/// It runs one [`AdaptiveSieve`](super::AdaptiveSieve)-style copy per power
/// of two `tau` in `[M', M' * 32 (k |G|)^2]`, where `M'` is the largest
/// feasible singleton value seen so far. All copies share one greedy base
/// `G`. Copies whose `tau` leaves the range are dropped; copies for new
/// powers of two start empty. The answer is the best output over the
/// copies alive at the end.
pub struct TauFreeSieve<'a> {
    f: &'a ObjectiveOracle,
    sys: &'a IndependenceSystem,
    g: ElementSet,
    m_prime: Option<f64>,
    ell: i64,
    h: usize,
    /// Keyed by the exponent of `tau`.
    copies: BTreeMap<i32, BucketCore>,
    peak: usize,
    summary: Option<(f64, SieveSummary)>,
    tracer: Tracer,
}

impl<'a> TauFreeSieve<'a> {
    pub fn new(f: &'a ObjectiveOracle, sys: &'a IndependenceSystem) -> Self {
        Self {
            f,
            sys,
            g: ElementSet::new(),
            m_prime: None,
            ell: -1,
            h: candidate_count(sys.k()),
            copies: BTreeMap::new(),
            peak: 0,
            summary: None,
            tracer: Tracer::default(),
        }
    }

    /// Largest value of a feasible singleton seen so far.
    pub fn max_singleton(&self) -> Option<f64> {
        self.m_prime
    }

    pub fn greedy_base(&self) -> &ElementSet {
        &self.g
    }

    /// The thresholds of the live copies, ascending.
    pub fn active_taus(&self) -> Vec<f64> {
        self.copies.keys().map(|&i| 2f64.powi(i)).collect()
    }

    /// The threshold of the copy that produced the answer, and its summary.
    pub fn summary(&self) -> Option<&(f64, SieveSummary)> {
        self.summary.as_ref()
    }

    /// Exponents `i` with `M' <= 2^i <= M' * 32 (k |G|)^2`.
    pub(crate) fn guess_range(m_prime: Option<f64>, k: usize, g_len: usize) -> Option<(i32, i32)> {
        let m = m_prime.filter(|&m| m > 0.0)?;
        if g_len == 0 {
            return None;
        }
        let kg = (k * g_len) as f64;
        let lo = pow2_exponent_at_least(m);
        let hi = pow2_exponent_at_most(m * 32.0 * kg * kg);
        (lo <= hi).then_some((lo, hi))
    }

    fn held(&self, u: ElementId) -> bool {
        self.g.contains(u) || self.copies.values().any(|c| c.union.contains(u))
    }

    /// Offers one element; returns the elements no longer held afterwards.
    pub fn process(&mut self, u: ElementId) -> Result<Vec<ElementId>> {
        if self.sys.can_add(&self.g, u)? {
            self.g.insert(u);
        }
        if self.sys.can_add(&ElementSet::new(), u)? {
            let v = self.f.singleton(u)?;
            self.m_prime = Some(self.m_prime.map_or(v, |m| m.max(v)));
        }
        self.ell = self.ell.max(adaptive_ell(self.sys.k(), self.g.len()));

        let mut released = Vec::new();
        match Self::guess_range(self.m_prime, self.sys.k(), self.g.len()) {
            None => {
                for (_, copy) in std::mem::take(&mut self.copies) {
                    released.extend(copy.union.iter());
                }
            }
            Some((lo, hi)) => {
                let dropped: Vec<i32> = self
                    .copies
                    .keys()
                    .copied()
                    .filter(|&i| i < lo || i > hi)
                    .collect();
                for i in dropped {
                    let copy = self.copies.remove(&i).expect("key listed above");
                    released.extend(copy.union.iter());
                }
                for i in lo..=hi {
                    self.copies
                        .entry(i)
                        .or_insert_with(|| BucketCore::new(2f64.powi(i), 0));
                }
            }
        }

        for copy in self.copies.values_mut() {
            copy.grow(self.ell);
            let decision = copy.consider(self.f, self.sys, u, self.ell)?;
            if let Some(b) = decision.bucket {
                self.tracer.record(TraceKind::Accept, u, Some(b), decision.m);
            }
        }
        self.peak = self.peak.max(self.stored());

        released.push(u);
        released.sort_unstable();
        released.dedup();
        released.retain(|&x| !self.held(x));
        Ok(released)
    }

    pub fn finalize(&mut self) -> Result<Option<(f64, SieveSummary)>> {
        let mut best: Option<(f64, SieveSummary)> = None;
        let mut extra = 0;
        for copy in self.copies.values() {
            let candidates = copy.candidates(self.sys, self.h)?;
            extra += candidates.iter().map(ElementSet::len).sum::<usize>();
            let (j, t_value) = best_of(self.f, &candidates)?;
            if best.as_ref().is_none_or(|(_, b)| t_value > b.t_value) {
                let summary = SieveSummary {
                    t: candidates.get(j).cloned().unwrap_or_default(),
                    t_value,
                    candidates,
                    e: copy.union.clone(),
                };
                best = Some((copy.tau, summary));
            }
        }
        self.peak = self.peak.max(self.stored() + extra);
        self.summary = best.clone();
        Ok(best)
    }

    /// Union of the buckets of all live copies.
    fn bucket_union(&self) -> ElementSet {
        let mut a = ElementSet::new();
        for copy in self.copies.values() {
            a.extend(copy.union.iter());
        }
        a
    }
}

impl StreamingComponent for TauFreeSieve<'_> {
    fn push(&mut self, batch: &[ElementId]) -> Result<Vec<ElementId>> {
        let mut evicted = Vec::new();
        for &u in batch {
            evicted.extend(self.process(u)?);
        }
        Ok(evicted)
    }

    fn finish(&mut self, batch: &[ElementId]) -> Result<StreamOutcome> {
        let mut d: ElementSet = self.push(batch)?.into_iter().collect();
        let s = match self.finalize()? {
            Some((_, summary)) => summary.t,
            None => ElementSet::new(),
        };
        let a = self.bucket_union();
        d.extend(self.g.difference(&a).iter());
        Ok(StreamOutcome { s, a, d })
    }

    fn profile(&self) -> Option<ApproximationProfile> {
        // gamma = tau / 4 <= M / 2 for the copy that carries the guarantee.
        Some(ApproximationProfile {
            alpha: sieve_alpha(self.sys.k()),
            gamma: self.m_prime.unwrap_or(0.0).max(0.0) / 2.0,
            beta: 1.0,
        })
    }

    fn stored(&self) -> usize {
        self.g.len() + self.copies.values().map(BucketCore::bucket_sizes).sum::<usize>()
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
        "tau_free_sieve"
    }
}
