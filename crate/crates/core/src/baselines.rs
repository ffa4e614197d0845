//! Streaming baselines: first-fit greedy, sieve-streaming over a geometric
//! grid of value guesses, and two swap-based algorithms for cardinality
//! constraints.

use std::collections::BTreeMap;

use crate::constraints::IndependenceSystem;
use crate::streaming::{StreamOutcome, StreamingComponent, TraceEvent, TraceKind, Tracer};
use crate::{ElementId, ElementSet, Error, ObjectiveOracle, Result, TOLERANCE};

/// Keeps every element that leaves the solution independent.
pub struct StreamingGreedy<'a> {
    sys: &'a IndependenceSystem,
    s: ElementSet,
    peak: usize,
    tracer: Tracer,
}

impl<'a> StreamingGreedy<'a> {
    pub fn new(sys: &'a IndependenceSystem) -> Self {
        Self {
            sys,
            s: ElementSet::new(),
            peak: 0,
            tracer: Tracer::default(),
        }
    }
}

impl StreamingComponent for StreamingGreedy<'_> {
    fn push(&mut self, batch: &[ElementId]) -> Result<Vec<ElementId>> {
        let mut evicted = Vec::new();
        for &u in batch {
            if self.sys.can_add(&self.s, u)? {
                self.s.insert(u);
                self.tracer.record(TraceKind::Accept, u, None, 0.0);
            } else {
                evicted.push(u);
            }
        }
        self.peak = self.peak.max(self.s.len());
        Ok(evicted)
    }

    fn finish(&mut self, batch: &[ElementId]) -> Result<StreamOutcome> {
        let d = self.push(batch)?.into_iter().collect();
        Ok(StreamOutcome {
            s: self.s.clone(),
            a: self.s.clone(),
            d,
        })
    }

    fn stored(&self) -> usize {
        self.s.len()
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
        "streaming_greedy"
    }
}

/// Default grid ratio of [`SieveStreaming`].
pub const DEFAULT_SIEVE_EPSILON: f64 = 0.1;

/// One solution per guess `v` of the optimum; an element joins the solution
/// of guess `v` if it stays feasible and its gain is at least `v / (2 rho)`.
///
/// Guesses lie on the lattice `m0 (1 + eps)^j`, where `m0` is the value of
/// the first feasible singleton with positive value, restricted to
/// `[m, 2 rho m]` for the current largest feasible singleton value `m`.
/// Guesses that fall below `m` are dropped as `m` grows.
pub struct SieveStreaming<'a> {
    f: &'a ObjectiveOracle,
    sys: &'a IndependenceSystem,
    rho: usize,
    epsilon: f64,
    anchor: Option<f64>,
    max_singleton: f64,
    guesses: BTreeMap<i64, ElementSet>,
    peak: usize,
    tracer: Tracer,
}

impl<'a> SieveStreaming<'a> {
    pub fn new(f: &'a ObjectiveOracle, sys: &'a IndependenceSystem, rho: usize, epsilon: f64) -> Result<Self> {
        if rho == 0 {
            return Err(Error::InvalidConfig("rho must be at least 1".into()));
        }
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::InvalidConfig(format!("epsilon must lie in (0, 1), got {epsilon}")));
        }
        Ok(Self {
            f,
            sys,
            rho,
            epsilon,
            anchor: None,
            max_singleton: 0.0,
            guesses: BTreeMap::new(),
            peak: 0,
            tracer: Tracer::default(),
        })
    }

    fn guess(&self, j: i64) -> f64 {
        self.anchor.expect("guesses exist only once anchored") * (1.0 + self.epsilon).powi(j as i32)
    }

    /// The current guesses, ascending.
    pub fn guesses(&self) -> Vec<f64> {
        self.guesses.keys().map(|&j| self.guess(j)).collect()
    }

    /// Lattice indices `j` with `lo <= m0 (1 + eps)^j <= hi`.
    fn lattice_range(&self, lo: f64, hi: f64) -> (i64, i64) {
        let m0 = self.anchor.expect("anchored");
        let base = (1.0 + self.epsilon).ln();
        let mut a = ((lo / m0).ln() / base).ceil() as i64;
        while self.guess(a) < lo {
            a += 1;
        }
        while self.guess(a - 1) >= lo {
            a -= 1;
        }
        let mut b = ((hi / m0).ln() / base).floor() as i64;
        while self.guess(b) > hi {
            b -= 1;
        }
        while self.guess(b + 1) <= hi {
            b += 1;
        }
        (a, b)
    }

    fn held(&self, u: ElementId) -> bool {
        self.guesses.values().any(|s| s.contains(u))
    }

    fn process(&mut self, u: ElementId) -> Result<Vec<ElementId>> {
        let mut released = Vec::new();
        if self.sys.can_add(&ElementSet::new(), u)? {
            let v = self.f.singleton(u)?;
            if v > 0.0 && self.anchor.is_none() {
                self.anchor = Some(v);
            }
            if v > self.max_singleton {
                self.max_singleton = v;
                let (lo, hi) = self.lattice_range(v, 2.0 * self.rho as f64 * v);
                let stale: Vec<i64> = self.guesses.keys().copied().filter(|&j| j < lo).collect();
                for j in stale {
                    released.extend(self.guesses.remove(&j).expect("listed").iter());
                }
                for j in lo..=hi {
                    self.guesses.entry(j).or_default();
                }
            }
        }
        let thresholds: Vec<(i64, f64)> = self
            .guesses
            .keys()
            .map(|&j| (j, self.guess(j) / (2.0 * self.rho as f64)))
            .collect();
        for (j, threshold) in thresholds {
            let s = &self.guesses[&j];
            if !self.sys.can_add(s, u)? {
                continue;
            }
            let gain = self.f.marginal(u, s)?;
            if gain >= threshold - TOLERANCE {
                self.guesses.get_mut(&j).expect("listed").insert(u);
                self.tracer.record(TraceKind::Accept, u, None, gain);
            }
        }
        self.peak = self.peak.max(self.stored());
        released.push(u);
        released.sort_unstable();
        released.dedup();
        released.retain(|&x| !self.held(x));
        Ok(released)
    }
}

impl StreamingComponent for SieveStreaming<'_> {
    fn push(&mut self, batch: &[ElementId]) -> Result<Vec<ElementId>> {
        let mut evicted = Vec::new();
        for &u in batch {
            evicted.extend(self.process(u)?);
        }
        Ok(evicted)
    }

    fn finish(&mut self, batch: &[ElementId]) -> Result<StreamOutcome> {
        let d = self.push(batch)?.into_iter().collect();
        let mut best = (ElementSet::new(), self.f.evaluate(&ElementSet::new())?);
        let mut a = ElementSet::new();
        for s in self.guesses.values() {
            a.extend(s.iter());
            let v = self.f.evaluate(s)?;
            if v > best.1 {
                best = (s.clone(), v);
            }
        }
        Ok(StreamOutcome { s: best.0, a, d })
    }

    fn stored(&self) -> usize {
        self.guesses.values().map(ElementSet::len).sum()
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
        "sieve_streaming"
    }
}

fn require_cardinality(sys: &IndependenceSystem, who: &str) -> Result<usize> {
    sys.cardinality_limit().ok_or_else(|| {
        Error::UnsupportedConstraint(format!("{who} needs a cardinality constraint, got {}", sys.name()))
    })
}

/// Swap-based algorithm: fills the solution with non-negative-gain
/// elements, then replaces the member with the smallest cached
/// contribution whenever a new element gains at least twice that amount.
///
/// A member's cached contribution is its gain with respect to the members
/// present when it was inserted, and is never recomputed.
pub struct Preemption<'a> {
    f: &'a ObjectiveOracle,
    rho: usize,
    /// Members in arrival order with their cached contribution.
    s: ElementSet,
    cached: BTreeMap<ElementId, f64>,
    tracer: Tracer,
}

impl<'a> Preemption<'a> {
    pub fn new(f: &'a ObjectiveOracle, sys: &IndependenceSystem) -> Result<Self> {
        let rho = require_cardinality(sys, "preemption")?;
        Ok(Self {
            f,
            rho,
            s: ElementSet::new(),
            cached: BTreeMap::new(),
            tracer: Tracer::default(),
        })
    }

    pub fn solution(&self) -> &ElementSet {
        &self.s
    }

    /// The cached contribution of a current member.
    pub fn cached_contribution(&self, u: ElementId) -> Option<f64> {
        self.s.contains(u).then(|| self.cached[&u])
    }

    fn process(&mut self, u: ElementId) -> Result<Option<ElementId>> {
        let gain = self.f.marginal(u, &self.s)?;
        if self.s.len() < self.rho {
            if gain >= -TOLERANCE {
                self.s.insert(u);
                self.cached.insert(u, gain);
                self.tracer.record(TraceKind::Accept, u, None, gain);
                return Ok(None);
            }
            return Ok(Some(u));
        }
        // Members iterate in arrival order, so the strict comparison keeps
        // the earliest member on ties.
        let mut weakest: Option<(ElementId, f64)> = None;
        for x in self.s.iter() {
            let c = self.cached[&x];
            if weakest.is_none_or(|(_, w)| c < w) {
                weakest = Some((x, c));
            }
        }
        let Some((out, contribution)) = weakest else {
            return Ok(Some(u));
        };
        if gain >= 2.0 * contribution - TOLERANCE {
            self.s.remove(out);
            self.cached.remove(&out);
            let entry = self.f.marginal(u, &self.s)?;
            self.s.insert(u);
            self.cached.insert(u, entry);
            self.tracer.record(TraceKind::Swap, u, None, gain);
            Ok(Some(out))
        } else {
            Ok(Some(u))
        }
    }
}

impl StreamingComponent for Preemption<'_> {
    fn push(&mut self, batch: &[ElementId]) -> Result<Vec<ElementId>> {
        let mut evicted = Vec::new();
        for &u in batch {
            evicted.extend(self.process(u)?);
        }
        Ok(evicted)
    }

    fn finish(&mut self, batch: &[ElementId]) -> Result<StreamOutcome> {
        let d = self.push(batch)?.into_iter().collect();
        Ok(StreamOutcome {
            s: self.s.clone(),
            a: self.s.clone(),
            d,
        })
    }

    fn stored(&self) -> usize {
        self.s.len()
    }

    fn peak_stored(&self) -> usize {
        self.rho
    }

    fn enable_trace(&mut self) {
        self.tracer.enable();
    }

    fn take_events(&mut self) -> Vec<TraceEvent> {
        self.tracer.take()
    }

    fn name(&self) -> &str {
        "preemption"
    }
}

/// Swap-based algorithm: fills the solution with non-negative-gain
/// elements, then swaps in a new element for the member whose removal
/// leaves the best set, if that raises the value by at least `f(S) / rho`.
pub struct SwapStreaming<'a> {
    f: &'a ObjectiveOracle,
    rho: usize,
    s: ElementSet,
    tracer: Tracer,
}

impl<'a> SwapStreaming<'a> {
    pub fn new(f: &'a ObjectiveOracle, sys: &IndependenceSystem) -> Result<Self> {
        let rho = require_cardinality(sys, "swap streaming")?;
        Ok(Self {
            f,
            rho,
            s: ElementSet::new(),
            tracer: Tracer::default(),
        })
    }

    pub fn solution(&self) -> &ElementSet {
        &self.s
    }

    fn process(&mut self, u: ElementId) -> Result<Option<ElementId>> {
        if self.s.len() < self.rho {
            let gain = self.f.marginal(u, &self.s)?;
            if gain >= -TOLERANCE {
                self.s.insert(u);
                self.tracer.record(TraceKind::Accept, u, None, gain);
                return Ok(None);
            }
            return Ok(Some(u));
        }
        let current = self.f.evaluate(&self.s)?;
        let mut best: Option<(ElementId, f64)> = None;
        for x in self.s.iter() {
            let mut swapped = self.s.without(x);
            swapped.insert(u);
            let v = self.f.evaluate(&swapped)?;
            if best.is_none_or(|(_, b)| v > b) {
                best = Some((x, v));
            }
        }
        let Some((out, value)) = best else {
            return Ok(Some(u));
        };
        if value - current >= current / self.rho as f64 - TOLERANCE {
            self.s.remove(out);
            self.s.insert(u);
            self.tracer.record(TraceKind::Swap, u, None, value - current);
            Ok(Some(out))
        } else {
            Ok(Some(u))
        }
    }
}

impl StreamingComponent for SwapStreaming<'_> {
    fn push(&mut self, batch: &[ElementId]) -> Result<Vec<ElementId>> {
        let mut evicted = Vec::new();
        for &u in batch {
            evicted.extend(self.process(u)?);
        }
        Ok(evicted)
    }

    fn finish(&mut self, batch: &[ElementId]) -> Result<StreamOutcome> {
        let d = self.push(batch)?.into_iter().collect();
        Ok(StreamOutcome {
            s: self.s.clone(),
            a: self.s.clone(),
            d,
        })
    }

    fn stored(&self) -> usize {
        self.s.len()
    }

    fn peak_stored(&self) -> usize {
        self.rho
    }

    fn enable_trace(&mut self) {
        self.tracer.enable();
    }

    fn take_events(&mut self) -> Vec<TraceEvent> {
        self.tracer.take()
    }

    fn name(&self) -> &str {
        "swap_streaming"
    }
}

/// Runs a component over `stream` and returns its outcome.
pub fn run_component(component: &mut dyn StreamingComponent, stream: &[ElementId]) -> Result<StreamOutcome> {
    component.push(stream)?;
    component.finish(&[])
}
