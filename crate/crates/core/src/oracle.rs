//! Objective oracles.
//!
//! An [`Objective`] is a raw set function over a ground set `0..n`. Algorithms
//! never call it directly: they go through an [`ObjectiveOracle`], which
//! validates ids, counts queries and memoizes repeated evaluations.

use std::num::NonZeroUsize;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use lru::LruCache;
use serde::{Deserialize, Serialize};

use crate::{ElementId, ElementSet, Error, Result};

/// Default number of memoized evaluations kept per oracle.
pub const DEFAULT_CACHE_ENTRIES: usize = 1 << 16;

/// A non-negative set function `f: 2^N -> R>=0` over the ground set `0..ground_size()`.
///
/// Implementations may assume every id in `set` is below `ground_size()`;
/// [`ObjectiveOracle`] checks that before calling in.
pub trait Objective: Send + Sync {
    fn ground_size(&self) -> usize;

    /// Whether the function is claimed to be monotone. Advisory only.
    fn is_monotone(&self) -> bool;

    fn value(&self, set: &ElementSet) -> Result<f64>;

    /// `f(set + u) - f(set)` for `u` not in `set`.
    ///
    /// The default evaluates the function twice; objectives with a cheap
    /// incremental form should override it.
    fn gain(&self, u: ElementId, set: &ElementSet) -> Result<f64> {
        Ok(self.value(&set.with(u))? - self.value(set)?)
    }

    fn name(&self) -> &str;
}

/// Memoizing, query-counting wrapper around an [`Objective`].
///
/// Every query that reaches the underlying function counts as one oracle
/// call: an [`evaluate`](Self::evaluate) cache miss or a
/// [`marginal`](Self::marginal) query. Cache hits are free.
pub struct ObjectiveOracle {
    objective: Box<dyn Objective>,
    calls: AtomicU64,
    cache: Option<Mutex<LruCache<Box<[ElementId]>, f64>>>,
}

impl ObjectiveOracle {
    pub fn new(objective: impl Objective + 'static) -> Self {
        Self::with_cache_entries(objective, DEFAULT_CACHE_ENTRIES)
    }

    /// A capacity of zero disables memoization.
    pub fn with_cache_entries(objective: impl Objective + 'static, entries: usize) -> Self {
        Self::from_boxed(Box::new(objective), entries)
    }

    pub fn from_boxed(objective: Box<dyn Objective>, entries: usize) -> Self {
        let cache = NonZeroUsize::new(entries).map(|cap| Mutex::new(LruCache::new(cap)));
        Self {
            objective,
            calls: AtomicU64::new(0),
            cache,
        }
    }

    pub fn ground_size(&self) -> usize {
        self.objective.ground_size()
    }

    pub fn is_monotone(&self) -> bool {
        self.objective.is_monotone()
    }

    pub fn name(&self) -> &str {
        self.objective.name()
    }

    /// Number of queries answered by the underlying function so far.
    pub fn calls(&self) -> u64 {
        self.calls.load(Ordering::Relaxed)
    }

    pub fn check_member(&self, u: ElementId) -> Result<()> {
        let ground = self.ground_size();
        if u >= ground {
            return Err(Error::GroundSetMismatch { id: u, ground });
        }
        Ok(())
    }

    fn check_set(&self, set: &ElementSet) -> Result<()> {
        match set.max_id() {
            Some(u) => self.check_member(u),
            None => Ok(()),
        }
    }

    /// `f(set)`.
    ///
    /// The function is always evaluated on the members in ascending id
    /// order, so a cached answer is bit-identical to a fresh one regardless
    /// of the order in which `set` was built.
    pub fn evaluate(&self, set: &ElementSet) -> Result<f64> {
        self.check_set(set)?;
        let key: Box<[ElementId]> = set.sorted().into_boxed_slice();
        if let Some(cache) = &self.cache {
            if let Some(&v) = cache.lock().expect("oracle cache poisoned").get(&key) {
                return Ok(v);
            }
        }
        let canonical: ElementSet = key.iter().copied().collect();
        let v = self.objective.value(&canonical)?;
        self.calls.fetch_add(1, Ordering::Relaxed);
        if !v.is_finite() || v < 0.0 {
            return Err(Error::Numeric(format!(
                "{} returned {v} on a set of size {}",
                self.name(),
                set.len()
            )));
        }
        if let Some(cache) = &self.cache {
            cache.lock().expect("oracle cache poisoned").put(key, v);
        }
        Ok(v)
    }

    /// `f(u | set) = f(set + u) - f(set)`; negative for non-monotone `f`.
    pub fn marginal(&self, u: ElementId, set: &ElementSet) -> Result<f64> {
        self.check_member(u)?;
        self.check_set(set)?;
        if set.contains(u) {
            return Err(Error::DuplicateElement(u));
        }
        self.calls.fetch_add(1, Ordering::Relaxed);
        let g = self.objective.gain(u, set)?;
        if !g.is_finite() {
            return Err(Error::Numeric(format!("{} produced gain {g}", self.name())));
        }
        Ok(g)
    }

    /// `f({u})`.
    pub fn singleton(&self, u: ElementId) -> Result<f64> {
        self.evaluate(&ElementSet::from([u]))
    }
}

impl std::fmt::Debug for ObjectiveOracle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ObjectiveOracle")
            .field("objective", &self.name())
            .field("ground_size", &self.ground_size())
            .field("calls", &self.calls())
            .finish()
    }
}

/// The `(alpha, gamma)` guarantee of a streaming component together with
/// the ratio `beta` of the offline algorithm it is paired with.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApproximationProfile {
    pub alpha: f64,
    pub gamma: f64,
    pub beta: f64,
}

impl ApproximationProfile {
    pub fn new(alpha: f64, gamma: f64, beta: f64) -> Result<Self> {
        if !(alpha >= 1.0) || !(gamma >= 0.0) || !(beta >= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "approximation profile needs alpha >= 1, gamma >= 0, beta >= 1 (got {alpha}, {gamma}, {beta})"
            )));
        }
        Ok(Self { alpha, gamma, beta })
    }

    /// Lower bound on the framework output for `r` chained copies:
    /// `((r-1) OPT - r gamma) / (r alpha + r (r-1) beta / 2)`.
    pub fn framework_bound(&self, r: usize, opt: f64) -> f64 {
        let r = r as f64;
        let num = (r - 1.0) * opt - r * self.gamma;
        let den = r * self.alpha + r * (r - 1.0) * self.beta / 2.0;
        num / den
    }
}
