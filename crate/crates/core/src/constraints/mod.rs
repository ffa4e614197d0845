//! Independence systems.
//!
//! An [`Independence`] implementation answers membership queries for one
//! concrete family of feasible sets. [`IndependenceSystem`] wraps it with
//! the certified parameter `k`, the class the parameter refers to, and the
//! size of a largest independent set when it is known.

mod planarity;
mod systems;

use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::objectives::CutGraph;
use crate::{ElementId, ElementSet, Error, Result};

pub use planarity::planarity_check;
pub use systems::{
    Cardinality, Intersection, Knapsack, KnapsackSpec, LabeledLimit, LabeledLimitSpec,
    NodeIndependentSet, Planarity,
};

/// Ground sets up to this size get an exact `rho` by enumeration.
pub const RHO_BRUTE_FORCE_LIMIT: usize = 20;

/// Membership oracle of a downward-closed family over `0..ground_size()`.
///
/// Callers guarantee that every id is below `ground_size()`.
pub trait Independence: Send + Sync {
    fn ground_size(&self) -> usize;

    fn is_independent(&self, set: &ElementSet) -> bool;

    /// Whether `set + u` is independent, given that `set` is.
    fn can_add(&self, set: &ElementSet, u: ElementId) -> bool {
        self.is_independent(&set.with(u))
    }

    /// Size of a largest independent set if it has a closed form.
    fn rank(&self) -> Option<usize> {
        None
    }

    /// `Some(rho)` if the family is exactly "at most rho elements".
    fn cardinality_limit(&self) -> Option<usize> {
        None
    }

    fn name(&self) -> &str;
}

/// Which definition the parameter `k` of a system refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SystemClass {
    KSystem,
    KExtendible,
    Matroid,
}

/// An independence oracle together with its parameter `k`.
#[derive(Clone)]
pub struct IndependenceSystem {
    oracle: Arc<dyn Independence>,
    k: usize,
    class: SystemClass,
    rho: Arc<OnceLock<Option<usize>>>,
}

impl IndependenceSystem {
    pub fn new(oracle: impl Independence + 'static, k: usize, class: SystemClass) -> Result<Self> {
        Self::from_arc(Arc::new(oracle), k, class)
    }

    pub fn from_arc(oracle: Arc<dyn Independence>, k: usize, class: SystemClass) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidSpec("k must be at least 1".into()));
        }
        if oracle.ground_size() == 0 {
            return Err(Error::InvalidSpec("empty ground set".into()));
        }
        Ok(Self {
            oracle,
            k,
            class,
            rho: Arc::new(OnceLock::new()),
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn class(&self) -> SystemClass {
        self.class
    }

    pub fn ground_size(&self) -> usize {
        self.oracle.ground_size()
    }

    pub fn name(&self) -> &str {
        self.oracle.name()
    }

    pub fn cardinality_limit(&self) -> Option<usize> {
        self.oracle.cardinality_limit()
    }

    /// Replaces the certified parameter, e.g. when the caller knows a
    /// tighter value than the conservative default.
    pub fn with_k_override(mut self, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidSpec("k must be at least 1".into()));
        }
        self.k = k;
        Ok(self)
    }

    /// Supplies the size of a largest independent set.
    pub fn with_rho_hint(mut self, rho: usize) -> Self {
        let cell = OnceLock::new();
        let _ = cell.set(Some(rho));
        self.rho = Arc::new(cell);
        self
    }

    /// Size of a largest independent set: from a hint, a closed form, or
    /// enumeration when the ground set has at most
    /// [`RHO_BRUTE_FORCE_LIMIT`] elements.
    pub fn rho_hint(&self) -> Option<usize> {
        *self.rho.get_or_init(|| {
            self.oracle.rank().or_else(|| {
                (self.ground_size() <= RHO_BRUTE_FORCE_LIMIT).then(|| self.max_independent_size())
            })
        })
    }

    fn check_set(&self, set: &ElementSet) -> Result<()> {
        if let Some(id) = set.max_id() {
            self.check_member(id)?;
        }
        Ok(())
    }

    pub fn check_member(&self, u: ElementId) -> Result<()> {
        let ground = self.ground_size();
        if u >= ground {
            return Err(Error::GroundSetMismatch { id: u, ground });
        }
        Ok(())
    }

    pub fn is_independent(&self, set: &ElementSet) -> Result<bool> {
        self.check_set(set)?;
        Ok(self.oracle.is_independent(set))
    }

    /// Whether `set + u` is independent. `set` must itself be independent.
    pub fn can_add(&self, set: &ElementSet, u: ElementId) -> Result<bool> {
        self.check_member(u)?;
        self.check_set(set)?;
        if set.contains(u) {
            return Err(Error::DuplicateElement(u));
        }
        Ok(self.oracle.can_add(set, u))
    }

    fn max_independent_size(&self) -> usize {
        fn go(sys: &dyn Independence, n: usize, next: usize, cur: &mut ElementSet, best: &mut usize) {
            *best = (*best).max(cur.len());
            if next == n || cur.len() + (n - next) <= *best {
                return;
            }
            for u in next..n {
                if cur.len() + (n - u) <= *best {
                    break;
                }
                if sys.can_add(cur, u) {
                    cur.insert(u);
                    go(sys, n, u + 1, cur, best);
                    cur.remove(u);
                }
            }
        }
        let mut best = 0;
        go(
            self.oracle.as_ref(),
            self.ground_size(),
            0,
            &mut ElementSet::new(),
            &mut best,
        );
        best
    }
}

impl fmt::Debug for IndependenceSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IndependenceSystem")
            .field("name", &self.name())
            .field("ground_size", &self.ground_size())
            .field("k", &self.k)
            .field("class", &self.class)
            .finish()
    }
}

/// Constraint families with their default parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum SystemSpec {
    /// At most `rho` of `n` elements.
    Cardinality { n: usize, rho: usize },
    Knapsack(KnapsackSpec),
    LabeledLimit(LabeledLimitSpec),
    /// Vertex subsets with no edge inside (arc direction ignored).
    NodeIndependentSet { graph: CutGraph },
    /// Edge subsets of `edges` forming a planar graph; element `i` is `edges[i]`.
    Planarity {
        n_vertices: usize,
        edges: Vec<(usize, usize)>,
    },
}

/// Builds a system with the default `k` of its family:
/// cardinality 1, knapsack `ceil(c_max / c_min)`, node independent set the
/// maximum degree, planarity 3, labeled limits one more than the largest
/// number of labels on an element.
pub fn make_system(spec: SystemSpec) -> Result<IndependenceSystem> {
    match spec {
        SystemSpec::Cardinality { n, rho } => {
            IndependenceSystem::new(Cardinality::new(n, rho)?, 1, SystemClass::Matroid)
        }
        SystemSpec::Knapsack(spec) => {
            let knapsack = Knapsack::new(spec)?;
            let k = knapsack.extendibility();
            IndependenceSystem::new(knapsack, k, SystemClass::KExtendible)
        }
        SystemSpec::LabeledLimit(spec) => {
            let limit = LabeledLimit::new(spec)?;
            let k = limit.max_labels() + 1;
            IndependenceSystem::new(limit, k, SystemClass::KExtendible)
        }
        SystemSpec::NodeIndependentSet { graph } => {
            let nis = NodeIndependentSet::new(&graph)?;
            let k = nis.max_degree().max(1);
            IndependenceSystem::new(nis, k, SystemClass::KExtendible)
        }
        SystemSpec::Planarity { n_vertices, edges } => {
            IndependenceSystem::new(Planarity::new(n_vertices, edges)?, 3, SystemClass::KSystem)
        }
    }
}

/// Conjunction of two systems over the same ground set; a
/// `(k_a + k_b)`-system.
pub fn intersect(a: &IndependenceSystem, b: &IndependenceSystem) -> Result<IndependenceSystem> {
    if a.ground_size() != b.ground_size() {
        return Err(Error::GroundSetMismatch {
            id: a.ground_size().max(b.ground_size()) - 1,
            ground: a.ground_size().min(b.ground_size()),
        });
    }
    let both = Intersection::new(a.oracle.clone(), b.oracle.clone());
    IndependenceSystem::new(both, a.k + b.k, SystemClass::KSystem)
}

/// Whether `k |B \ A| >= |A \ B|` holds for an independent `a` and a
/// greedy base `b`.
pub fn exchange_witness(sys: &IndependenceSystem, a: &ElementSet, b: &ElementSet) -> Result<bool> {
    if !sys.is_independent(a)? {
        return Err(Error::Precondition("A must be independent".into()));
    }
    let b_only = b.difference(a).len();
    let a_only = a.difference(b).len();
    Ok(sys.k() * b_only >= a_only)
}
