use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::planarity::is_planar_dense;
use super::Independence;
use crate::objectives::CutGraph;
use crate::{ElementId, ElementSet, Error, Result};

/// At most `rho` elements.
#[derive(Clone, Debug)]
pub struct Cardinality {
    n: usize,
    rho: usize,
}

impl Cardinality {
    pub fn new(n: usize, rho: usize) -> Result<Self> {
        if rho == 0 {
            return Err(Error::InvalidSpec("cardinality limit must be positive".into()));
        }
        Ok(Self { n, rho })
    }
}

impl Independence for Cardinality {
    fn ground_size(&self) -> usize {
        self.n
    }

    fn is_independent(&self, set: &ElementSet) -> bool {
        set.len() <= self.rho
    }

    fn can_add(&self, set: &ElementSet, _u: ElementId) -> bool {
        set.len() < self.rho
    }

    fn rank(&self) -> Option<usize> {
        Some(self.rho.min(self.n))
    }

    fn cardinality_limit(&self) -> Option<usize> {
        Some(self.rho)
    }

    fn name(&self) -> &str {
        "cardinality"
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KnapsackSpec {
    /// Cost of element `i`; all strictly positive.
    pub costs: Vec<f64>,
    pub budget: f64,
}

/// Total cost at most the budget.
#[derive(Clone, Debug)]
pub struct Knapsack {
    spec: KnapsackSpec,
}

impl Knapsack {
    pub fn new(spec: KnapsackSpec) -> Result<Self> {
        if !(spec.budget > 0.0) || !spec.budget.is_finite() {
            return Err(Error::InvalidSpec(format!("budget must be positive, got {}", spec.budget)));
        }
        if let Some((i, c)) = spec
            .costs
            .iter()
            .enumerate()
            .find(|(_, c)| !(**c > 0.0) || !c.is_finite())
        {
            return Err(Error::InvalidSpec(format!("cost of element {i} must be positive, got {c}")));
        }
        Ok(Self { spec })
    }

    /// `ceil(c_max / c_min)`.
    pub fn extendibility(&self) -> usize {
        let max = self.spec.costs.iter().copied().fold(0.0, f64::max);
        let min = self.spec.costs.iter().copied().fold(f64::INFINITY, f64::min);
        if self.spec.costs.is_empty() {
            return 1;
        }
        // Guard exact integer ratios against representation error.
        ((max / min) - 1e-12).ceil().max(1.0) as usize
    }

    pub fn cost(&self, set: &ElementSet) -> f64 {
        set.iter().map(|u| self.spec.costs[u]).sum()
    }
}

impl Independence for Knapsack {
    fn ground_size(&self) -> usize {
        self.spec.costs.len()
    }

    fn is_independent(&self, set: &ElementSet) -> bool {
        self.cost(set) <= self.spec.budget + crate::TOLERANCE
    }

    fn rank(&self) -> Option<usize> {
        let mut costs = self.spec.costs.clone();
        costs.sort_by(f64::total_cmp);
        let mut total = 0.0;
        let mut count = 0;
        for c in costs {
            total += c;
            if total > self.spec.budget + crate::TOLERANCE {
                break;
            }
            count += 1;
        }
        Some(count)
    }

    fn name(&self) -> &str {
        "knapsack"
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabeledLimitSpec {
    /// Labels carried by element `i`.
    pub labels: Vec<Vec<usize>>,
    /// Limit for label `l`; labels without an entry are unlimited.
    pub per_label_limit: Vec<usize>,
    pub total_limit: usize,
}

/// At most `total_limit` elements and at most `per_label_limit[l]` elements
/// carrying label `l`.
#[derive(Clone, Debug)]
pub struct LabeledLimit {
    labels: Vec<Vec<usize>>,
    limits: Vec<usize>,
    total: usize,
}

impl LabeledLimit {
    pub fn new(spec: LabeledLimitSpec) -> Result<Self> {
        if spec.total_limit == 0 {
            return Err(Error::InvalidSpec("total limit must be at least 1".into()));
        }
        if let Some(l) = spec.per_label_limit.iter().position(|&m| m == 0) {
            return Err(Error::InvalidSpec(format!("limit of label {l} must be at least 1")));
        }
        let mut labels = spec.labels;
        for ls in &mut labels {
            ls.sort_unstable();
            ls.dedup();
        }
        Ok(Self {
            labels,
            limits: spec.per_label_limit,
            total: spec.total_limit,
        })
    }

    pub fn max_labels(&self) -> usize {
        self.labels.iter().map(Vec::len).max().unwrap_or(0)
    }

    fn limit(&self, label: usize) -> usize {
        self.limits.get(label).copied().unwrap_or(usize::MAX)
    }

    fn count(&self, set: &ElementSet, label: usize) -> usize {
        set.iter().filter(|&u| self.labels[u].contains(&label)).count()
    }
}

impl Independence for LabeledLimit {
    fn ground_size(&self) -> usize {
        self.labels.len()
    }

    fn is_independent(&self, set: &ElementSet) -> bool {
        if set.len() > self.total {
            return false;
        }
        let mut counts = std::collections::HashMap::new();
        for u in set.iter() {
            for &l in &self.labels[u] {
                let c = counts.entry(l).or_insert(0usize);
                *c += 1;
                if *c > self.limit(l) {
                    return false;
                }
            }
        }
        true
    }

    fn can_add(&self, set: &ElementSet, u: ElementId) -> bool {
        set.len() < self.total
            && self.labels[u]
                .iter()
                .all(|&l| self.count(set, l) < self.limit(l))
    }

    fn name(&self) -> &str {
        "labeled-limit"
    }
}

/// Vertex sets with no edge inside.
#[derive(Clone, Debug)]
pub struct NodeIndependentSet {
    adj: Vec<Vec<usize>>,
}

impl NodeIndependentSet {
    pub fn new(graph: &CutGraph) -> Result<Self> {
        Ok(Self {
            adj: graph.neighbours(),
        })
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }
}

impl Independence for NodeIndependentSet {
    fn ground_size(&self) -> usize {
        self.adj.len()
    }

    fn is_independent(&self, set: &ElementSet) -> bool {
        set.iter()
            .all(|u| self.adj[u].iter().all(|&v| !set.contains(v)))
    }

    fn can_add(&self, set: &ElementSet, u: ElementId) -> bool {
        self.adj[u].iter().all(|&v| !set.contains(v))
    }

    fn name(&self) -> &str {
        "node-independent-set"
    }
}

/// Edge subsets of a fixed simple graph that form a planar graph.
#[derive(Clone, Debug)]
pub struct Planarity {
    n_vertices: usize,
    edges: Vec<(usize, usize)>,
}

impl Planarity {
    pub fn new(n_vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for &(u, v) in &edges {
            if u >= n_vertices || v >= n_vertices {
                return Err(Error::InvalidEdge(format!(
                    "({u}, {v}) references a vertex outside 0..{n_vertices}"
                )));
            }
            if u == v {
                return Err(Error::InvalidEdge(format!("self-loop at {u}")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::InvalidEdge(format!("repeated edge {{{u}, {v}}}")));
            }
        }
        Ok(Self { n_vertices, edges })
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }
}

impl Independence for Planarity {
    fn ground_size(&self) -> usize {
        self.edges.len()
    }

    fn is_independent(&self, set: &ElementSet) -> bool {
        // Relabel the touched vertices densely so the test scales with |S|.
        let mut index = vec![usize::MAX; self.n_vertices];
        let mut next = 0;
        let mut label = |v: usize| {
            if index[v] == usize::MAX {
                index[v] = next;
                next += 1;
            }
            index[v]
        };
        let sub: Vec<(usize, usize)> = set
            .iter()
            .map(|e| {
                let (u, v) = self.edges[e];
                (label(u), label(v))
            })
            .collect();
        is_planar_dense(next, &sub)
    }

    fn name(&self) -> &str {
        "planarity"
    }
}

/// Conjunction of two oracles.
pub struct Intersection {
    a: Arc<dyn Independence>,
    b: Arc<dyn Independence>,
}

impl Intersection {
    pub fn new(a: Arc<dyn Independence>, b: Arc<dyn Independence>) -> Self {
        Self { a, b }
    }
}

impl Independence for Intersection {
    fn ground_size(&self) -> usize {
        self.a.ground_size()
    }

    fn is_independent(&self, set: &ElementSet) -> bool {
        self.a.is_independent(set) && self.b.is_independent(set)
    }

    fn can_add(&self, set: &ElementSet, u: ElementId) -> bool {
        self.a.can_add(set, u) && self.b.can_add(set, u)
    }

    fn cardinality_limit(&self) -> Option<usize> {
        match (self.a.cardinality_limit(), self.b.cardinality_limit()) {
            (Some(x), Some(y)) => Some(x.min(y)),
            _ => None,
        }
    }

    fn rank(&self) -> Option<usize> {
        self.cardinality_limit()
            .map(|rho| rho.min(self.ground_size()))
    }

    fn name(&self) -> &str {
        "intersection"
    }
}
