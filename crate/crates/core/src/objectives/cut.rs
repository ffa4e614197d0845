use serde::{Deserialize, Serialize};

use crate::{ElementId, ElementSet, Error, Objective, ObjectiveOracle, Result};

/// A weighted directed graph. Undirected graphs are stored with one arc in
/// each direction (see [`CutGraph::symmetrized`]).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CutGraph {
    n_vertices: usize,
    edges: Vec<(usize, usize, f64)>,
}

impl CutGraph {
    pub fn new(n_vertices: usize, edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        for &(u, v, w) in &edges {
            if u >= n_vertices || v >= n_vertices {
                return Err(Error::InvalidEdge(format!(
                    "({u}, {v}) references a vertex outside 0..{n_vertices}"
                )));
            }
            if u == v {
                return Err(Error::InvalidEdge(format!("self-loop at {u}")));
            }
            if !w.is_finite() || w < 0.0 {
                return Err(Error::InvalidEdge(format!("({u}, {v}) has weight {w}")));
            }
        }
        Ok(Self { n_vertices, edges })
    }

    /// Builds the directed version of an undirected edge list: every
    /// `{u, v}` becomes `u -> v` and `v -> u` with the same weight.
    pub fn undirected(n_vertices: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let arcs = edges
            .iter()
            .flat_map(|&(u, v, w)| [(u, v, w), (v, u, w)])
            .collect();
        Self::new(n_vertices, arcs)
    }

    pub fn symmetrized(&self) -> Self {
        Self::undirected(self.n_vertices, &self.edges).expect("already validated")
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.2).sum()
    }

    /// Undirected neighbour lists (arc direction ignored, duplicates removed).
    pub fn neighbours(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n_vertices];
        for &(u, v, _) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        adj
    }

    /// Unordered vertex pairs `{u, v}` with `u < v` joined by at least one arc.
    pub fn undirected_pairs(&self) -> Vec<(usize, usize)> {
        let mut pairs: Vec<_> = self
            .edges
            .iter()
            .map(|&(u, v, _)| (u.min(v), u.max(v)))
            .collect();
        pairs.sort_unstable();
        pairs.dedup();
        pairs
    }
}

/// `f(S) = sum over arcs (u, v) with u in S and v not in S of w(u, v)`.
#[derive(Clone, Debug)]
pub struct DirectedCut {
    out: Vec<Vec<(usize, f64)>>,
    inc: Vec<Vec<(usize, f64)>>,
}

impl DirectedCut {
    pub fn new(graph: &CutGraph) -> Self {
        let n = graph.n_vertices();
        let mut out = vec![Vec::new(); n];
        let mut inc = vec![Vec::new(); n];
        for &(u, v, w) in graph.edges() {
            out[u].push((v, w));
            inc[v].push((u, w));
        }
        Self { out, inc }
    }
}

impl Objective for DirectedCut {
    fn ground_size(&self) -> usize {
        self.out.len()
    }

    fn is_monotone(&self) -> bool {
        false
    }

    fn value(&self, set: &ElementSet) -> Result<f64> {
        let mut total = 0.0;
        for u in set.iter() {
            for &(v, w) in &self.out[u] {
                if !set.contains(v) {
                    total += w;
                }
            }
        }
        Ok(total)
    }

    fn gain(&self, u: ElementId, set: &ElementSet) -> Result<f64> {
        let gained: f64 = self.out[u]
            .iter()
            .filter(|&&(v, _)| !set.contains(v))
            .map(|&(_, w)| w)
            .sum();
        let lost: f64 = self.inc[u]
            .iter()
            .filter(|&&(x, _)| set.contains(x))
            .map(|&(_, w)| w)
            .sum();
        Ok(gained - lost)
    }

    fn name(&self) -> &str {
        "cut"
    }
}

pub fn make_directed_cut(graph: CutGraph) -> ObjectiveOracle {
    ObjectiveOracle::new(DirectedCut::new(&graph))
}
