use std::collections::{BTreeMap, HashMap, HashSet};
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use rand::Rng;

use super::seeded_rng;
use crate::objectives::CutGraph;
use crate::{Error, Result};

/// An undirected weighted graph with `u < v` on every edge, sorted.
#[derive(Clone, Debug, PartialEq)]
pub struct UndirectedGraph {
    pub n_vertices: usize,
    pub edges: Vec<(usize, usize, f64)>,
    /// Original label of each vertex, when loaded from a file.
    pub labels: Vec<String>,
}

impl UndirectedGraph {
    /// Builds a graph from unit-weight pairs.
    pub fn from_pairs(n_vertices: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut edges: Vec<_> = pairs
            .into_iter()
            .map(|(u, v)| (u.min(v), u.max(v), 1.0))
            .collect();
        edges.sort_by_key(|a| (a.0, a.1));
        Self {
            n_vertices,
            edges,
            labels: (0..n_vertices).map(|i| i.to_string()).collect(),
        }
    }

    /// Both arcs of every edge, for cut objectives and vertex constraints.
    pub fn cut_graph(&self) -> Result<CutGraph> {
        CutGraph::undirected(self.n_vertices, &self.edges)
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n_vertices];
        for &(u, v, _) in &self.edges {
            d[u] += 1;
            d[v] += 1;
        }
        d
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.edges.iter().map(|&(u, v, _)| (u, v)).collect()
    }
}

/// G(n, p): each unordered pair `{i, j}`, visited in lexicographic order,
/// is kept when a uniform draw from `[0, 1)` falls below `p`.
pub fn gen_erdos_renyi(n: usize, p: f64, seed: u64) -> Result<UndirectedGraph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidConfig(format!("p must lie in [0, 1], got {p}")));
    }
    let mut rng = seeded_rng(seed);
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen::<f64>() < p {
                pairs.push((i, j));
            }
        }
    }
    Ok(UndirectedGraph::from_pairs(n, pairs))
}

/// Small-world graph: a ring where every vertex is joined to its `k_ring`
/// nearest neighbours, after which each ring edge `(u, u + j)` is rewired
/// with probability `beta` to `(u, w)` for a uniform `w` that is neither
/// `u` nor already adjacent to `u`. Edges are visited by offset `j` and then
/// by `u`, and the edge count never changes.
pub fn gen_watts_strogatz(n: usize, k_ring: usize, beta: f64, seed: u64) -> Result<UndirectedGraph> {
    if !k_ring.is_multiple_of(2) || k_ring >= n {
        return Err(Error::InvalidConfig(format!(
            "k_ring must be even and below n = {n}, got {k_ring}"
        )));
    }
    if !(0.0..=1.0).contains(&beta) {
        return Err(Error::InvalidConfig(format!("beta must lie in [0, 1], got {beta}")));
    }
    let key = |a: usize, b: usize| (a.min(b), a.max(b));
    let mut adj: Vec<HashSet<usize>> = vec![HashSet::new(); n];
    // Insertion-ordered edge slots, so the output order does not depend on
    // hashing.
    let mut slots: BTreeMap<(usize, usize), ()> = BTreeMap::new();
    for j in 1..=k_ring / 2 {
        for u in 0..n {
            let v = (u + j) % n;
            adj[u].insert(v);
            adj[v].insert(u);
            slots.insert(key(u, v), ());
        }
    }
    let mut rng = seeded_rng(seed);
    for j in 1..=k_ring / 2 {
        for u in 0..n {
            let v = (u + j) % n;
            if rng.gen::<f64>() >= beta || !adj[u].contains(&v) {
                continue;
            }
            if adj[u].len() >= n - 1 {
                continue;
            }
            let mut w = rng.gen_range(0..n);
            while w == u || adj[u].contains(&w) {
                w = rng.gen_range(0..n);
            }
            adj[u].remove(&v);
            adj[v].remove(&u);
            slots.remove(&key(u, v));
            adj[u].insert(w);
            adj[w].insert(u);
            slots.insert(key(u, w), ());
        }
    }
    Ok(UndirectedGraph::from_pairs(n, slots.into_keys()))
}

/// Parses `u<TAB>v[<TAB>weight]` lines. Blank lines and lines starting with
/// `#` are skipped, vertex labels are renumbered densely in order of first
/// appearance, the weight defaults to 1, and repeated edges (in either
/// orientation) have their weights summed.
pub fn read_edge_list(reader: impl Read) -> Result<UndirectedGraph> {
    let mut ids: HashMap<String, usize> = HashMap::new();
    let mut labels = Vec::new();
    let mut weights: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for (idx, line) in BufReader::new(reader).lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = text.split_whitespace().collect();
        if fields.len() < 2 || fields.len() > 3 {
            return Err(Error::Parse {
                line: lineno,
                message: format!("expected `u<TAB>v[<TAB>weight]`, got {text:?}"),
            });
        }
        let weight = match fields.get(2) {
            None => 1.0,
            Some(w) => w.parse::<f64>().map_err(|e| Error::Parse {
                line: lineno,
                message: format!("bad weight {w:?}: {e}"),
            })?,
        };
        if !weight.is_finite() || weight < 0.0 {
            return Err(Error::Parse {
                line: lineno,
                message: format!("weight must be finite and non-negative, got {weight}"),
            });
        }
        if fields[0] == fields[1] {
            return Err(Error::Parse {
                line: lineno,
                message: format!("self-loop at {}", fields[0]),
            });
        }
        let mut id = |label: &str| {
            *ids.entry(label.to_string()).or_insert_with(|| {
                labels.push(label.to_string());
                labels.len() - 1
            })
        };
        let (u, v) = (id(fields[0]), id(fields[1]));
        *weights.entry((u.min(v), u.max(v))).or_default() += weight;
    }
    Ok(UndirectedGraph {
        n_vertices: labels.len(),
        edges: weights.into_iter().map(|((u, v), w)| (u, v, w)).collect(),
        labels,
    })
}

pub fn load_edge_list(path: impl AsRef<Path>) -> Result<UndirectedGraph> {
    read_edge_list(std::fs::File::open(path)?)
}

/// Writes `u<TAB>v<TAB>weight` lines readable by [`read_edge_list`].
pub fn write_edge_list(graph: &UndirectedGraph, mut out: impl Write) -> Result<()> {
    writeln!(out, "# {} vertices, {} edges", graph.n_vertices, graph.edges.len())?;
    for &(u, v, w) in &graph.edges {
        writeln!(out, "{u}\t{v}\t{w}")?;
    }
    Ok(())
}
