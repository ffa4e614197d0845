//! Left-right planarity test.
//!
//! Two depth-first passes: the first orients the graph and computes lowpoints
//! and nesting depths, the second tracks conflict pairs of return edges and
//! fails as soon as two return edges would have to sit on the same side.

use std::collections::HashMap;

use crate::{Error, Result};

/// Whether the undirected simple graph with exactly these edges is planar.
///
/// Vertex labels are arbitrary; vertices that touch no edge are irrelevant.
/// Self-loops and repeated edges are rejected.
pub fn planarity_check(edges: &[(usize, usize)]) -> Result<bool> {
    let mut index: HashMap<usize, usize> = HashMap::new();
    let mut arcs = Vec::with_capacity(edges.len());
    let mut seen = std::collections::HashSet::with_capacity(edges.len());
    for &(u, v) in edges {
        if u == v {
            return Err(Error::InvalidEdge(format!("self-loop at {u}")));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(Error::InvalidEdge(format!("repeated edge {{{u}, {v}}}")));
        }
        let next = index.len();
        let a = *index.entry(u).or_insert(next);
        let next = index.len();
        let b = *index.entry(v).or_insert(next);
        arcs.push((a, b));
    }
    Ok(is_planar_dense(index.len(), &arcs))
}

/// Planarity of a simple graph on vertices `0..n` (no validation).
pub(crate) fn is_planar_dense(n: usize, edges: &[(usize, usize)]) -> bool {
    if n >= 3 && edges.len() > 3 * n - 6 {
        return false;
    }
    LrState::new(n, edges).run()
}

type Edge = usize;

#[derive(Clone, Copy, Default, PartialEq, Eq)]
struct Interval {
    low: Option<Edge>,
    high: Option<Edge>,
}

impl Interval {
    fn is_empty(&self) -> bool {
        self.low.is_none() && self.high.is_none()
    }
}

#[derive(Clone, Copy, Default)]
struct ConflictPair {
    left: Interval,
    right: Interval,
}

impl ConflictPair {
    fn swap(&mut self) {
        std::mem::swap(&mut self.left, &mut self.right);
    }
}

struct LrState {
    adj: Vec<Vec<(usize, Edge)>>,
    // Orientation: edge e goes from tail[e] to head[e] once oriented.
    tail: Vec<usize>,
    head: Vec<usize>,
    oriented: Vec<bool>,
    height: Vec<Option<usize>>,
    parent_edge: Vec<Option<Edge>>,
    lowpt: Vec<usize>,
    lowpt2: Vec<usize>,
    nesting_depth: Vec<usize>,
    ordered_adj: Vec<Vec<Edge>>,
    roots: Vec<usize>,
    stack: Vec<ConflictPair>,
    // Stack height when the edge started being processed.
    stack_bottom: Vec<usize>,
    lowpt_edge: Vec<Option<Edge>>,
    refs: Vec<Option<Edge>>,
}

impl LrState {
    fn new(n: usize, edges: &[(usize, usize)]) -> Self {
        let m = edges.len();
        let mut adj = vec![Vec::new(); n];
        for (e, &(u, v)) in edges.iter().enumerate() {
            adj[u].push((v, e));
            adj[v].push((u, e));
        }
        Self {
            adj,
            tail: vec![0; m],
            head: vec![0; m],
            oriented: vec![false; m],
            height: vec![None; n],
            parent_edge: vec![None; n],
            lowpt: vec![0; m],
            lowpt2: vec![0; m],
            nesting_depth: vec![0; m],
            ordered_adj: vec![Vec::new(); n],
            roots: Vec::new(),
            stack: Vec::new(),
            stack_bottom: vec![0; m],
            lowpt_edge: vec![None; m],
            refs: vec![None; m],
        }
    }

    fn run(mut self) -> bool {
        for v in 0..self.adj.len() {
            if self.height[v].is_none() {
                self.height[v] = Some(0);
                self.roots.push(v);
                self.orient(v);
            }
        }
        for v in 0..self.adj.len() {
            let mut out: Vec<Edge> = self.adj[v]
                .iter()
                .map(|&(_, e)| e)
                .filter(|&e| self.tail[e] == v)
                .collect();
            out.sort_by_key(|&e| self.nesting_depth[e]);
            self.ordered_adj[v] = out;
        }
        let roots = std::mem::take(&mut self.roots);
        roots.into_iter().all(|v| self.test(v))
    }

    fn h(&self, v: usize) -> usize {
        self.height[v].expect("vertex visited")
    }

    fn orient(&mut self, v: usize) {
        let e = self.parent_edge[v];
        let hv = self.h(v);
        for idx in 0..self.adj[v].len() {
            let (w, vw) = self.adj[v][idx];
            if self.oriented[vw] {
                continue;
            }
            self.oriented[vw] = true;
            self.tail[vw] = v;
            self.head[vw] = w;
            self.lowpt[vw] = hv;
            self.lowpt2[vw] = hv;
            match self.height[w] {
                None => {
                    self.parent_edge[w] = Some(vw);
                    self.height[w] = Some(hv + 1);
                    self.orient(w);
                }
                Some(hw) => self.lowpt[vw] = hw,
            }
            self.nesting_depth[vw] = 2 * self.lowpt[vw] + usize::from(self.lowpt2[vw] < hv);
            if let Some(e) = e {
                if self.lowpt[vw] < self.lowpt[e] {
                    self.lowpt2[e] = self.lowpt[e].min(self.lowpt2[vw]);
                    self.lowpt[e] = self.lowpt[vw];
                } else if self.lowpt[vw] > self.lowpt[e] {
                    self.lowpt2[e] = self.lowpt2[e].min(self.lowpt[vw]);
                } else {
                    self.lowpt2[e] = self.lowpt2[e].min(self.lowpt2[vw]);
                }
            }
        }
    }

    fn test(&mut self, v: usize) -> bool {
        let e = self.parent_edge[v];
        let hv = self.h(v);
        for idx in 0..self.ordered_adj[v].len() {
            let ei = self.ordered_adj[v][idx];
            let w = self.head[ei];
            self.stack_bottom[ei] = self.stack.len();
            if self.parent_edge[w] == Some(ei) {
                if !self.test(w) {
                    return false;
                }
            } else {
                self.lowpt_edge[ei] = Some(ei);
                self.stack.push(ConflictPair {
                    left: Interval::default(),
                    right: Interval {
                        low: Some(ei),
                        high: Some(ei),
                    },
                });
            }
            if self.lowpt[ei] < hv {
                let e = e.expect("only tree edges below a root have return edges");
                if idx == 0 {
                    self.lowpt_edge[e] = self.lowpt_edge[ei];
                } else if !self.add_constraints(ei, e) {
                    return false;
                }
            }
        }
        if let Some(e) = e {
            self.remove_back_edges(e);
        }
        true
    }

    fn conflicting(&self, interval: &Interval, b: Edge) -> bool {
        match interval.high {
            Some(high) => self.lowpt[high] > self.lowpt[b],
            None => false,
        }
    }

    fn lowest(&self, p: &ConflictPair) -> usize {
        match (p.left.low, p.right.low) {
            (None, Some(r)) => self.lowpt[r],
            (Some(l), None) => self.lowpt[l],
            (Some(l), Some(r)) => self.lowpt[l].min(self.lowpt[r]),
            (None, None) => unreachable!("empty conflict pair on the stack"),
        }
    }

    fn add_constraints(&mut self, ei: Edge, e: Edge) -> bool {
        let mut p = ConflictPair::default();
        loop {
            let mut q = self.stack.pop().expect("return edge pushed a conflict pair");
            if !q.left.is_empty() {
                q.swap();
            }
            if !q.left.is_empty() {
                return false;
            }
            let q_low = q.right.low.expect("non-empty interval");
            if self.lowpt[q_low] > self.lowpt[e] {
                match p.right.low {
                    None => p.right = q.right,
                    Some(low) => self.refs[low] = q.right.high,
                }
                p.right.low = q.right.low;
            } else {
                self.refs[q_low] = self.lowpt_edge[e];
            }
            if self.stack.len() == self.stack_bottom[ei] {
                break;
            }
        }
        while let Some(top) = self.stack.last() {
            if !(self.conflicting(&top.left, ei) || self.conflicting(&top.right, ei)) {
                break;
            }
            let mut q = self.stack.pop().expect("checked non-empty");
            if self.conflicting(&q.right, ei) {
                q.swap();
            }
            if self.conflicting(&q.right, ei) {
                return false;
            }
            if let Some(low) = p.right.low {
                self.refs[low] = q.right.high;
            }
            if q.right.low.is_some() {
                p.right.low = q.right.low;
            }
            match p.left.low {
                None => p.left = q.left,
                Some(low) => self.refs[low] = q.left.high,
            }
            p.left.low = q.left.low;
        }
        if !(p.left.is_empty() && p.right.is_empty()) {
            self.stack.push(p);
        }
        true
    }

    fn remove_back_edges(&mut self, e: Edge) {
        let u = self.tail[e];
        let hu = self.h(u);
        while let Some(top) = self.stack.last() {
            if self.lowest(top) != hu {
                break;
            }
            self.stack.pop();
        }
        if let Some(mut p) = self.stack.pop() {
            while let Some(high) = p.left.high {
                if self.head[high] != u {
                    break;
                }
                p.left.high = self.refs[high];
            }
            if p.left.high.is_none() {
                if let Some(low) = p.left.low {
                    self.refs[low] = p.right.low;
                    p.left.low = None;
                }
            }
            while let Some(high) = p.right.high {
                if self.head[high] != u {
                    break;
                }
                p.right.high = self.refs[high];
            }
            if p.right.high.is_none() {
                if let Some(low) = p.right.low {
                    self.refs[low] = p.left.low;
                    p.right.low = None;
                }
            }
            self.stack.push(p);
        }
        if self.lowpt[e] < hu {
            let top = self.stack.last().expect("return edge keeps a conflict pair");
            let (hl, hr) = (top.left.high, top.right.high);
            self.refs[e] = match (hl, hr) {
                (Some(l), Some(r)) if self.lowpt[l] > self.lowpt[r] => Some(l),
                (Some(l), None) => Some(l),
                _ => hr,
            };
        }
    }
}
