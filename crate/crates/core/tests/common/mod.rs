//! Random small instances shared by the integration tests.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand_xoshiro::SplitMix64;

use semistream::constraints::{make_system, IndependenceSystem, KnapsackSpec, LabeledLimitSpec, SystemSpec};
use semistream::objectives::{
    make_coverage_minus_dispersion, make_directed_cut, make_facility_location, make_logdet, make_modular,
    make_sqrt_coverage, CutGraph, KeywordTable, SimilarityMatrix,
};
use semistream::{ElementId, ElementSet, ObjectiveOracle};

pub type TestRng = SplitMix64;

pub fn rng(seed: u64) -> TestRng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn random_modular(rng: &mut TestRng, n: usize) -> ObjectiveOracle {
    let w: Vec<f64> = (0..n)
        .map(|_| if rng.gen_bool(0.1) { 0.0 } else { rng.gen_range(0.0..10.0) })
        .collect();
    make_modular(&w).unwrap()
}

pub fn random_digraph(rng: &mut TestRng, n: usize, p: f64) -> CutGraph {
    let mut arcs = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.gen_bool(p) {
                arcs.push((u, v, rng.gen_range(0.1..5.0)));
            }
        }
    }
    CutGraph::new(n, arcs).unwrap()
}

pub fn random_cut(rng: &mut TestRng, n: usize) -> ObjectiveOracle {
    let p = rng.gen_range(0.15..0.6);
    make_directed_cut(random_digraph(rng, n, p))
}

fn random_points(rng: &mut TestRng, n: usize) -> Vec<Vec<f64>> {
    (0..n).map(|_| (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect()
}

/// Gaussian-kernel similarity of random points in the cube.
pub fn random_similarity(rng: &mut TestRng, n: usize) -> SimilarityMatrix {
    let pts = random_points(rng, n);
    let rows = pts
        .iter()
        .map(|a| {
            pts.iter()
                .map(|b| {
                    let d2: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum();
                    (-d2).exp()
                })
                .collect()
        })
        .collect();
    SimilarityMatrix::new(rows).unwrap()
}

pub fn random_facility(rng: &mut TestRng, n: usize) -> ObjectiveOracle {
    make_facility_location(random_similarity(rng, n), None).unwrap()
}

pub fn random_keywords(rng: &mut TestRng, n: usize) -> KeywordTable {
    let entries = (0..n)
        .map(|_| {
            let words = (0..rng.gen_range(1..4))
                .map(|_| format!("w{}", rng.gen_range(0..8)))
                .collect();
            (words, rng.gen_range(0.5..3.0))
        })
        .collect();
    KeywordTable::new(entries).unwrap()
}

pub fn random_coverage(rng: &mut TestRng, n: usize) -> ObjectiveOracle {
    make_sqrt_coverage(&random_keywords(rng, n))
}

pub fn random_dispersion(rng: &mut TestRng, n: usize) -> ObjectiveOracle {
    make_coverage_minus_dispersion(random_similarity(rng, n))
}

pub fn random_logdet(rng: &mut TestRng, n: usize) -> ObjectiveOracle {
    make_logdet(random_similarity(rng, n), rng.gen_range(0.5..3.0)).unwrap()
}

pub fn random_monotone(rng: &mut TestRng, n: usize) -> ObjectiveOracle {
    match rng.gen_range(0..3) {
        0 => random_modular(rng, n),
        1 => random_facility(rng, n),
        _ => random_coverage(rng, n),
    }
}

pub fn cardinality(n: usize, rho: usize) -> IndependenceSystem {
    make_system(SystemSpec::Cardinality { n, rho }).unwrap()
}

pub fn random_cardinality(rng: &mut TestRng, n: usize) -> IndependenceSystem {
    cardinality(n, rng.gen_range(1..=4.min(n)))
}

pub fn random_labeled(rng: &mut TestRng, n: usize) -> IndependenceSystem {
    let labels = (0..n)
        .map(|_| {
            let mut l: Vec<usize> = (0..rng.gen_range(1..=2)).map(|_| rng.gen_range(0..3)).collect();
            l.sort_unstable();
            l.dedup();
            l
        })
        .collect();
    let per_label_limit = (0..3).map(|_| rng.gen_range(1..=3)).collect();
    make_system(SystemSpec::LabeledLimit(LabeledLimitSpec {
        labels,
        per_label_limit,
        total_limit: rng.gen_range(2..=5),
    }))
    .unwrap()
}

pub fn random_knapsack(rng: &mut TestRng, n: usize) -> IndependenceSystem {
    let costs = (0..n).map(|_| rng.gen_range(1..=4) as f64).collect();
    make_system(SystemSpec::Knapsack(KnapsackSpec {
        costs,
        budget: rng.gen_range(3..=9) as f64,
    }))
    .unwrap()
}

pub fn random_node_is(rng: &mut TestRng, n: usize) -> IndependenceSystem {
    let p = rng.gen_range(0.1..0.4);
    make_system(SystemSpec::NodeIndependentSet {
        graph: random_digraph(rng, n, p),
    })
    .unwrap()
}

/// Planarity over the edges of a dense random graph on 7 vertices.
pub fn random_planarity(rng: &mut TestRng) -> IndependenceSystem {
    let mut edges = Vec::new();
    for u in 0..7 {
        for v in u + 1..7 {
            if rng.gen_bool(0.7) {
                edges.push((u, v));
            }
        }
    }
    if edges.is_empty() {
        edges.push((0, 1));
    }
    make_system(SystemSpec::Planarity { n_vertices: 7, edges }).unwrap()
}

pub fn shuffled(rng: &mut TestRng, n: usize) -> Vec<ElementId> {
    let mut v: Vec<ElementId> = (0..n).collect();
    v.shuffle(rng);
    v
}

/// Independent set built by scanning a random order and stopping at a
/// random point.
pub fn random_independent(rng: &mut TestRng, sys: &IndependenceSystem) -> ElementSet {
    let order = shuffled(rng, sys.ground_size());
    let stop = rng.gen_range(0..=order.len());
    let mut s = ElementSet::new();
    for &u in &order[..stop] {
        if sys.can_add(&s, u).unwrap() {
            s.insert(u);
        }
    }
    s
}

pub fn random_subset(rng: &mut TestRng, n: usize, p: f64) -> ElementSet {
    (0..n).filter(|_| rng.gen_bool(p)).collect()
}

/// Largest feasible singleton value.
pub fn max_singleton(f: &ObjectiveOracle, sys: &IndependenceSystem) -> f64 {
    (0..sys.ground_size())
        .filter(|&u| sys.is_independent(&ElementSet::from([u])).unwrap())
        .map(|u| f.singleton(u).unwrap())
        .fold(0.0, f64::max)
}
