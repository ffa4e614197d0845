//! Fixed instances for the criterion benches, built through the same path
//! as the experiment runner so the numbers line up with `bench run`.

use semistream::experiment::{
    build_instance, gen_erdos_renyi, gen_watts_strogatz, prepare_params, ConstraintConfig, CostRule, Instance,
    ObjectiveKind, RunParams,
};
use semistream::Result;

pub use semistream::experiment::{run_algorithm, AlgorithmKind};

/// Copies used by the framework in every fixture.
pub const FRAMEWORK_COPIES: usize = 4;

pub struct Fixture {
    pub label: String,
    pub instance: Instance,
    pub params: RunParams,
}

impl Fixture {
    fn new(label: String, instance: Instance) -> Result<Self> {
        let params = prepare_params(&instance, FRAMEWORK_COPIES, semistream::baselines::DEFAULT_SIEVE_EPSILON)?;
        Ok(Self { label, instance, params })
    }

    /// Runs `kind` once on a fresh oracle and returns the solution value.
    pub fn run(&self, kind: AlgorithmKind) -> Result<f64> {
        let f = self.instance.oracle()?;
        let run = run_algorithm(kind, &f, &self.instance.system, &self.instance.stream, &self.params, false)?;
        Ok(run.value)
    }
}

/// Directed cut on an Erdős–Rényi graph under a cardinality limit.
pub fn cut_cardinality(n: usize, p: f64, rho: usize, seed: u64) -> Result<Fixture> {
    let graph = gen_erdos_renyi(n, p, seed)?;
    let inst = build_instance(graph, ObjectiveKind::Cut, &ConstraintConfig::Cardinality { rho }, seed)?;
    Fixture::new(format!("cut/er{n}/rho{rho}"), inst)
}

/// Directed cut restricted to independent vertex sets.
pub fn cut_independent_set(n: usize, p: f64, seed: u64) -> Result<Fixture> {
    let graph = gen_erdos_renyi(n, p, seed)?;
    let inst = build_instance(graph, ObjectiveKind::Cut, &ConstraintConfig::NodeIndependentSet, seed)?;
    Fixture::new(format!("cut/er{n}/independent"), inst)
}

/// Edge count of a planar subgraph of a small-world graph, with a knapsack
/// on the edges.
pub fn planar_knapsack(n: usize, k_ring: usize, budget: f64, seed: u64) -> Result<Fixture> {
    let graph = gen_watts_strogatz(n, k_ring, 0.1, seed)?;
    let constraint = ConstraintConfig::PlanarityKnapsack {
        budget,
        costs: CostRule::Degree { q: 6 },
    };
    let inst = build_instance(graph, ObjectiveKind::EdgeLinear, &constraint, seed)?;
    Fixture::new(format!("edges/ws{n}/planar-knapsack"), inst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_run_every_applicable_algorithm() {
        let fx = cut_cardinality(40, 0.2, 5, 0).unwrap();
        for kind in [
            AlgorithmKind::ThresholdSieve,
            AlgorithmKind::AdaptiveSieve,
            AlgorithmKind::Framework,
            AlgorithmKind::SieveStreaming,
            AlgorithmKind::Preemption,
            AlgorithmKind::SwapStreaming,
            AlgorithmKind::StreamingGreedy,
        ] {
            assert!(fx.run(kind).unwrap() > 0.0, "{}", kind.name());
        }
        let planar = planar_knapsack(30, 4, 10.0, 0).unwrap();
        assert!(planar.run(AlgorithmKind::TauFreeSieve).unwrap() > 0.0);
        assert!(cut_independent_set(30, 0.1, 0).unwrap().run(AlgorithmKind::Framework).unwrap() > 0.0);
    }
}
