use std::io::Write;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{AlgorithmKind, ConstraintConfig, CostRule, ExperimentConfig, InstanceSpec, ObjectiveKind};
use super::graphs::{gen_erdos_renyi, gen_watts_strogatz, load_edge_list, UndirectedGraph};
use super::seeded_rng;
use crate::baselines::{run_component, Preemption, SieveStreaming, StreamingGreedy, SwapStreaming};
use crate::constraints::{intersect, make_system, IndependenceSystem, KnapsackSpec, SystemSpec};
use crate::objectives::{make_directed_cut, make_modular};
use crate::offline::{default_iterations, repeated_greedy, unweighted_greedy, weighted_greedy};
use crate::streaming::{
    contract_audit, framework_run, pow2_at_least, AdaptiveSieve, FrameworkConfig, StreamingComponent,
    TauFreeSieve, ThresholdSieve, TraceRow,
};
use crate::{ElementId, ElementSet, Error, ObjectiveOracle, Result};

/// Mixed into the seed for everything drawn after the graph, so that the
/// graph of a seed does not depend on the objective or constraint.
const AUX_SALT: u64 = 0x0005_EED0_FA11_5EED;

/// A graph with the objective weights, constraint and stream of one cell.
pub struct Instance {
    pub graph: UndirectedGraph,
    pub objective: ObjectiveKind,
    /// Vertex weights for `linear`; empty otherwise.
    pub weights: Vec<f64>,
    /// Knapsack costs after normalization, if any.
    pub costs: Option<Vec<f64>>,
    pub system: IndependenceSystem,
    /// All elements in shuffled order.
    pub stream: Vec<ElementId>,
}

impl Instance {
    pub fn n_elements(&self) -> usize {
        if self.objective.elements_are_edges() {
            self.graph.edges.len()
        } else {
            self.graph.n_vertices
        }
    }

    /// A fresh oracle with a zeroed call counter.
    pub fn oracle(&self) -> Result<ObjectiveOracle> {
        match self.objective {
            ObjectiveKind::Cut => Ok(make_directed_cut(self.graph.cut_graph()?)),
            ObjectiveKind::Linear => make_modular(&self.weights),
            ObjectiveKind::EdgeLinear => make_modular(&vec![1.0; self.graph.edges.len()]),
        }
    }
}

pub fn build_graph(spec: &InstanceSpec, seed: u64) -> Result<UndirectedGraph> {
    match spec {
        InstanceSpec::ErdosRenyi { n, p } => gen_erdos_renyi(*n, *p, seed),
        InstanceSpec::WattsStrogatz { n, k_ring, beta } => gen_watts_strogatz(*n, *k_ring, *beta, seed),
        InstanceSpec::EdgeList { path } => load_edge_list(path),
    }
}

fn draw_costs(rule: CostRule, degrees: &[usize], rng: &mut impl Rng) -> Vec<f64> {
    degrees
        .iter()
        .map(|&d| match rule {
            CostRule::RandomInt => rng.gen_range(1..=5) as f64,
            CostRule::Degree { q } => d.saturating_sub(q).max(1) as f64,
        })
        .collect()
}

fn scale_to_sum(costs: &mut [f64], target: f64) {
    let total: f64 = costs.iter().sum();
    for c in costs.iter_mut() {
        *c *= target / total;
    }
}

/// Draws weights, costs and the stream order for `graph`, in that order,
/// from one generator seeded with `seed ^ AUX_SALT`.
pub fn build_instance(
    graph: UndirectedGraph,
    objective: ObjectiveKind,
    constraint: &ConstraintConfig,
    seed: u64,
) -> Result<Instance> {
    let mut rng = seeded_rng(seed ^ AUX_SALT);
    let weights = match objective {
        // gen::<f64>() lies in [0, 1); flip it onto (0, 1].
        ObjectiveKind::Linear => (0..graph.n_vertices).map(|_| 1.0 - rng.gen::<f64>()).collect(),
        _ => Vec::new(),
    };
    let degrees = graph.degrees();
    let n_vertices = graph.n_vertices;
    let mut costs = None;
    let system = match constraint {
        ConstraintConfig::NodeIndependentSet => make_system(SystemSpec::NodeIndependentSet {
            graph: graph.cut_graph()?,
        })?,
        ConstraintConfig::Cardinality { rho } => make_system(SystemSpec::Cardinality {
            n: n_vertices,
            rho: *rho,
        })?,
        ConstraintConfig::Knapsack { budget, costs: rule } => {
            let mut c = draw_costs(*rule, &degrees, &mut rng);
            scale_to_sum(&mut c, n_vertices as f64 / 10.0);
            costs = Some(c.clone());
            make_system(SystemSpec::Knapsack(KnapsackSpec { costs: c, budget: *budget }))?
        }
        ConstraintConfig::Planarity | ConstraintConfig::PlanarityKnapsack { .. } => {
            let planar = make_system(SystemSpec::Planarity {
                n_vertices,
                edges: graph.pairs(),
            })?;
            match constraint {
                ConstraintConfig::PlanarityKnapsack { budget, costs: rule } => {
                    let first_endpoint: Vec<usize> = graph.edges.iter().map(|&(u, _, _)| degrees[u]).collect();
                    let mut c = draw_costs(*rule, &first_endpoint, &mut rng);
                    scale_to_sum(&mut c, n_vertices as f64);
                    costs = Some(c.clone());
                    let knapsack = make_system(SystemSpec::Knapsack(KnapsackSpec { costs: c, budget: *budget }))?;
                    intersect(&planar, &knapsack)?
                }
                _ => planar,
            }
        }
    };
    let n_elements = if objective.elements_are_edges() {
        graph.edges.len()
    } else {
        n_vertices
    };
    let mut stream: Vec<ElementId> = (0..n_elements).collect();
    stream.shuffle(&mut rng);
    Ok(Instance {
        graph,
        objective,
        weights,
        costs,
        system,
        stream,
    })
}

/// Parameters handed to algorithms that cannot work them out themselves.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RunParams {
    pub framework_copies: usize,
    pub sieve_epsilon: f64,
    /// Estimate of the largest independent set size.
    pub rho: usize,
    /// Largest value of a feasible singleton.
    pub max_singleton: f64,
}

/// Largest feasible singleton value over `elements`.
pub fn max_singleton(f: &ObjectiveOracle, sys: &IndependenceSystem, elements: &[ElementId]) -> Result<f64> {
    let mut best = 0.0f64;
    for &u in elements {
        if sys.can_add(&ElementSet::new(), u)? {
            best = best.max(f.singleton(u)?);
        }
    }
    Ok(best)
}

/// The exact `rho` when the system knows it; otherwise the size of the
/// greedy base obtained by scanning `order`.
pub fn estimate_rho(sys: &IndependenceSystem, order: &[ElementId]) -> Result<usize> {
    match sys.rho_hint() {
        Some(rho) => Ok(rho),
        None => Ok(unweighted_greedy(sys, order)?.len().max(1)),
    }
}

/// Elements sorted by the heuristic order [`estimate_rho`] uses for an
/// instance: vertices by ascending degree, edges by ascending cost.
pub fn rho_order(inst: &Instance) -> Vec<ElementId> {
    let mut order: Vec<ElementId> = (0..inst.n_elements()).collect();
    if inst.objective.elements_are_edges() {
        if let Some(c) = &inst.costs {
            order.sort_by(|&a, &b| c[a].total_cmp(&c[b]).then(a.cmp(&b)));
        }
    } else {
        let d = inst.graph.degrees();
        order.sort_by_key(|&u| (d[u], u));
    }
    order
}

/// Parameters for `inst`, computed on a separate oracle so that they do not
/// show up in the algorithms' call counts.
pub fn prepare_params(inst: &Instance, framework_copies: usize, sieve_epsilon: f64) -> Result<RunParams> {
    let scratch = inst.oracle()?;
    let elements: Vec<ElementId> = (0..inst.n_elements()).collect();
    Ok(RunParams {
        framework_copies,
        sieve_epsilon,
        rho: estimate_rho(&inst.system, &rho_order(inst))?,
        max_singleton: max_singleton(&scratch, &inst.system, &elements)?,
    })
}

/// Builds the streaming component for `kind`; `None` for the framework and
/// the offline algorithms.
///
/// The sieves with a known `tau` use `2M` and `2^ceil(log2 M)`. When no
/// singleton has positive value every feasible set has value 0 and `tau`
/// is set to 1.
pub fn make_component<'a>(
    kind: AlgorithmKind,
    f: &'a ObjectiveOracle,
    sys: &'a IndependenceSystem,
    p: &RunParams,
) -> Result<Option<Box<dyn StreamingComponent + 'a>>> {
    let m = p.max_singleton;
    let component: Box<dyn StreamingComponent + 'a> = match kind {
        AlgorithmKind::StreamingGreedy => Box::new(StreamingGreedy::new(sys)),
        AlgorithmKind::SieveStreaming => Box::new(SieveStreaming::new(f, sys, p.rho, p.sieve_epsilon)?),
        AlgorithmKind::Preemption => Box::new(Preemption::new(f, sys)?),
        AlgorithmKind::SwapStreaming => Box::new(SwapStreaming::new(f, sys)?),
        AlgorithmKind::ThresholdSieve => {
            let tau = if m > 0.0 { 2.0 * m } else { 1.0 };
            Box::new(ThresholdSieve::new(f, sys, tau, p.rho)?)
        }
        AlgorithmKind::AdaptiveSieve => {
            let tau = if m > 0.0 { pow2_at_least(m) } else { 1.0 };
            Box::new(AdaptiveSieve::new(f, sys, tau)?)
        }
        AlgorithmKind::TauFreeSieve => Box::new(TauFreeSieve::new(f, sys)),
        AlgorithmKind::Framework | AlgorithmKind::WeightedGreedy | AlgorithmKind::RepeatedGreedy => {
            return Ok(None)
        }
    };
    Ok(Some(component))
}

/// What one algorithm produced on one stream.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgorithmRun {
    pub solution: ElementSet,
    pub value: f64,
    /// Oracle calls made by the algorithm, excluding the final evaluation
    /// of its answer.
    pub oracle_calls: u64,
    pub peak_elements: usize,
    /// Filled for streaming components when a trace was requested.
    pub trace: Vec<TraceRow>,
    /// Contract violations found while tracing.
    pub violations: Vec<String>,
}

/// Runs `kind` over `stream` with a fresh call count on `f`.
pub fn run_algorithm(
    kind: AlgorithmKind,
    f: &ObjectiveOracle,
    sys: &IndependenceSystem,
    stream: &[ElementId],
    p: &RunParams,
    trace: bool,
) -> Result<AlgorithmRun> {
    let start_calls = f.calls();
    let mut trace_rows = Vec::new();
    let mut violations = Vec::new();
    let (solution, peak) = match make_component(kind, f, sys, p)? {
        Some(mut component) if trace => {
            let report = contract_audit(component.as_mut(), stream, sys)?;
            trace_rows = report.trace;
            violations = report.violations;
            (report.outcome.s, report.peak_stored)
        }
        Some(mut component) => {
            let outcome = run_component(component.as_mut(), stream)?;
            (outcome.s, component.peak_stored())
        }
        None => match kind {
            AlgorithmKind::Framework => {
                let iterations = default_iterations(sys.k());
                let cfg = FrameworkConfig::new(
                    p.framework_copies,
                    || Ok(Box::new(TauFreeSieve::new(f, sys)) as Box<dyn StreamingComponent>),
                    |a| repeated_greedy(f, sys, a, iterations),
                );
                let out = framework_run(&cfg, stream, sys, f)?;
                (out.best, out.peak_stored)
            }
            AlgorithmKind::WeightedGreedy => {
                let ground: ElementSet = stream.iter().copied().collect();
                (weighted_greedy(f, sys, &ground)?, ground.len())
            }
            AlgorithmKind::RepeatedGreedy => {
                let ground: ElementSet = stream.iter().copied().collect();
                let s = repeated_greedy(f, sys, &ground, default_iterations(sys.k()))?;
                (s, ground.len())
            }
            _ => unreachable!("streaming kinds always build a component"),
        },
    };
    let oracle_calls = f.calls() - start_calls;
    Ok(AlgorithmRun {
        value: f.evaluate(&solution)?,
        solution,
        oracle_calls,
        peak_elements: peak,
        trace: trace_rows,
        violations,
    })
}

/// One line of the results CSV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub algorithm: String,
    /// Value of the swept parameter; empty without a sweep.
    pub sweep: Option<f64>,
    pub seed: u64,
    pub value: f64,
    pub oracle_calls: u64,
    pub peak_elements: usize,
    pub ms: f64,
}

fn run_cell(cfg: &ExperimentConfig, sweep: Option<f64>, seed: u64) -> Result<Vec<ResultRow>> {
    let (instance, constraint) = cfg.at(sweep)?;
    let graph = build_graph(&instance, seed)?;
    let inst = build_instance(graph, cfg.objective, &constraint, seed)?;
    let params = prepare_params(&inst, cfg.framework_copies, cfg.sieve_epsilon)?;
    let mut rows = Vec::with_capacity(cfg.algorithms.len());
    for &kind in &cfg.algorithms {
        let f = inst.oracle()?;
        let start = Instant::now();
        let run = run_algorithm(kind, &f, &inst.system, &inst.stream, &params, false)?;
        let ms = if cfg.timing {
            (start.elapsed().as_secs_f64() * 1e6).round() / 1e3
        } else {
            0.0
        };
        rows.push(ResultRow {
            algorithm: kind.name().to_string(),
            sweep,
            seed,
            value: run.value,
            oracle_calls: run.oracle_calls,
            peak_elements: run.peak_elements,
            ms,
        });
    }
    Ok(rows)
}

/// Runs every (sweep value, seed, algorithm) cell, in parallel over sweep
/// values and seeds, and returns rows sorted by sweep value, algorithm name
/// and seed.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    cfg.validate()?;
    let cells: Vec<(Option<f64>, u64)> = cfg
        .sweep_values()
        .into_iter()
        .flat_map(|s| cfg.seeds.iter().map(move |&seed| (s, seed)))
        .collect();
    let nested = cells
        .par_iter()
        .map(|&(sweep, seed)| run_cell(cfg, sweep, seed))
        .collect::<Result<Vec<_>>>()?;
    let mut rows: Vec<ResultRow> = nested.into_iter().flatten().collect();
    rows.sort_by(|a, b| {
        let sa = a.sweep.unwrap_or(f64::NEG_INFINITY);
        let sb = b.sweep.unwrap_or(f64::NEG_INFINITY);
        sa.total_cmp(&sb)
            .then_with(|| a.algorithm.cmp(&b.algorithm))
            .then(a.seed.cmp(&b.seed))
    });
    if let Some(bad) = rows.iter().find(|r| !(r.value >= 0.0)) {
        return Err(Error::ContractViolation(format!("{} reported value {}", bad.algorithm, bad.value)));
    }
    Ok(rows)
}

/// Writes the rows under the header
/// `algorithm,sweep,seed,value,oracle_calls,peak_elements,ms`.
pub fn write_results_csv(rows: &[ResultRow], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    if rows.is_empty() {
        w.write_record(["algorithm", "sweep", "seed", "value", "oracle_calls", "peak_elements", "ms"])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::config::Sweep;
    use crate::experiment::config::SweepParameter;

    fn config(algorithms: Vec<AlgorithmKind>, seeds: Vec<u64>) -> ExperimentConfig {
        ExperimentConfig {
            instance: InstanceSpec::ErdosRenyi { n: 40, p: 0.1 },
            objective: ObjectiveKind::Linear,
            constraint: ConstraintConfig::NodeIndependentSet,
            algorithms,
            seeds,
            sweep: None,
            framework_copies: 2,
            sieve_epsilon: 0.1,
            timing: false,
        }
    }

    #[test]
    fn single_cell_gives_one_row() {
        let rows = run_experiment(&config(vec![AlgorithmKind::StreamingGreedy], vec![3])).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].algorithm, "streaming_greedy");
        assert_eq!(rows[0].ms, 0.0);
        assert_eq!(rows[0].oracle_calls, 0);
    }

    #[test]
    fn csv_is_reproducible_and_sorted() {
        let mut cfg = config(
            vec![AlgorithmKind::TauFreeSieve, AlgorithmKind::Framework, AlgorithmKind::StreamingGreedy],
            vec![2, 1],
        );
        cfg.sweep = Some(Sweep {
            parameter: SweepParameter::P,
            values: vec![0.2, 0.05],
        });
        let mut a = Vec::new();
        write_results_csv(&run_experiment(&cfg).unwrap(), &mut a).unwrap();
        let mut b = Vec::new();
        write_results_csv(&run_experiment(&cfg).unwrap(), &mut b).unwrap();
        assert_eq!(a, b);
        let text = String::from_utf8(a).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("algorithm,sweep,seed,value,oracle_calls,peak_elements,ms"));
        assert!(lines.next().unwrap().starts_with("framework,0.05,1,"));
        assert_eq!(text.lines().count(), 1 + 12);
    }

    #[test]
    fn knapsack_costs_are_normalized() {
        let g = gen_erdos_renyi(30, 0.2, 1).unwrap();
        let cons = ConstraintConfig::Knapsack {
            budget: 1.0,
            costs: CostRule::Degree { q: 6 },
        };
        let inst = build_instance(g.clone(), ObjectiveKind::Cut, &cons, 1).unwrap();
        let mean = inst.costs.as_ref().unwrap().iter().sum::<f64>() / 30.0;
        assert!((mean - 0.1).abs() < 1e-9);

        let cons = ConstraintConfig::PlanarityKnapsack {
            budget: 1.0,
            costs: CostRule::RandomInt,
        };
        let inst = build_instance(g, ObjectiveKind::EdgeLinear, &cons, 1).unwrap();
        let total: f64 = inst.costs.as_ref().unwrap().iter().sum();
        assert!((total - 30.0).abs() < 1e-9);
        assert_eq!(inst.stream.len(), inst.graph.edges.len());
    }

    #[test]
    fn offline_greedy_dominates_streaming_greedy_on_modular_matroid() {
        let mut cfg = config(vec![AlgorithmKind::WeightedGreedy, AlgorithmKind::StreamingGreedy], vec![1, 2, 3]);
        cfg.constraint = ConstraintConfig::Cardinality { rho: 5 };
        let rows = run_experiment(&cfg).unwrap();
        for seed in [1, 2, 3] {
            let value = |name: &str| {
                rows.iter()
                    .find(|r| r.seed == seed && r.algorithm == name)
                    .unwrap()
                    .value
            };
            assert!(value("weighted_greedy") >= value("streaming_greedy") - 1e-9);
        }
    }
}
