use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Where the graph comes from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InstanceSpec {
    ErdosRenyi { n: usize, p: f64 },
    WattsStrogatz { n: usize, k_ring: usize, beta: f64 },
    /// A `u<TAB>v[<TAB>weight]` file; the seed only affects the stream order.
    EdgeList { path: PathBuf },
}

/// Which objective to maximize. `cut` and `linear` pick vertices;
/// `edge_linear` picks edges and counts them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObjectiveKind {
    /// Cut of the graph with both arcs of every edge.
    Cut,
    /// Vertex weights drawn uniformly from `(0, 1]`.
    Linear,
    /// One unit per selected edge.
    EdgeLinear,
}

impl ObjectiveKind {
    pub fn elements_are_edges(self) -> bool {
        matches!(self, Self::EdgeLinear)
    }
}

/// How knapsack costs are drawn before normalization.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case", deny_unknown_fields)]
pub enum CostRule {
    /// A uniform integer from `1..=5`.
    RandomInt,
    /// `max(1, d - q)`, where `d` is the degree of the vertex, or of the
    /// first endpoint of the edge.
    Degree {
        #[serde(default = "default_q")]
        q: usize,
    },
}

fn default_q() -> usize {
    6
}

/// Constraint families. Knapsack costs on vertices are scaled to mean
/// `1/10`; on edges they are scaled so they sum to the number of vertices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ConstraintConfig {
    NodeIndependentSet,
    Cardinality { rho: usize },
    Knapsack { budget: f64, costs: CostRule },
    /// Edge sets forming a planar subgraph.
    Planarity,
    /// Planar edge sets that also fit a knapsack.
    PlanarityKnapsack { budget: f64, costs: CostRule },
}

impl ConstraintConfig {
    pub fn needs_edges(&self) -> bool {
        matches!(self, Self::Planarity | Self::PlanarityKnapsack { .. })
    }
}

/// Parameter varied across the sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    N,
    P,
    KRing,
    Beta,
    Rho,
    Budget,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub parameter: SweepParameter,
    pub values: Vec<f64>,
}

/// Algorithms the runner knows. Sieves that need `tau` get it from the
/// largest feasible singleton value `M`, computed before the run and not
/// counted as oracle calls.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlgorithmKind {
    StreamingGreedy,
    SieveStreaming,
    Preemption,
    SwapStreaming,
    /// Known `tau = 2M` and `rho`.
    ThresholdSieve,
    /// Known `tau = 2^ceil(log2 M)`.
    AdaptiveSieve,
    TauFreeSieve,
    /// Chained copies of the tau-free sieve with repeated greedy offline.
    Framework,
    WeightedGreedy,
    RepeatedGreedy,
}

impl AlgorithmKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::StreamingGreedy => "streaming_greedy",
            Self::SieveStreaming => "sieve_streaming",
            Self::Preemption => "preemption",
            Self::SwapStreaming => "swap_streaming",
            Self::ThresholdSieve => "threshold_sieve",
            Self::AdaptiveSieve => "adaptive_sieve",
            Self::TauFreeSieve => "tau_free_sieve",
            Self::Framework => "framework",
            Self::WeightedGreedy => "weighted_greedy",
            Self::RepeatedGreedy => "repeated_greedy",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        serde_json::from_value(serde_json::Value::String(name.to_string()))
            .map_err(|_| Error::InvalidConfig(format!("unknown algorithm {name:?}")))
    }
}

fn default_copies() -> usize {
    4
}

fn default_epsilon() -> f64 {
    crate::baselines::DEFAULT_SIEVE_EPSILON
}

fn default_timing() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub instance: InstanceSpec,
    pub objective: ObjectiveKind,
    pub constraint: ConstraintConfig,
    pub algorithms: Vec<AlgorithmKind>,
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub sweep: Option<Sweep>,
    /// Copies chained by the framework.
    #[serde(default = "default_copies")]
    pub framework_copies: usize,
    /// Grid ratio of sieve-streaming.
    #[serde(default = "default_epsilon")]
    pub sieve_epsilon: f64,
    /// Record wall time; with `false` the `ms` column is 0 and the CSV is
    /// reproducible byte for byte.
    #[serde(default = "default_timing")]
    pub timing: bool,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.algorithms.is_empty() {
            return Err(Error::InvalidConfig("at least one algorithm is required".into()));
        }
        if self.seeds.is_empty() {
            return Err(Error::InvalidConfig("at least one seed is required".into()));
        }
        if self.framework_copies == 0 {
            return Err(Error::InvalidConfig("framework_copies must be at least 1".into()));
        }
        if self.objective.elements_are_edges() != self.constraint.needs_edges() {
            return Err(Error::InvalidConfig(
                "edge_linear goes with the planarity constraints, and only with them".into(),
            ));
        }
        if let Some(sweep) = &self.sweep {
            if sweep.values.is_empty() {
                return Err(Error::InvalidConfig("sweep needs at least one value".into()));
            }
            for &v in &sweep.values {
                self.at(Some(v))?;
            }
        }
        Ok(())
    }

    /// The instance and constraint with the sweep parameter set to `value`.
    pub fn at(&self, value: Option<f64>) -> Result<(InstanceSpec, ConstraintConfig)> {
        let mut instance = self.instance.clone();
        let mut constraint = self.constraint.clone();
        let (Some(sweep), Some(v)) = (&self.sweep, value) else {
            return Ok((instance, constraint));
        };
        let as_count = |v: f64| -> Result<usize> {
            if v >= 0.0 && v.fract() == 0.0 {
                Ok(v as usize)
            } else {
                Err(Error::InvalidConfig(format!("sweep value {v} must be a non-negative integer")))
            }
        };
        let mismatch = || Error::InvalidConfig(format!("{:?} cannot be swept for this config", sweep.parameter));
        match (sweep.parameter, &mut instance, &mut constraint) {
            (SweepParameter::N, InstanceSpec::ErdosRenyi { n, .. }, _)
            | (SweepParameter::N, InstanceSpec::WattsStrogatz { n, .. }, _) => *n = as_count(v)?,
            (SweepParameter::P, InstanceSpec::ErdosRenyi { p, .. }, _) => *p = v,
            (SweepParameter::KRing, InstanceSpec::WattsStrogatz { k_ring, .. }, _) => *k_ring = as_count(v)?,
            (SweepParameter::Beta, InstanceSpec::WattsStrogatz { beta, .. }, _) => *beta = v,
            (SweepParameter::Rho, _, ConstraintConfig::Cardinality { rho }) => *rho = as_count(v)?,
            (SweepParameter::Budget, _, ConstraintConfig::Knapsack { budget, .. })
            | (SweepParameter::Budget, _, ConstraintConfig::PlanarityKnapsack { budget, .. }) => *budget = v,
            _ => return Err(mismatch()),
        }
        Ok((instance, constraint))
    }

    /// The sweep values, or a single `None` without a sweep.
    pub fn sweep_values(&self) -> Vec<Option<f64>> {
        match &self.sweep {
            Some(s) => s.values.iter().map(|&v| Some(v)).collect(),
            None => vec![None],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"{
        "instance": {"kind": "erdos_renyi", "n": 50, "p": 0.1},
        "objective": "cut",
        "constraint": {"type": "node_independent_set"},
        "algorithms": ["streaming_greedy", "framework"],
        "seeds": [1, 2],
        "sweep": {"parameter": "p", "values": [0.05, 0.2]}
    }"#;

    #[test]
    fn parses_and_applies_sweep() {
        let cfg = ExperimentConfig::from_json(SAMPLE).unwrap();
        assert_eq!(cfg.framework_copies, 4);
        assert!(cfg.timing);
        let (inst, _) = cfg.at(Some(0.2)).unwrap();
        assert_eq!(inst, InstanceSpec::ErdosRenyi { n: 50, p: 0.2 });
        assert_eq!(AlgorithmKind::parse("tau_free_sieve").unwrap(), AlgorithmKind::TauFreeSieve);
        assert!(AlgorithmKind::parse("nope").is_err());
    }

    #[test]
    fn rejects_bad_configs() {
        let bad_sweep = SAMPLE.replace("\"p\", \"values\"", "\"beta\", \"values\"");
        assert!(ExperimentConfig::from_json(&bad_sweep).is_err());
        let no_algos = SAMPLE.replace("\"streaming_greedy\", \"framework\"", "");
        assert!(ExperimentConfig::from_json(&no_algos).is_err());
        let mixed = SAMPLE.replace("\"cut\"", "\"edge_linear\"");
        assert!(ExperimentConfig::from_json(&mixed).is_err());
        assert!(ExperimentConfig::from_json("{}").is_err());
    }
}
