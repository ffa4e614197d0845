//! Directed-cut instances on which the swap-based baselines end with a
//! solution that is a vanishing fraction of `f(S ∪ S*)`.
//!
//! Both graphs have vertices `u0..u_{3 rho}`, with `u0` never streamed and
//! the rest streamed in index order. The stream is made of three blocks of
//! `rho` vertices: `V1 = u1..u_rho`, the optimum `S* = u_{rho+1}..u_{2 rho}`
//! and `V2 = u_{2 rho+1}..u_{3 rho}`. Arcs, all of which count only when
//! their tail is selected and their head is not:
//!
//! * `u_i -> u0` with weight 1 for `u_i` in `V1`,
//! * `u_j -> u_i` with weight 1 for every `u_j` in `S*` and `u_i` in `V1`,
//! * `u_m -> u0` for `u_m` in `V2`, with weight `2 + eps` in the first graph
//!   and the `m`-th term of [`w_sequence`] in the second.

use serde::{Deserialize, Serialize};

use crate::baselines::{run_component, Preemption, SwapStreaming};
use crate::constraints::{make_system, IndependenceSystem, SystemSpec};
use crate::objectives::{make_directed_cut, CutGraph};
use crate::{ElementId, ElementSet, Error, ObjectiveOracle, Result, TOLERANCE};

/// Default `eps` for the first graph.
pub const DEFAULT_EPSILON: f64 = 0.01;

/// `w_1 = 2`, `w_i = (2 rho + 1 - i + sum_{j<i} w_j) / rho`.
pub fn w_sequence(rho: usize) -> Result<Vec<f64>> {
    if rho == 0 {
        return Err(Error::InvalidInput("rho must be at least 1".into()));
    }
    let r = rho as f64;
    let mut w = Vec::with_capacity(rho);
    let mut sum = 0.0;
    for i in 1..=rho {
        let wi = if i == 1 {
            2.0
        } else {
            (2.0 * r + 1.0 - i as f64 + sum) / r
        };
        sum += wi;
        w.push(wi);
    }
    Ok(w)
}

/// `w_i = 2 + sum_{j=1}^{i-1} C(i-1, j) rho^-j`, for `i >= 1`.
pub fn w_closed_form(rho: usize, i: usize) -> f64 {
    let r = rho as f64;
    let mut total = 2.0;
    let mut binom = 1.0;
    for j in 1..i {
        binom *= (i - j) as f64 / j as f64;
        total += binom * r.powi(-(j as i32));
    }
    total
}

/// `sum_i w_i = 2 rho + rho ((1 + 1/rho)^rho - 2)`.
pub fn w_sum_closed_form(rho: usize) -> f64 {
    let r = rho as f64;
    2.0 * r + r * ((1.0 + 1.0 / r).powi(rho as i32) - 2.0)
}

/// Which of the two graphs to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// Heavy arcs of weight `2 + eps`; defeats [`Preemption`].
    G1,
    /// Heavy arcs weighted by [`w_sequence`]; defeats [`SwapStreaming`].
    G2,
}

#[derive(Clone, Debug)]
pub struct CounterInstance {
    pub graph: CutGraph,
    /// `u1..u_{3 rho}`.
    pub stream: Vec<ElementId>,
    pub rho: usize,
    /// Set for the first graph only.
    pub epsilon: Option<f64>,
}

impl CounterInstance {
    pub fn v1(&self) -> ElementSet {
        (1..=self.rho).collect()
    }

    pub fn s_star(&self) -> ElementSet {
        (self.rho + 1..=2 * self.rho).collect()
    }

    pub fn v2(&self) -> ElementSet {
        (2 * self.rho + 1..=3 * self.rho).collect()
    }

    pub fn oracle(&self) -> ObjectiveOracle {
        make_directed_cut(self.graph.clone())
    }

    /// Cardinality `rho` over all `3 rho + 1` vertices.
    pub fn system(&self) -> Result<IndependenceSystem> {
        make_system(SystemSpec::Cardinality {
            n: 3 * self.rho + 1,
            rho: self.rho,
        })
    }
}

fn build(rho: usize, heavy: &[f64], epsilon: Option<f64>) -> Result<CounterInstance> {
    let mut edges = Vec::with_capacity(rho * (rho + 2));
    for i in 1..=rho {
        edges.push((i, 0, 1.0));
    }
    for j in rho + 1..=2 * rho {
        for i in 1..=rho {
            edges.push((j, i, 1.0));
        }
    }
    for (m, &w) in heavy.iter().enumerate() {
        edges.push((2 * rho + 1 + m, 0, w));
    }
    Ok(CounterInstance {
        graph: CutGraph::new(3 * rho + 1, edges)?,
        stream: (1..=3 * rho).collect(),
        rho,
        epsilon,
    })
}

pub fn build_g1(rho: usize, epsilon: f64) -> Result<CounterInstance> {
    if rho == 0 {
        return Err(Error::InvalidInput("rho must be at least 1".into()));
    }
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::InvalidInput(format!("epsilon must be positive, got {epsilon}")));
    }
    build(rho, &vec![2.0 + epsilon; rho], Some(epsilon))
}

pub fn build_g2(rho: usize) -> Result<CounterInstance> {
    build(rho, &w_sequence(rho)?, None)
}

/// Outcome of replaying a baseline on its bad instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleReport {
    pub rho: usize,
    pub epsilon: Option<f64>,
    /// Value of the baseline's final solution.
    #[serde(rename = "f_S")]
    pub f_s: f64,
    /// `f(S*)`.
    pub f_opt: f64,
    /// `f(S ∪ S*)`.
    pub f_union: f64,
    /// Upper bound on `f(S)` claimed for this instance: the ratio times
    /// `f(S ∪ S*)`.
    pub bound: f64,
    /// Whether every expected identity and the bound hold.
    pub holds: bool,
    pub solution: Vec<ElementId>,
    /// The identities that failed, if any.
    pub failures: Vec<String>,
}

struct Replay {
    s: ElementSet,
    f_s: f64,
    f_opt: f64,
    f_union: f64,
}

fn replay(inst: &CounterInstance, family: Family) -> Result<Replay> {
    let f = inst.oracle();
    let sys = inst.system()?;
    let outcome = match family {
        Family::G1 => run_component(&mut Preemption::new(&f, &sys)?, &inst.stream)?,
        Family::G2 => run_component(&mut SwapStreaming::new(&f, &sys)?, &inst.stream)?,
    };
    let s = outcome.s;
    Ok(Replay {
        f_s: f.evaluate(&s)?,
        f_opt: f.evaluate(&inst.s_star())?,
        f_union: f.evaluate(&s.union(&inst.s_star()))?,
        s,
    })
}

/// Runs [`Preemption`] on the first graph and checks that it ends with
/// `S = V2`, `f(S) = (2 + eps) rho`, `S ∩ S* = ∅`, and
/// `f(S) <= ((2 + eps) / rho) f(S ∪ S*)`.
pub fn verify_preemption_instance(rho: usize, epsilon: f64) -> Result<CounterexampleReport> {
    let inst = build_g1(rho, epsilon)?;
    let run = replay(&inst, Family::G1)?;
    let r = rho as f64;
    let expected = (2.0 + epsilon) * r;
    let bound = (2.0 + epsilon) / r * run.f_union;
    let mut failures = Vec::new();
    if run.s != inst.v2() {
        failures.push(format!("S = {:?}, expected V2", run.s.sorted()));
    }
    if (run.f_s - expected).abs() > TOLERANCE {
        failures.push(format!("f(S) = {}, expected {expected}", run.f_s));
    }
    if !run.s.is_disjoint(&inst.s_star()) {
        failures.push("S meets S*".into());
    }
    if run.f_s > bound + TOLERANCE {
        failures.push(format!("f(S) = {} exceeds {bound}", run.f_s));
    }
    Ok(CounterexampleReport {
        rho,
        epsilon: Some(epsilon),
        f_s: run.f_s,
        f_opt: run.f_opt,
        f_union: run.f_union,
        bound,
        holds: failures.is_empty(),
        solution: run.s.sorted(),
        failures,
    })
}

/// Runs [`SwapStreaming`] on the second graph and checks that it ends with
/// `S = V2`, `f(S) = sum_i w_i`, `f(S) <= e rho`, `f(S ∪ S*) >= rho^2` and
/// `f(S) <= (e / rho) f(S ∪ S*)`. Needs `rho >= 4`.
pub fn verify_swap_instance(rho: usize) -> Result<CounterexampleReport> {
    if rho < 4 {
        return Err(Error::Precondition(format!("the second graph needs rho >= 4, got {rho}")));
    }
    let inst = build_g2(rho)?;
    let run = replay(&inst, Family::G2)?;
    let r = rho as f64;
    let e = std::f64::consts::E;
    let expected = w_sum_closed_form(rho);
    let bound = e / r * run.f_union;
    let mut failures = Vec::new();
    if run.s != inst.v2() {
        failures.push(format!("S = {:?}, expected V2", run.s.sorted()));
    }
    if (run.f_s - expected).abs() > TOLERANCE {
        failures.push(format!("f(S) = {}, expected {expected}", run.f_s));
    }
    if run.f_s > e * r + TOLERANCE {
        failures.push(format!("f(S) = {} exceeds e rho", run.f_s));
    }
    if run.f_union < r * r - TOLERANCE {
        failures.push(format!("f(S ∪ S*) = {} is below rho^2", run.f_union));
    }
    if run.f_s > bound + TOLERANCE {
        failures.push(format!("f(S) = {} exceeds {bound}", run.f_s));
    }
    Ok(CounterexampleReport {
        rho,
        epsilon: None,
        f_s: run.f_s,
        f_opt: run.f_opt,
        f_union: run.f_union,
        bound,
        holds: failures.is_empty(),
        solution: run.s.sorted(),
        failures,
    })
}
