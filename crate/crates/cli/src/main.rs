use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use semistream::counterexamples::{verify_swap_instance, verify_preemption_instance, DEFAULT_EPSILON};
use semistream::experiment::{
    build_instance, gen_erdos_renyi, gen_watts_strogatz, load_edge_list, prepare_params, run_algorithm,
    run_experiment, write_edge_list, write_results_csv, AlgorithmKind, ConstraintConfig, ExperimentConfig,
    ObjectiveKind,
};
use semistream::streaming::write_trace_csv;

#[derive(Parser)]
#[command(name = "semistream", version, about = "Streaming submodular maximization under independence systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Experiment harness.
    Bench {
        #[command(subcommand)]
        command: BenchCommand,
    },
    /// Run one algorithm over a graph read from an edge list.
    RunStream {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum)]
        objective: ObjectiveArg,
        /// JSON file holding a constraint object, e.g. {"type": "cardinality", "rho": 5}.
        #[arg(long)]
        constraint: PathBuf,
        #[arg(long)]
        algo: String,
        /// Seeds weights, costs and the stream order.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        copies: usize,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        /// Write the per-element event trace as CSV.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Replay a swap baseline on its bad instance and report the ratio.
    Counterexample {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        rho: usize,
        /// Only used by g1.
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum BenchCommand {
    /// Run an experiment config and write one CSV row per cell.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a random graph and write it as a tab-separated edge list.
    GenGraph {
        #[arg(long, value_enum)]
        model: ModelArg,
        #[arg(long)]
        n: usize,
        /// Edge probability (er).
        #[arg(long)]
        p: Option<f64>,
        /// Ring degree (ws).
        #[arg(long)]
        kring: Option<usize>,
        /// Rewiring probability (ws).
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Er,
    Ws,
}

#[derive(Clone, Copy, ValueEnum)]
enum ObjectiveArg {
    Cut,
    Linear,
    EdgeLinear,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    G1,
    G2,
}

/// Opens `path` for writing, or stdout when it is absent or `-`.
fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    match path {
        Some(p) if p != Path::new("-") => {
            let file = File::create(p).with_context(|| format!("creating {}", p.display()))?;
            Ok(Box::new(BufWriter::new(file)))
        }
        _ => Ok(Box::new(BufWriter::new(io::stdout()))),
    }
}

fn read_to_string(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn bench_run(config: &Path, out: Option<&Path>) -> Result<()> {
    let cfg = ExperimentConfig::from_json(&read_to_string(config)?)?;
    let rows = run_experiment(&cfg)?;
    let mut w = output(out)?;
    write_results_csv(&rows, &mut w)?;
    w.flush()?;
    Ok(())
}

fn gen_graph(
    model: ModelArg,
    n: usize,
    p: Option<f64>,
    kring: Option<usize>,
    beta: Option<f64>,
    seed: u64,
    out: Option<&Path>,
) -> Result<()> {
    let graph = match model {
        ModelArg::Er => {
            let Some(p) = p else { bail!("--model er needs --p") };
            gen_erdos_renyi(n, p, seed)?
        }
        ModelArg::Ws => {
            let (Some(k), Some(b)) = (kring, beta) else {
                bail!("--model ws needs --kring and --beta")
            };
            gen_watts_strogatz(n, k, b, seed)?
        }
    };
    let mut w = output(out)?;
    write_edge_list(&graph, &mut w)?;
    w.flush()?;
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn run_stream(
    graph: &Path,
    objective: ObjectiveArg,
    constraint: &Path,
    algo: &str,
    seed: u64,
    copies: usize,
    epsilon: f64,
    trace: Option<&Path>,
) -> Result<()> {
    let objective = match objective {
        ObjectiveArg::Cut => ObjectiveKind::Cut,
        ObjectiveArg::Linear => ObjectiveKind::Linear,
        ObjectiveArg::EdgeLinear => ObjectiveKind::EdgeLinear,
    };
    let constraint: ConstraintConfig = serde_json::from_str(&read_to_string(constraint)?)
        .with_context(|| format!("parsing constraint {}", constraint.display()))?;
    if constraint.needs_edges() != objective.elements_are_edges() {
        bail!("the constraint and the objective disagree on whether elements are vertices or edges");
    }
    let kind = AlgorithmKind::parse(algo)?;
    let inst = build_instance(load_edge_list(graph)?, objective, &constraint, seed)?;
    let f = inst.oracle()?;
    let params = prepare_params(&inst, copies, epsilon)?;
    let run = run_algorithm(kind, &f, &inst.system, &inst.stream, &params, trace.is_some())?;
    if let Some(path) = trace {
        let mut w = output(Some(path))?;
        write_trace_csv(&run.trace, &mut w)?;
        w.flush()?;
    }
    let summary = json!({
        "algorithm": kind.name(),
        "value": run.value,
        "oracle_calls": run.oracle_calls,
        "peak_elements": run.peak_elements,
        "solution": run.solution.sorted(),
        "violations": run.violations,
    });
    println!("{}", serde_json::to_string_pretty(&summary)?);
    if !run.violations.is_empty() {
        bail!("{} contract violations", run.violations.len());
    }
    Ok(())
}

fn counterexample(family: FamilyArg, rho: usize, epsilon: Option<f64>, out: Option<&Path>) -> Result<()> {
    let report = match family {
        FamilyArg::G1 => verify_preemption_instance(rho, epsilon.unwrap_or(DEFAULT_EPSILON))?,
        FamilyArg::G2 => {
            if epsilon.is_some() {
                bail!("--epsilon only applies to g1");
            }
            verify_swap_instance(rho)?
        }
    };
    let mut w = output(out)?;
    serde_json::to_writer_pretty(&mut w, &report)?;
    writeln!(w)?;
    w.flush()?;
    if !report.holds {
        bail!("the instance did not behave as expected: {}", report.failures.join("; "));
    }
    Ok(())
}

fn main() -> ExitCode {
    match dispatch(Cli::parse().command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Bench { command } => match command {
            BenchCommand::Run { config, out } => bench_run(&config, out.as_deref()),
            BenchCommand::GenGraph {
                model,
                n,
                p,
                kring,
                beta,
                seed,
                out,
            } => gen_graph(model, n, p, kring, beta, seed, out.as_deref()),
        },
        Command::RunStream {
            graph,
            objective,
            constraint,
            algo,
            seed,
            copies,
            epsilon,
            trace,
        } => run_stream(
            &graph,
            objective,
            &constraint,
            &algo,
            seed,
            copies,
            epsilon,
            trace.as_deref(),
        ),
        Command::Counterexample {
            family,
            rho,
            epsilon,
            out,
        } => counterexample(family, rho, epsilon, out.as_deref()),
    }
}
