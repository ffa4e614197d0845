use std::collections::HashMap;
use std::io::Write;

use serde::Serialize;

use super::{StreamOutcome, StreamingComponent, TraceKind};
use crate::constraints::IndependenceSystem;
use crate::{ElementId, Result};

/// One line of the trace CSV.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TraceRow {
    pub step: usize,
    pub event: TraceKind,
    pub element: ElementId,
    pub bucket: Option<usize>,
    pub value: f64,
}

/// Result of replaying a stream through a component.
#[derive(Clone, Debug, PartialEq)]
pub struct AuditReport {
    pub outcome: StreamOutcome,
    /// Contract violations found; empty when the component conforms.
    pub violations: Vec<String>,
    /// Stored elements after each step.
    pub memory: Vec<usize>,
    /// Peak stored elements, including the end-of-stream phase.
    pub peak_stored: usize,
    pub trace: Vec<TraceRow>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Pushes `stream` one element at a time, then finishes with an empty
/// batch, and checks the streaming contract: every element is either
/// evicted exactly once or ends in `A ∪ D` (never both), `S ⊆ A`,
/// `A ∩ D = ∅`, and `S` is independent.
///
/// Violations are collected in the report; errors from the component or
/// the oracles are propagated.
pub fn contract_audit(
    component: &mut dyn StreamingComponent,
    stream: &[ElementId],
    sys: &IndependenceSystem,
) -> Result<AuditReport> {
    component.enable_trace();
    let mut violations = Vec::new();
    let mut evictions: HashMap<ElementId, usize> = HashMap::new();
    let mut memory = Vec::with_capacity(stream.len());
    let mut trace = Vec::new();
    let mut pushed = std::collections::HashSet::new();

    for (step, &u) in stream.iter().enumerate() {
        if !pushed.insert(u) {
            violations.push(format!("element {u} appears twice in the stream"));
        }
        let evicted = component.push(&[u])?;
        for ev in component.take_events() {
            trace.push(TraceRow {
                step,
                event: ev.kind,
                element: ev.element,
                bucket: ev.bucket,
                value: ev.value,
            });
        }
        for x in evicted {
            if !pushed.contains(&x) {
                violations.push(format!("step {step}: evicted {x}, which was never pushed"));
            }
            *evictions.entry(x).or_default() += 1;
            trace.push(TraceRow {
                step,
                event: TraceKind::Evict,
                element: x,
                bucket: None,
                value: 0.0,
            });
        }
        memory.push(component.stored());
    }

    let outcome = component.finish(&[])?;
    if let Err(e) = outcome.validate(sys) {
        violations.push(e.to_string());
    }
    for (&x, &count) in &evictions {
        if count > 1 {
            violations.push(format!("element {x} evicted {count} times"));
        }
        if outcome.a.contains(x) || outcome.d.contains(x) {
            violations.push(format!("element {x} was evicted but is still held at the end"));
        }
    }
    for &u in &pushed {
        let held = outcome.a.contains(u) || outcome.d.contains(u);
        if !held && !evictions.contains_key(&u) {
            violations.push(format!("element {u} was neither evicted nor kept"));
        }
    }
    violations.sort();

    Ok(AuditReport {
        peak_stored: component.peak_stored().max(memory.iter().copied().max().unwrap_or(0)),
        outcome,
        violations,
        memory,
        trace,
    })
}

/// Writes `step,event,element,bucket,value` rows.
pub fn write_trace_csv(rows: &[TraceRow], out: impl Write) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(["step", "event", "element", "bucket", "value"])?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}
