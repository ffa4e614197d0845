use super::{StreamOutcome, StreamingComponent};
use crate::constraints::IndependenceSystem;
use crate::{ElementId, ElementSet, Error, ObjectiveOracle, Result};

type Factory<'a> = dyn Fn() -> Result<Box<dyn StreamingComponent + 'a>> + 'a;
type Offline<'a> = dyn Fn(&ElementSet) -> Result<ElementSet> + 'a;

/// `r` chained copies of a streaming component plus the offline algorithm
/// applied to each copy's `A`.
pub struct FrameworkConfig<'a> {
    pub r: usize,
    pub factory: Box<Factory<'a>>,
    pub offline: Box<Offline<'a>>,
}

impl<'a> FrameworkConfig<'a> {
    pub fn new(
        r: usize,
        factory: impl Fn() -> Result<Box<dyn StreamingComponent + 'a>> + 'a,
        offline: impl Fn(&ElementSet) -> Result<ElementSet> + 'a,
    ) -> Self {
        Self {
            r,
            factory: Box::new(factory),
            offline: Box::new(offline),
        }
    }
}

/// What one copy produced.
#[derive(Clone, Debug, PartialEq)]
pub struct CopyOutcome {
    pub outcome: StreamOutcome,
    pub s_value: f64,
    /// The offline algorithm's answer on `A`.
    pub offline: ElementSet,
    pub offline_value: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FrameworkOutcome {
    pub best: ElementSet,
    pub value: f64,
    pub copies: Vec<CopyOutcome>,
    /// Largest total number of elements stored across all copies.
    pub peak_stored: usize,
}

/// Streams `stream` through `r` chained copies: each element is offered to
/// copy 1, whatever copy `i` drops is offered to copy `i + 1`, and at the
/// end each copy's leftover `D` is handed to the next copy's final batch.
/// Returns the best set among every copy's `S` and the offline algorithm's
/// answer on every copy's `A`. Ties go to the lower copy, and `S` before
/// the offline answer.
pub fn framework_run(
    cfg: &FrameworkConfig<'_>,
    stream: &[ElementId],
    sys: &IndependenceSystem,
    f: &ObjectiveOracle,
) -> Result<FrameworkOutcome> {
    if cfg.r == 0 {
        return Err(Error::InvalidConfig("the framework needs at least one copy".into()));
    }
    let mut copies = (0..cfg.r)
        .map(|_| (cfg.factory)())
        .collect::<Result<Vec<_>>>()?;
    let mut peak = 0;
    for &u in stream {
        let mut carried = vec![u];
        for copy in copies.iter_mut() {
            if carried.is_empty() {
                break;
            }
            carried = copy.push(&carried)?;
        }
        peak = peak.max(copies.iter().map(|c| c.stored()).sum());
    }

    let mut carried: Vec<ElementId> = Vec::new();
    let mut results = Vec::with_capacity(cfg.r);
    for copy in copies.iter_mut() {
        let outcome = copy.finish(&carried)?;
        outcome.validate(sys)?;
        let s_value = f.evaluate(&outcome.s)?;
        let offline = (cfg.offline)(&outcome.a)?;
        if !offline.is_subset(&outcome.a) || !sys.is_independent(&offline)? {
            return Err(Error::ContractViolation(
                "offline answer is not an independent subset of A".into(),
            ));
        }
        let offline_value = f.evaluate(&offline)?;
        carried = outcome.d.to_vec();
        results.push(CopyOutcome {
            outcome,
            s_value,
            offline,
            offline_value,
        });
    }
    peak = peak.max(copies.iter().map(|c| c.peak_stored()).max().unwrap_or(0));

    let mut best = (ElementSet::new(), f64::NEG_INFINITY);
    for copy in &results {
        for (set, value) in [(&copy.outcome.s, copy.s_value), (&copy.offline, copy.offline_value)] {
            if value > best.1 {
                best = (set.clone(), value);
            }
        }
    }
    Ok(FrameworkOutcome {
        best: best.0,
        value: best.1,
        copies: results,
        peak_stored: peak,
    })
}
