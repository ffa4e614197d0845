//! Bucket state shared by the threshold sieves.

use std::collections::HashMap;

use super::floor_log2;
use crate::constraints::IndependenceSystem;
use crate::{ElementId, ElementSet, ObjectiveOracle, Result, TOLERANCE};

/// How an arriving element was handled.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Decision {
    /// Marginal gain with respect to the union of all buckets.
    pub m: f64,
    /// `floor(log2(tau / m))`, or `None` when `m` is not positive.
    pub index: Option<i64>,
    /// The bucket the element went into.
    pub bucket: Option<usize>,
}

#[derive(Clone, Debug)]
pub(crate) struct BucketCore {
    pub tau: f64,
    pub buckets: Vec<ElementSet>,
    pub union: ElementSet,
    pub m: HashMap<ElementId, f64>,
}

impl BucketCore {
    pub fn new(tau: f64, levels: usize) -> Self {
        Self {
            tau,
            buckets: vec![ElementSet::new(); levels],
            union: ElementSet::new(),
            m: HashMap::new(),
        }
    }

    /// Makes buckets `0..=ell` exist.
    pub fn grow(&mut self, ell: i64) {
        let want = (ell + 1).max(0) as usize;
        if self.buckets.len() < want {
            self.buckets.resize(want, ElementSet::new());
        }
    }

    /// Applies the bucket rule with buckets `0..=ell` active.
    pub fn consider(
        &mut self,
        f: &ObjectiveOracle,
        sys: &IndependenceSystem,
        u: ElementId,
        ell: i64,
    ) -> Result<Decision> {
        let m = f.marginal(u, &self.union)?;
        let index = (m > TOLERANCE).then(|| floor_log2(self.tau / m));
        let mut bucket = None;
        if let Some(i) = index {
            if 0 <= i && i <= ell {
                let i = i as usize;
                if sys.can_add(&self.buckets[i], u)? {
                    self.buckets[i].insert(u);
                    self.union.insert(u);
                    self.m.insert(u, m);
                    bucket = Some(i);
                }
            }
        }
        Ok(Decision { m, index, bucket })
    }

    /// `T_j` for `j in 0..h`: greedy over buckets `j, j+h, j+2h, ...`
    /// in ascending order, each bucket in insertion order.
    pub fn candidates(&self, sys: &IndependenceSystem, h: usize) -> Result<Vec<ElementSet>> {
        let mut out = Vec::with_capacity(h);
        for j in 0..h {
            let mut t = ElementSet::new();
            for bucket in self.buckets.iter().skip(j).step_by(h) {
                for u in bucket.iter() {
                    if sys.can_add(&t, u)? {
                        t.insert(u);
                    }
                }
            }
            out.push(t);
        }
        Ok(out)
    }

    pub fn bucket_sizes(&self) -> usize {
        self.buckets.iter().map(ElementSet::len).sum()
    }
}

/// Index and value of the best candidate; the lowest index wins ties.
pub(crate) fn best_of(f: &ObjectiveOracle, candidates: &[ElementSet]) -> Result<(usize, f64)> {
    let mut best = (0, f64::NEG_INFINITY);
    for (j, t) in candidates.iter().enumerate() {
        let v = f.evaluate(t)?;
        if v > best.1 {
            best = (j, v);
        }
    }
    if candidates.is_empty() {
        best.1 = f.evaluate(&ElementSet::new())?;
    }
    Ok(best)
}
