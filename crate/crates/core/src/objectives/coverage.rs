use std::collections::BTreeMap;

use crate::{ElementId, ElementSet, Error, Objective, ObjectiveOracle, Result};

/// Per-element keyword sets and non-negative values.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct KeywordTable {
    entries: Vec<(Vec<String>, f64)>,
}

impl KeywordTable {
    pub fn new(entries: Vec<(Vec<String>, f64)>) -> Result<Self> {
        for (id, (_, value)) in entries.iter().enumerate() {
            if !value.is_finite() || *value < 0.0 {
                return Err(Error::InvalidWeight { id, value: *value });
            }
        }
        Ok(Self { entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn words(&self, u: ElementId) -> &[String] {
        &self.entries[u].0
    }

    pub fn value(&self, u: ElementId) -> f64 {
        self.entries[u].1
    }
}

/// `f(S) = sum over words w of sqrt(sum_{u in S, w in W_u} val_u)`.
#[derive(Clone, Debug)]
pub struct SqrtCoverage {
    // Word indices per element, deduplicated.
    words: Vec<Vec<usize>>,
    values: Vec<f64>,
    n_words: usize,
}

impl SqrtCoverage {
    pub fn new(table: &KeywordTable) -> Self {
        let mut vocab: BTreeMap<&str, usize> = BTreeMap::new();
        let mut words = Vec::with_capacity(table.len());
        for u in 0..table.len() {
            let mut ws: Vec<usize> = table
                .words(u)
                .iter()
                .map(|w| {
                    let next = vocab.len();
                    *vocab.entry(w.as_str()).or_insert(next)
                })
                .collect();
            ws.sort_unstable();
            ws.dedup();
            words.push(ws);
        }
        Self {
            words,
            values: (0..table.len()).map(|u| table.value(u)).collect(),
            n_words: vocab.len(),
        }
    }

    fn scores(&self, set: &ElementSet) -> Vec<f64> {
        let mut score = vec![0.0; self.n_words];
        for u in set.iter() {
            for &w in &self.words[u] {
                score[w] += self.values[u];
            }
        }
        score
    }
}

impl Objective for SqrtCoverage {
    fn ground_size(&self) -> usize {
        self.words.len()
    }

    fn is_monotone(&self) -> bool {
        true
    }

    fn value(&self, set: &ElementSet) -> Result<f64> {
        Ok(self.scores(set).iter().map(|s| s.sqrt()).sum())
    }

    fn gain(&self, u: ElementId, set: &ElementSet) -> Result<f64> {
        let score = self.scores(set);
        Ok(self.words[u]
            .iter()
            .map(|&w| (score[w] + self.values[u]).sqrt() - score[w].sqrt())
            .sum())
    }

    fn name(&self) -> &str {
        "sqrt-coverage"
    }
}

pub fn make_sqrt_coverage(table: &KeywordTable) -> ObjectiveOracle {
    ObjectiveOracle::new(SqrtCoverage::new(table))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> KeywordTable {
        KeywordTable::new(vec![
            (vec!["w".into()], 4.0),
            (vec!["w".into()], 9.0),
            (vec!["x".into(), "w".into()], 1.0),
        ])
        .unwrap()
    }

    #[test]
    fn sqrt_coverage_examples() {
        let f = make_sqrt_coverage(&table());
        assert_eq!(f.evaluate(&ElementSet::new()).unwrap(), 0.0);
        assert_eq!(f.evaluate(&[0].into()).unwrap(), 2.0);
        assert!((f.evaluate(&[0, 1].into()).unwrap() - 13f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn gain_matches_difference() {
        let f = SqrtCoverage::new(&table());
        let s: ElementSet = [0].into();
        let direct = f.value(&s.with(2)).unwrap() - f.value(&s).unwrap();
        assert!((f.gain(2, &s).unwrap() - direct).abs() < 1e-12);
    }

    #[test]
    fn negative_value_rejected() {
        assert!(KeywordTable::new(vec![(vec![], -1.0)]).is_err());
    }
}
