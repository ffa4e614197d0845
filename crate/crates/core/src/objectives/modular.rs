use crate::{ElementId, ElementSet, Error, Objective, ObjectiveOracle, Result};

/// `f(S) = sum of w_u over u in S`.
#[derive(Clone, Debug)]
pub struct Modular {
    weights: Vec<f64>,
}

impl Modular {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        for (id, &value) in weights.iter().enumerate() {
            if !value.is_finite() || value < 0.0 {
                return Err(Error::InvalidWeight { id, value });
            }
        }
        Ok(Self { weights })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

impl Objective for Modular {
    fn ground_size(&self) -> usize {
        self.weights.len()
    }

    fn is_monotone(&self) -> bool {
        true
    }

    fn value(&self, set: &ElementSet) -> Result<f64> {
        Ok(set.iter().map(|u| self.weights[u]).sum())
    }

    fn gain(&self, u: ElementId, _set: &ElementSet) -> Result<f64> {
        Ok(self.weights[u])
    }

    fn name(&self) -> &str {
        "linear"
    }
}

pub fn make_modular(weights: &[f64]) -> Result<ObjectiveOracle> {
    Ok(ObjectiveOracle::new(Modular::new(weights.to_vec())?))
}
