//! Offline algorithms: greedy variants, deterministic double greedy,
//! repeated greedy, and exhaustive search for small instances.

use crate::constraints::IndependenceSystem;
use crate::{ElementId, ElementSet, Error, ObjectiveOracle, Result, TOLERANCE};

/// Largest ground set [`brute_force_opt`] will enumerate.
pub const BRUTE_FORCE_LIMIT: usize = 22;

/// Scans `order` and keeps every element that leaves the set independent.
pub fn unweighted_greedy(sys: &IndependenceSystem, order: &[ElementId]) -> Result<ElementSet> {
    let mut set = ElementSet::new();
    for &u in order {
        if set.contains(u) {
            return Err(Error::DuplicateElement(u));
        }
        if sys.can_add(&set, u)? {
            set.insert(u);
        }
    }
    Ok(set)
}

/// Repeatedly adds the feasible element of largest marginal gain until no
/// feasible element gains more than the tolerance. Ties go to the smallest id.
pub fn weighted_greedy(
    f: &ObjectiveOracle,
    sys: &IndependenceSystem,
    ground: &ElementSet,
) -> Result<ElementSet> {
    let mut candidates = ground.sorted();
    let mut set = ElementSet::new();
    loop {
        let mut best: Option<(ElementId, f64)> = None;
        let mut feasible = Vec::with_capacity(candidates.len());
        for &u in &candidates {
            // Infeasible now means infeasible forever: the set only grows.
            if !sys.can_add(&set, u)? {
                continue;
            }
            feasible.push(u);
            let gain = f.marginal(u, &set)?;
            if best.is_none_or(|(_, g)| gain > g) {
                best = Some((u, gain));
            }
        }
        match best {
            Some((u, gain)) if gain > TOLERANCE => {
                set.insert(u);
                feasible.retain(|&x| x != u);
                candidates = feasible;
            }
            _ => return Ok(set),
        }
    }
}

/// Deterministic double greedy over `ground` in ascending id order.
pub fn double_greedy_unconstrained(f: &ObjectiveOracle, ground: &ElementSet) -> Result<ElementSet> {
    let mut x = ElementSet::new();
    let mut y = ground.clone();
    let mut f_y = f.evaluate(&y)?;
    for u in ground.sorted() {
        let a = f.marginal(u, &x)?;
        let y_minus = y.without(u);
        let f_y_minus = f.evaluate(&y_minus)?;
        let b = f_y_minus - f_y;
        if a >= b {
            x.insert(u);
        } else {
            y = y_minus;
            f_y = f_y_minus;
        }
    }
    Ok(x)
}

/// Default number of rounds of [`repeated_greedy`] for a `k`-system.
pub fn default_iterations(k: usize) -> usize {
    (k as f64).sqrt().ceil() as usize + 1
}

/// Runs `iterations` rounds of weighted greedy on the shrinking ground set,
/// improves each greedy set with double greedy, and returns the best set
/// seen. Earlier candidates win ties.
pub fn repeated_greedy(
    f: &ObjectiveOracle,
    sys: &IndependenceSystem,
    ground: &ElementSet,
    iterations: usize,
) -> Result<ElementSet> {
    if iterations == 0 {
        return Err(Error::InvalidConfig("repeated greedy needs at least one iteration".into()));
    }
    let mut remaining = ground.clone();
    let mut best = ElementSet::new();
    let mut best_value = f.evaluate(&best)?;
    for _ in 0..iterations {
        if remaining.is_empty() {
            break;
        }
        let s = weighted_greedy(f, sys, &remaining)?;
        let s_prime = double_greedy_unconstrained(f, &s)?;
        for candidate in [&s, &s_prime] {
            let value = f.evaluate(candidate)?;
            if value > best_value {
                best_value = value;
                best = candidate.clone();
            }
        }
        if s.is_empty() {
            break;
        }
        remaining = remaining.difference(&s);
    }
    Ok(best)
}

/// An optimal independent subset of `ground` by exhaustive enumeration.
///
/// Among optimal sets (within the tolerance) the one whose ascending id
/// sequence is lexicographically smallest is returned.
pub fn brute_force_opt(
    f: &ObjectiveOracle,
    sys: &IndependenceSystem,
    ground: &ElementSet,
) -> Result<(ElementSet, f64)> {
    if ground.len() > BRUTE_FORCE_LIMIT {
        return Err(Error::SizeLimit {
            size: ground.len(),
            max: BRUTE_FORCE_LIMIT,
        });
    }
    let ids = ground.sorted();
    let mut current = ElementSet::with_capacity(ids.len());
    let mut best = (ElementSet::new(), f.evaluate(&current)?);
    // Pre-order DFS over ascending id sequences visits sets in
    // lexicographic order, so keeping the first strict improvement gives
    // the lexicographically smallest optimum.
    fn go(
        f: &ObjectiveOracle,
        sys: &IndependenceSystem,
        ids: &[ElementId],
        start: usize,
        current: &mut ElementSet,
        best: &mut (ElementSet, f64),
    ) -> Result<()> {
        for i in start..ids.len() {
            let u = ids[i];
            if !sys.can_add(current, u)? {
                continue;
            }
            current.insert(u);
            let value = f.evaluate(current)?;
            if value > best.1 + TOLERANCE {
                *best = (current.clone(), value);
            }
            go(f, sys, ids, i + 1, current, best)?;
            current.remove(u);
        }
        Ok(())
    }
    go(f, sys, &ids, 0, &mut current, &mut best)?;
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraints::{make_system, SystemSpec};
    use crate::objectives::{make_directed_cut, make_modular, CutGraph};

    fn card(n: usize, rho: usize) -> IndependenceSystem {
        make_system(SystemSpec::Cardinality { n, rho }).unwrap()
    }

    fn all(n: usize) -> ElementSet {
        (0..n).collect()
    }

    #[test]
    fn unweighted_greedy_examples() {
        assert_eq!(unweighted_greedy(&card(3, 2), &[0, 1, 2]).unwrap(), [0, 1].into());
        let path = CutGraph::undirected(3, &[(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        let nis = make_system(SystemSpec::NodeIndependentSet { graph: path }).unwrap();
        assert_eq!(unweighted_greedy(&nis, &[0, 1, 2]).unwrap(), [0, 2].into());
        assert!(unweighted_greedy(&nis, &[]).unwrap().is_empty());
    }

    #[test]
    fn weighted_greedy_examples() {
        let f = make_modular(&[3.0, 2.0, 1.0]).unwrap();
        let s = weighted_greedy(&f, &card(3, 2), &all(3)).unwrap();
        assert_eq!(s, [0, 1].into());
        assert_eq!(f.evaluate(&s).unwrap(), 5.0);

        let zero = make_modular(&[0.0, 0.0]).unwrap();
        assert!(weighted_greedy(&zero, &card(2, 2), &all(2)).unwrap().is_empty());

        let cut = make_directed_cut(CutGraph::new(2, vec![(0, 1, 1.0)]).unwrap());
        assert_eq!(weighted_greedy(&cut, &card(2, 1), &all(2)).unwrap(), [0].into());
    }

    #[test]
    fn double_greedy_examples() {
        let f = make_modular(&[1.0, 2.0, 0.5]).unwrap();
        assert_eq!(double_greedy_unconstrained(&f, &all(3)).unwrap(), all(3));

        let zero = make_modular(&[0.0, 0.0]).unwrap();
        let s = double_greedy_unconstrained(&zero, &all(2)).unwrap();
        assert_eq!(zero.evaluate(&s).unwrap(), 0.0);

        let cut = make_directed_cut(CutGraph::new(2, vec![(0, 1, 2.0), (1, 0, 1.0)]).unwrap());
        assert_eq!(double_greedy_unconstrained(&cut, &all(2)).unwrap(), [0].into());
    }

    #[test]
    fn repeated_greedy_examples() {
        let f = make_modular(&[0.5, 4.0, 1.0, 3.0]).unwrap();
        let sys = card(4, 2);
        let one = repeated_greedy(&f, &sys, &all(4), 1).unwrap();
        let greedy = weighted_greedy(&f, &sys, &all(4)).unwrap();
        assert_eq!(f.evaluate(&one).unwrap(), f.evaluate(&greedy).unwrap());

        let two = repeated_greedy(&f, &sys, &all(4), 2).unwrap();
        assert_eq!(f.evaluate(&two).unwrap(), 7.0);

        assert!(repeated_greedy(&f, &sys, &ElementSet::new(), 3).unwrap().is_empty());
        assert_eq!(default_iterations(1), 2);
        assert_eq!(default_iterations(5), 4);
    }

    #[test]
    fn brute_force_examples() {
        let f = make_modular(&[1.0, 2.0]).unwrap();
        assert_eq!(brute_force_opt(&f, &card(2, 1), &all(2)).unwrap(), ([1].into(), 2.0));

        let zero = make_modular(&[0.0, 0.0, 0.0]).unwrap();
        assert_eq!(
            brute_force_opt(&zero, &card(3, 3), &all(3)).unwrap(),
            (ElementSet::new(), 0.0)
        );

        let cut = make_directed_cut(CutGraph::new(2, vec![(0, 1, 1.0), (1, 0, 1.0)]).unwrap());
        assert_eq!(brute_force_opt(&cut, &card(2, 100), &all(2)).unwrap(), ([0].into(), 1.0));

        let big = make_modular(&[1.0; 23]).unwrap();
        assert!(matches!(
            brute_force_opt(&big, &card(23, 2), &all(23)),
            Err(Error::SizeLimit { size: 23, max: 22 })
        ));
    }
}
