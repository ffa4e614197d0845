use std::fmt;

use indexmap::IndexSet;
use serde::{Deserialize, Serialize};

use crate::ElementId;

/// An insertion-ordered set of element ids.
///
/// Equality ignores order. Removal keeps the relative order of the
/// remaining members, so a set built by a streaming algorithm always
/// lists its members in arrival order.
#[derive(Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ElementSet {
    members: IndexSet<ElementId>,
}

impl ElementSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(capacity: usize) -> Self {
        Self {
            members: IndexSet::with_capacity(capacity),
        }
    }

    /// Returns `false` if `u` was already present.
    pub fn insert(&mut self, u: ElementId) -> bool {
        self.members.insert(u)
    }

    pub fn remove(&mut self, u: ElementId) -> bool {
        self.members.shift_remove(&u)
    }

    pub fn contains(&self, u: ElementId) -> bool {
        self.members.contains(&u)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = ElementId> + ExactSizeIterator + '_ {
        self.members.iter().copied()
    }

    /// `self + u`, leaving `self` untouched.
    pub fn with(&self, u: ElementId) -> Self {
        let mut next = self.clone();
        next.insert(u);
        next
    }

    /// `self - u`, leaving `self` untouched.
    pub fn without(&self, u: ElementId) -> Self {
        let mut next = self.clone();
        next.remove(u);
        next
    }

    pub fn union(&self, other: &ElementSet) -> Self {
        let mut out = self.clone();
        out.extend(other.iter());
        out
    }

    pub fn intersection(&self, other: &ElementSet) -> Self {
        self.iter().filter(|&u| other.contains(u)).collect()
    }

    pub fn difference(&self, other: &ElementSet) -> Self {
        self.iter().filter(|&u| !other.contains(u)).collect()
    }

    pub fn is_subset(&self, other: &ElementSet) -> bool {
        self.len() <= other.len() && self.iter().all(|u| other.contains(u))
    }

    pub fn is_disjoint(&self, other: &ElementSet) -> bool {
        self.iter().all(|u| !other.contains(u))
    }

    /// Members in ascending id order.
    pub fn sorted(&self) -> Vec<ElementId> {
        let mut ids: Vec<_> = self.iter().collect();
        ids.sort_unstable();
        ids
    }

    /// Members in insertion order.
    pub fn to_vec(&self) -> Vec<ElementId> {
        self.iter().collect()
    }

    pub fn max_id(&self) -> Option<ElementId> {
        self.iter().max()
    }
}

impl FromIterator<ElementId> for ElementSet {
    fn from_iter<I: IntoIterator<Item = ElementId>>(iter: I) -> Self {
        Self {
            members: iter.into_iter().collect(),
        }
    }
}

impl Extend<ElementId> for ElementSet {
    fn extend<I: IntoIterator<Item = ElementId>>(&mut self, iter: I) {
        self.members.extend(iter);
    }
}

impl<const N: usize> From<[ElementId; N]> for ElementSet {
    fn from(ids: [ElementId; N]) -> Self {
        ids.into_iter().collect()
    }
}

impl From<&[ElementId]> for ElementSet {
    fn from(ids: &[ElementId]) -> Self {
        ids.iter().copied().collect()
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.members.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn insertion_order_survives_removal() {
        let mut s: ElementSet = [5, 1, 3, 2].into();
        assert!(s.remove(1));
        assert_eq!(s.to_vec(), vec![5, 3, 2]);
        assert!(!s.insert(3));
        assert_eq!(s.sorted(), vec![2, 3, 5]);
    }

    #[test]
    fn equality_ignores_order() {
        let a: ElementSet = [1, 2, 3].into();
        let b: ElementSet = [3, 1, 2].into();
        assert_eq!(a, b);
        assert!(a.is_subset(&b));
        assert!(a.difference(&b).is_empty());
    }
}
