use std::collections::BTreeSet;
use std::fmt;

use crate::lts::StateId;

/// A set of pairs `(s, t)` with `s` a state of a left system of `n1` states
/// and `t` a state of a right system of `n2` states.
#[derive(Clone, PartialEq, Eq)]
pub struct PairRelation {
    n1: usize,
    n2: usize,
    bits: Vec<bool>,
}

impl PairRelation {
    pub fn empty(n1: usize, n2: usize) -> PairRelation {
        PairRelation { n1, n2, bits: vec![false; n1 * n2] }
    }

    pub fn full(n1: usize, n2: usize) -> PairRelation {
        PairRelation { n1, n2, bits: vec![true; n1 * n2] }
    }

    /// Pairs outside the bounds are ignored.
    pub fn from_pairs<I: IntoIterator<Item = (StateId, StateId)>>(n1: usize, n2: usize, pairs: I) -> PairRelation {
        let mut r = PairRelation::empty(n1, n2);
        for (s, t) in pairs {
            if s < n1 && t < n2 {
                r.insert(s, t);
            }
        }
        r
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.n1, self.n2)
    }

    pub fn contains(&self, s: StateId, t: StateId) -> bool {
        self.bits[s * self.n2 + t]
    }

    pub fn insert(&mut self, s: StateId, t: StateId) {
        self.bits[s * self.n2 + t] = true;
    }

    pub fn remove(&mut self, s: StateId, t: StateId) {
        self.bits[s * self.n2 + t] = false;
    }

    pub fn len(&self) -> usize {
        self.bits.iter().filter(|b| **b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.bits.iter().any(|b| *b)
    }

    /// Pairs in row-major order.
    pub fn pairs(&self) -> impl Iterator<Item = (StateId, StateId)> + '_ {
        let n2 = self.n2;
        self.bits.iter().enumerate().filter(|(_, b)| **b).map(move |(i, _)| (i / n2, i % n2))
    }

    pub fn to_set(&self) -> BTreeSet<(StateId, StateId)> {
        self.pairs().collect()
    }

    pub fn is_subset(&self, other: &PairRelation) -> bool {
        self.dims() == other.dims() && self.bits.iter().zip(&other.bits).all(|(a, b)| !*a || *b)
    }

    /// The relation with its two components swapped.
    pub fn inverse(&self) -> PairRelation {
        PairRelation::from_pairs(self.n2, self.n1, self.pairs().map(|(s, t)| (t, s)))
    }
}

impl fmt::Debug for PairRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.pairs()).finish()
    }
}
