//! Direct clause checking of candidate relations, independent of the
//! saturated layer: tau closures are recomputed here by depth-first search
//! over the base edges.

use std::collections::{BTreeSet, HashMap};

use crate::lts::{Lts, StateId};
use crate::syntax::Action;

use super::ChallengeSide;

/// A pair of the candidate with an unanswered move.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClauseFailure {
    pub pair: (StateId, StateId),
    pub side: ChallengeSide,
    pub action: Action,
    pub target: StateId,
}

struct Closures<'a> {
    lts: &'a Lts,
    memo: HashMap<StateId, BTreeSet<StateId>>,
}

impl<'a> Closures<'a> {
    fn new(lts: &'a Lts) -> Self {
        Closures { lts, memo: HashMap::new() }
    }

    fn eps(&mut self, s: StateId) -> BTreeSet<StateId> {
        if let Some(c) = self.memo.get(&s) {
            return c.clone();
        }
        let mut seen = BTreeSet::from([s]);
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            for (u, y) in self.lts.succ(x) {
                if u.is_tau() && seen.insert(*y) {
                    stack.push(*y);
                }
            }
        }
        self.memo.insert(s, seen.clone());
        seen
    }

    /// `t ⇒̂u t'`: tau closure for `τ`, otherwise closure, one `u`, closure.
    fn hat(&mut self, t: StateId, u: &Action) -> BTreeSet<StateId> {
        if u.is_tau() {
            return self.eps(t);
        }
        let mut out = BTreeSet::new();
        for t1 in self.eps(t) {
            let lts = self.lts;
            for (v, t2) in lts.succ(t1) {
                if v == u {
                    out.extend(self.eps(*t2));
                }
            }
        }
        out
    }
}

/// First pair of `relation` violating the strong bisimulation clauses.
pub fn strong_failure(left: &Lts, right: &Lts, relation: &BTreeSet<(StateId, StateId)>) -> Option<ClauseFailure> {
    relation.iter().find_map(|&(s, t)| {
        for (u, s2) in left.succ(s) {
            if !right.succ(t).iter().any(|(v, t2)| v == u && relation.contains(&(*s2, *t2))) {
                return Some(ClauseFailure { pair: (s, t), side: ChallengeSide::Left, action: u.clone(), target: *s2 });
            }
        }
        for (u, t2) in right.succ(t) {
            if !left.succ(s).iter().any(|(v, s2)| v == u && relation.contains(&(*s2, *t2))) {
                return Some(ClauseFailure { pair: (s, t), side: ChallengeSide::Right, action: u.clone(), target: *t2 });
            }
        }
        None
    })
}

/// First pair of `relation` violating the weak bisimulation clauses: every
/// move `s -u-> s'` is answered by `t ⇒̂u t'` with `(s', t')` related, and
/// symmetrically.
pub fn weak_failure(left: &Lts, right: &Lts, relation: &BTreeSet<(StateId, StateId)>) -> Option<ClauseFailure> {
    let mut lc = Closures::new(left);
    let mut rc = Closures::new(right);
    for &(s, t) in relation {
        for (u, s2) in left.succ(s) {
            if !rc.hat(t, u).iter().any(|t2| relation.contains(&(*s2, *t2))) {
                return Some(ClauseFailure { pair: (s, t), side: ChallengeSide::Left, action: u.clone(), target: *s2 });
            }
        }
        for (u, t2) in right.succ(t) {
            if !lc.hat(s, u).iter().any(|s2| relation.contains(&(*s2, *t2))) {
                return Some(ClauseFailure { pair: (s, t), side: ChallengeSide::Right, action: u.clone(), target: *t2 });
            }
        }
    }
    None
}

pub fn is_strong_bisimulation(left: &Lts, right: &Lts, relation: &BTreeSet<(StateId, StateId)>) -> bool {
    strong_failure(left, right, relation).is_none()
}

pub fn is_weak_bisimulation(left: &Lts, right: &Lts, relation: &BTreeSet<(StateId, StateId)>) -> bool {
    weak_failure(left, right, relation).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lts::explore;
    use crate::syntax::Process;

    fn lts(s: &str) -> Lts {
        explore(&Process::parse(s).unwrap(), 100).unwrap()
    }

    #[test]
    fn weak_candidate() {
        let (l, r) = (lts("t.a.0"), lts("a.0"));
        let a0 = l.state_of(&Process::parse("a.0").unwrap()).unwrap();
        let nil_l = l.state_of(&Process::Nil).unwrap();
        let nil_r = r.state_of(&Process::Nil).unwrap();
        let rel = BTreeSet::from([(0, 0), (a0, 0), (nil_l, nil_r)]);
        assert!(is_weak_bisimulation(&l, &r, &rel));
        assert!(!is_strong_bisimulation(&l, &r, &rel));
        let partial = BTreeSet::from([(0, 0), (a0, 0)]);
        let failure = weak_failure(&l, &r, &partial).unwrap();
        assert_eq!(failure.action, Action::input("a"));
    }

    #[test]
    fn empty_relation_is_closed() {
        let (l, r) = (lts("a.0"), lts("b.0"));
        assert!(is_weak_bisimulation(&l, &r, &BTreeSet::new()));
        assert!(!is_weak_bisimulation(&l, &r, &BTreeSet::from([(0, 0)])));
    }
}
