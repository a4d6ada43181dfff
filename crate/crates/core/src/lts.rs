//! Finite labelled transition systems explored from a process, their
//! weak (tau-saturated) layer, and DOT export.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::semantics::step;
use crate::syntax::{Action, Label, Process};

pub const DEFAULT_MAX_STATES: usize = 10_000;

pub type StateId = usize;

#[derive(Clone, Debug)]
pub struct Lts {
    states: Vec<Process>,
    index: HashMap<Process, StateId>,
    /// Outgoing edges per state, sorted by (action, target).
    succ: Vec<Vec<(Action, StateId)>>,
}

impl Lts {
    pub fn root(&self) -> StateId {
        0
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn process(&self, s: StateId) -> &Process {
        &self.states[s]
    }

    pub fn states(&self) -> impl Iterator<Item = (StateId, &Process)> {
        self.states.iter().enumerate()
    }

    /// Looks up the state of a process, after canonicalization.
    pub fn state_of(&self, p: &Process) -> Option<StateId> {
        self.index.get(&p.canonical()).copied()
    }

    pub fn succ(&self, s: StateId) -> &[(Action, StateId)] {
        &self.succ[s]
    }

    pub fn edges(&self) -> impl Iterator<Item = (StateId, &Action, StateId)> {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(s, out)| out.iter().map(move |(a, t)| (s, a, *t)))
    }

    pub fn edge_count(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    /// Every visible label on some edge.
    pub fn labels(&self) -> BTreeSet<Label> {
        self.edges().filter_map(|(_, a, _)| a.label().cloned()).collect()
    }
}

/// Breadth-first closure of the canonical form of `p` under [`step`].
pub fn explore(p: &Process, max_states: usize) -> Result<Lts> {
    let root = p.canonical();
    let mut lts = Lts { states: vec![root.clone()], index: HashMap::from([(root, 0)]), succ: Vec::new() };
    let mut queue = VecDeque::from([0usize]);
    while let Some(s) = queue.pop_front() {
        let transitions = step(&lts.states[s])?;
        let mut out = Vec::with_capacity(transitions.len());
        for (u, target) in transitions {
            let id = match lts.index.get(&target) {
                Some(&id) => id,
                None => {
                    if lts.states.len() >= max_states {
                        let frontier_sample = queue
                            .iter()
                            .take(3)
                            .map(|&q| lts.states[q].to_string())
                            .chain(std::iter::once(target.to_string()))
                            .collect();
                        return Err(Error::StateBudgetExceeded {
                            limit: max_states,
                            visited: lts.states.len(),
                            frontier_sample,
                        });
                    }
                    let id = lts.states.len();
                    lts.states.push(target.clone());
                    lts.index.insert(target, id);
                    queue.push_back(id);
                    id
                }
            };
            out.push((u, id));
        }
        out.sort();
        debug_assert_eq!(s, lts.succ.len());
        lts.succ.push(out);
    }
    Ok(lts)
}

/// An [`Lts`] with its tau closure and weak visible transitions
/// materialized.
#[derive(Clone, Debug)]
pub struct WeakLts {
    base: Lts,
    /// Reflexive-transitive tau reachability, sorted.
    eps: Vec<Vec<StateId>>,
    /// Tau reachability in one or more steps, sorted.
    tau_plus: Vec<Vec<StateId>>,
    weak: Vec<BTreeMap<Label, Vec<StateId>>>,
    strong: Vec<BTreeMap<Action, Vec<StateId>>>,
}

pub fn saturate(lts: Lts) -> WeakLts {
    let n = lts.len();
    let mut tau_plus = Vec::with_capacity(n);
    for s in 0..n {
        let mut seen = vec![false; n];
        let mut stack: Vec<StateId> = tau_targets(&lts, s).collect();
        let mut reach = Vec::new();
        while let Some(t) = stack.pop() {
            if seen[t] {
                continue;
            }
            seen[t] = true;
            reach.push(t);
            stack.extend(tau_targets(&lts, t));
        }
        reach.sort_unstable();
        tau_plus.push(reach);
    }
    let eps: Vec<Vec<StateId>> = (0..n)
        .map(|s| {
            let mut v = tau_plus[s].clone();
            if let Err(pos) = v.binary_search(&s) {
                v.insert(pos, s);
            }
            v
        })
        .collect();
    let mut weak = Vec::with_capacity(n);
    for s in 0..n {
        let mut by_label: BTreeMap<Label, BTreeSet<StateId>> = BTreeMap::new();
        for &s1 in &eps[s] {
            for (u, s2) in lts.succ(s1) {
                if let Action::Visible(l) = u {
                    by_label.entry(l.clone()).or_default().extend(eps[*s2].iter().copied());
                }
            }
        }
        weak.push(by_label.into_iter().map(|(l, set)| (l, set.into_iter().collect())).collect());
    }
    let strong = (0..n)
        .map(|s| {
            let mut by_action: BTreeMap<Action, Vec<StateId>> = BTreeMap::new();
            for (u, t) in lts.succ(s) {
                by_action.entry(u.clone()).or_default().push(*t);
            }
            by_action
        })
        .collect();
    WeakLts { base: lts, eps, tau_plus, weak, strong }
}

fn tau_targets(lts: &Lts, s: StateId) -> impl Iterator<Item = StateId> + '_ {
    lts.succ(s).iter().filter(|(u, _)| u.is_tau()).map(|(_, t)| *t)
}

impl WeakLts {
    pub fn explore(p: &Process, max_states: usize) -> Result<WeakLts> {
        Ok(saturate(explore(p, max_states)?))
    }

    pub fn base(&self) -> &Lts {
        &self.base
    }

    pub fn len(&self) -> usize {
        self.base.len()
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty()
    }

    pub fn root(&self) -> StateId {
        self.base.root()
    }

    pub fn process(&self, s: StateId) -> &Process {
        self.base.process(s)
    }

    pub fn succ(&self, s: StateId) -> &[(Action, StateId)] {
        self.base.succ(s)
    }

    pub fn eps(&self, s: StateId, t: StateId) -> bool {
        self.eps[s].binary_search(&t).is_ok()
    }

    pub fn eps_succ(&self, s: StateId) -> &[StateId] {
        &self.eps[s]
    }

    pub fn weak(&self, s: StateId, l: &Label, t: StateId) -> bool {
        self.weak[s].get(l).is_some_and(|v| v.binary_search(&t).is_ok())
    }

    /// Targets of `s -u-> t`.
    pub fn strong_succ(&self, s: StateId, u: &Action) -> &[StateId] {
        self.strong[s].get(u).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Targets of the full weak transition: for `Tau` at least one tau step.
    pub fn weak_succ(&self, s: StateId, u: &Action) -> &[StateId] {
        match u {
            Action::Tau => &self.tau_plus[s],
            Action::Visible(l) => self.weak[s].get(l).map(Vec::as_slice).unwrap_or(&[]),
        }
    }

    /// Targets of the hatted weak transition: for `Tau` staying put is allowed.
    pub fn hat_succ(&self, s: StateId, u: &Action) -> &[StateId] {
        match u {
            Action::Tau => &self.eps[s],
            Action::Visible(_) => self.weak_succ(s, u),
        }
    }

    /// Targets of one strong step, or `s` itself when `u` is `Tau`.
    pub fn one_or_stay(&self, s: StateId, u: &Action) -> Vec<StateId> {
        let mut out = self.strong_succ(s, u).to_vec();
        if u.is_tau() && !out.contains(&s) {
            out.push(s);
        }
        out
    }

    /// Visible labels with a weak transition from `s`.
    pub fn weak_labels(&self, s: StateId) -> impl Iterator<Item = &Label> {
        self.weak[s].keys()
    }
}

/// True iff `s` has no outgoing tau edge.
pub fn is_stable(lts: &Lts, s: StateId) -> bool {
    lts.succ(s).iter().all(|(u, _)| !u.is_tau())
}

/// Deterministic Graphviz rendering; the root is drawn with a double border.
pub fn to_dot(lts: &Lts) -> String {
    let mut out = String::from("digraph lts {\n  node [shape=ellipse];\n");
    for (s, p) in lts.states() {
        let extra = if s == lts.root() { ", peripheries=2" } else { "" };
        let _ = writeln!(out, "  s{s} [label=\"{}\"{extra}];", escape(&p.to_string()));
    }
    for (s, u, t) in lts.edges() {
        let _ = writeln!(out, "  s{s} -> s{t} [label=\"{}\"];", escape(&u.to_string()));
    }
    out.push_str("}\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Process {
        Process::parse(s).unwrap()
    }

    #[test]
    fn explore_examples() {
        let l = explore(&p("a.0 | 'a.0"), 100).unwrap();
        assert_eq!((l.len(), l.edge_count()), (4, 5));
        let nil = explore(&Process::Nil, 100).unwrap();
        assert_eq!((nil.len(), nil.edge_count()), (1, 0));
        let k = explore(&p("rec A. a.A"), 100).unwrap();
        assert_eq!((k.len(), k.edge_count()), (1, 1));
        assert_eq!(k.succ(0), &[(Action::input("a"), 0)]);
    }

    #[test]
    fn budget_is_reported() {
        let err = explore(&p("rec A. a.(A | b.0)"), 50).unwrap_err();
        match err {
            Error::StateBudgetExceeded { limit, visited, frontier_sample } => {
                assert_eq!(limit, 50);
                assert_eq!(visited, 50);
                assert!(!frontier_sample.is_empty());
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn saturation_examples() {
        let w = WeakLts::explore(&p("t.a.0"), 100).unwrap();
        let a0 = w.base().state_of(&p("a.0")).unwrap();
        let nil = w.base().state_of(&Process::Nil).unwrap();
        let a = Label::input(crate::syntax::Name::new("a").unwrap());
        assert!(w.eps(w.root(), a0));
        assert!(w.weak(w.root(), &a, nil));
        for s in 0..w.len() {
            assert!(w.eps(s, s));
        }
        assert_eq!(w.weak_succ(w.root(), &Action::Tau), &[a0]);
        assert!(w.weak_succ(a0, &Action::Tau).is_empty());
        assert_eq!(w.hat_succ(a0, &Action::Tau), &[a0]);
    }

    #[test]
    fn stability() {
        let l = explore(&p("a.0"), 10).unwrap();
        assert!(is_stable(&l, l.root()));
        let l = explore(&p("t.0"), 10).unwrap();
        assert!(!is_stable(&l, l.root()));
        let l = explore(&p("a.0 | 'a.0"), 10).unwrap();
        assert!(!is_stable(&l, l.root()));
    }

    #[test]
    fn dot_output() {
        let nil = to_dot(&explore(&Process::Nil, 10).unwrap());
        assert_eq!(nil.matches("->").count(), 0);
        assert_eq!(nil.matches("label=").count(), 1);
        let a = to_dot(&explore(&p("a.0"), 10).unwrap());
        assert!(a.contains("s0 -> s1 [label=\"a\"]"));
        assert!(a.contains("peripheries=2"));
        let q = p("rec A. (a.A + 'b.t.A) | b.0");
        assert_eq!(to_dot(&explore(&q, 100).unwrap()), to_dot(&explore(&q, 100).unwrap()));
    }
}
