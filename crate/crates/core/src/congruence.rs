//! Characterizations of the rooted relations through sums and contexts,
//! free actions, and bounded checks of universally quantified statements.

use std::collections::{BTreeSet, HashSet};

use rayon::prelude::*;

use crate::context::Context;
use crate::equiv::{check, Comparison, RelationKind};
use crate::error::{Error, Result};
use crate::lts::{explore, is_stable, StateId, WeakLts};
use crate::syntax::{Action, Label, Name, Process, Relabeling};

/// Outcome of a check of a statement quantified over an unbounded domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TriState<W> {
    /// Every candidate within the bound passed.
    Confirmed { checked: usize, bound: String },
    /// A concrete candidate on which the statement fails.
    Refuted(W),
    /// Nothing was checked.
    Inconclusive(String),
}

impl<W> TriState<W> {
    pub fn is_confirmed(&self) -> bool {
        matches!(self, TriState::Confirmed { .. })
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, TriState::Refuted(_))
    }
}

/// The first identifier in the order `a`, ..., `z`, `a0`, `a1`, ... that is
/// not in `avoid` (`t` is a keyword and is skipped).
pub fn fresh_name(avoid: &BTreeSet<Name>) -> Name {
    let letters = ('a'..='z').filter(|c| *c != 't').map(String::from);
    let numbered = (0usize..).map(|i| format!("a{i}"));
    letters
        .chain(numbered)
        .map(|s| Name::new(&s).expect("generated identifiers are valid"))
        .find(|n| !avoid.contains(n))
        .expect("the candidate sequence is infinite")
}

/// A label on which `p` has no weak transition: its name occurs nowhere in
/// `p`, so no derivative can perform it.
pub fn free_action(p: &Process) -> Label {
    Label::input(fresh_name(&p.names()))
}

/// A label free for both processes.
pub fn common_free_action(p: &Process, q: &Process) -> Label {
    let mut avoid = p.names();
    avoid.extend(q.names());
    Label::input(fresh_name(&avoid))
}

/// Checks `p + r ≈ q + r` for each probe `r`, in order.
pub fn sum_equiv_bounded(p: &Process, q: &Process, probes: &[Process], max_states: usize) -> Result<TriState<Process>> {
    if probes.is_empty() {
        return Ok(TriState::Inconclusive("empty probe set".into()));
    }
    for r in probes {
        let v = check(RelationKind::Weak, &Process::sum(p.clone(), r.clone()), &Process::sum(q.clone(), r.clone()), max_states)?;
        if !v.holds {
            return Ok(TriState::Refuted(r.clone()));
        }
    }
    Ok(TriState::Confirmed { checked: probes.len(), bound: format!("{} probes", probes.len()) })
}

fn with_fresh_summand(p: &Process, q: &Process) -> (Process, Process) {
    let a = Process::prefix(Action::Visible(common_free_action(p, q)), Process::Nil);
    (Process::sum(p.clone(), a.clone()), Process::sum(q.clone(), a))
}

/// `p + a.0 ≈ q + a.0` for a label `a` free in both; coincides with rooted
/// bisimilarity of `p` and `q`.
pub fn decide_rooted_via_sum(p: &Process, q: &Process, max_states: usize) -> Result<bool> {
    let (p1, q1) = with_fresh_summand(p, q);
    Ok(check(RelationKind::Weak, &p1, &q1, max_states)?.holds)
}

/// `p + a.0 ≽bis q + a.0` for a label `a` free in both; coincides with
/// rooted contraction.
pub fn decide_rooted_contraction_via_sum(p: &Process, q: &Process, max_states: usize) -> Result<bool> {
    let (p1, q1) = with_fresh_summand(p, q);
    Ok(check(RelationKind::Contraction, &p1, &q1, max_states)?.holds)
}

/// Relations whose closure under contexts can be probed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClosureRelation {
    Weak,
    Contraction,
}

impl ClosureRelation {
    fn kind(self) -> RelationKind {
        match self {
            ClosureRelation::Weak => RelationKind::Weak,
            ClosureRelation::Contraction => RelationKind::Contraction,
        }
    }
}

/// Closed leaves used when building contexts: `x.0`, `'x.0` for every name
/// of the alphabet, then `t.0` and `0`.
fn leaves(alphabet: &[Name]) -> Vec<Context> {
    let mut out: Vec<Context> = alphabet
        .iter()
        .map(|x| Context::leaf(Process::prefix(Action::Visible(Label::input(x.clone())), Process::Nil)))
        .collect();
    out.extend(
        alphabet
            .iter()
            .map(|x| Context::leaf(Process::prefix(Action::Visible(Label::output(x.clone())), Process::Nil))),
    );
    out.push(Context::leaf(Process::tau(Process::Nil)));
    out.push(Context::leaf(Process::Nil));
    out
}

fn actions(alphabet: &[Name]) -> Vec<Action> {
    let mut out: Vec<Action> = alphabet.iter().map(|x| Action::Visible(Label::input(x.clone()))).collect();
    out.extend(alphabet.iter().map(|x| Action::Visible(Label::output(x.clone()))));
    out.push(Action::Tau);
    out
}

/// Contexts obtained from `c` by one more constructor, in a fixed order.
fn extend(c: &Context, alphabet: &[Name], leaves: &[Context], actions: &[Action]) -> Vec<Context> {
    let mut out = Vec::new();
    for u in actions {
        out.push(Context::prefix(u.clone(), c.clone()));
    }
    for l in leaves {
        out.push(Context::sum(c.clone(), l.clone()));
        out.push(Context::sum(l.clone(), c.clone()));
    }
    for l in leaves {
        out.push(Context::par(c.clone(), l.clone()));
        out.push(Context::par(l.clone(), c.clone()));
    }
    for x in alphabet {
        out.push(Context::restr([x.clone()], c.clone()));
    }
    for x in alphabet {
        for y in alphabet {
            if x != y {
                let rf = Relabeling::from_pairs([(x.clone(), y.clone())]).expect("single pair");
                out.push(Context::relab(c.clone(), rf));
            }
        }
    }
    out.push(Context::sum(c.clone(), Context::Hole));
    out.push(Context::par(c.clone(), Context::Hole));
    out
}

/// Contexts of nesting depth at most `depth` over the alphabet, by level:
/// level 0 is the hole, level `k + 1` extends each level-`k` context by one
/// constructor. Duplicates are dropped.
pub fn enumerate_contexts(depth: usize, alphabet: &[Name]) -> Vec<Vec<Context>> {
    let (leaves, actions) = (leaves(alphabet), actions(alphabet));
    let mut seen: HashSet<Context> = HashSet::from([Context::Hole]);
    let mut levels = vec![vec![Context::Hole]];
    for _ in 0..depth {
        let mut next = Vec::new();
        for c in levels.last().expect("nonempty") {
            for d in extend(c, alphabet, &leaves, &actions) {
                if seen.insert(d.clone()) {
                    next.push(d);
                }
            }
        }
        levels.push(next);
    }
    levels
}

/// Looks for a context `C` of depth at most `depth` with `¬ C[p] R C[q]`.
pub fn composition_closure_bounded(
    relation: ClosureRelation,
    p: &Process,
    q: &Process,
    depth: usize,
    alphabet: &[Name],
    max_states: usize,
) -> Result<TriState<Context>> {
    let kind = relation.kind();
    let mut checked = 0;
    for level in enumerate_contexts(depth, alphabet) {
        let outcome = level
            .par_iter()
            .map(|c| -> Result<Option<Context>> {
                let v = check(kind, &c.apply(p)?, &c.apply(q)?, max_states)?;
                Ok((!v.holds).then(|| c.clone()))
            })
            .find_first(|r| !matches!(r, Ok(None)));
        match outcome {
            Some(Ok(Some(c))) => return Ok(TriState::Refuted(c)),
            Some(Err(e)) => return Err(e),
            _ => checked += level.len(),
        }
    }
    Ok(TriState::Confirmed { checked, bound: format!("depth {depth}") })
}

/// Both sides of `p ≈ q ⇔ (p ≈c q ∨ p ≈c τ.q ∨ τ.p ≈c q)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HennessyDengReport {
    pub weak: bool,
    pub rooted: bool,
    pub rooted_tau_right: bool,
    pub rooted_tau_left: bool,
}

impl HennessyDengReport {
    /// Index (1-based) of the first true disjunct.
    pub fn disjunct(&self) -> Option<usize> {
        [self.rooted, self.rooted_tau_right, self.rooted_tau_left]
            .iter()
            .position(|b| *b)
            .map(|i| i + 1)
    }

    pub fn biconditional_holds(&self) -> bool {
        self.weak == self.disjunct().is_some()
    }
}

pub fn hennessy_deng_check(p: &Process, q: &Process, max_states: usize) -> Result<HennessyDengReport> {
    let rooted = |a: &Process, b: &Process| -> Result<bool> { Ok(check(RelationKind::Rooted, a, b, max_states)?.holds) };
    let cmp = Comparison::new(p, q, max_states)?;
    Ok(HennessyDengReport {
        weak: cmp.verdict(RelationKind::Weak).holds,
        rooted: cmp.verdict(RelationKind::Rooted).holds,
        rooted_tau_right: rooted(p, &Process::tau(q.clone()))?,
        rooted_tau_left: rooted(&Process::tau(p.clone()), q)?,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StableSumReport {
    /// Probes actually used, including the ones added automatically.
    pub probes: Vec<Process>,
    /// First probe `r` with `¬(p + r ≈ q + r)`.
    pub refuting_probe: Option<Process>,
    pub rooted: bool,
    /// The conclusion agrees with the probes: either every probe passes and
    /// `p ≈c q`, or `p` and `q` are not rooted bisimilar and a probe refutes.
    pub agreement: bool,
}

/// States reachable from the root in one or more steps.
fn derivatives(w: &WeakLts) -> BTreeSet<StateId> {
    let mut seen = BTreeSet::new();
    let mut stack: Vec<StateId> = w.succ(w.root()).iter().map(|(_, t)| *t).collect();
    while let Some(s) = stack.pop() {
        if seen.insert(s) {
            stack.extend(w.succ(s).iter().map(|(_, t)| *t));
        }
    }
    seen
}

fn derivative_like(p: &Process, k: &Process, max_states: usize) -> Result<Option<Process>> {
    let cmp = Comparison::new(p, k, max_states)?;
    let weak = cmp.weak_relation();
    let kr = cmp.right().root();
    Ok(derivatives(cmp.left())
        .into_iter()
        .find(|&s| weak.contains(s, kr))
        .map(|s| cmp.left().process(s).clone()))
}

/// Checks the hypotheses on the witness `k` (stable, and no weak derivative
/// of `p` or `q` is weakly bisimilar to it), then compares the probes
/// `p + r ≈ q + r` with the rooted bisimilarity of `p` and `q`. The probes
/// `c.k` for a fresh `c`, and `k` itself, are always included.
pub fn stable_sum_check(p: &Process, q: &Process, k: &Process, probes: &[Process], max_states: usize) -> Result<StableSumReport> {
    const THEOREM: &str = "sum characterization with a stable witness";
    let kl = explore(k, max_states)?;
    if !is_stable(&kl, kl.root()) {
        return Err(Error::HypothesisFailed { theorem: THEOREM.into(), check: "k is stable".into() });
    }
    for (side, r) in [("p", p), ("q", q)] {
        if let Some(d) = derivative_like(r, k, max_states)? {
            return Err(Error::HypothesisFailed {
                theorem: THEOREM.into(),
                check: format!("no weak derivative of {side} is weakly bisimilar to k (found {d})"),
            });
        }
    }
    let mut avoid = p.names();
    avoid.extend(q.names());
    avoid.extend(k.names());
    let c = Action::Visible(Label::input(fresh_name(&avoid)));
    let mut all: Vec<Process> = probes.to_vec();
    for extra in [Process::prefix(c, k.clone()), k.clone()] {
        if !all.contains(&extra) {
            all.push(extra);
        }
    }
    let refuting_probe = match sum_equiv_bounded(p, q, &all, max_states)? {
        TriState::Refuted(r) => Some(r),
        _ => None,
    };
    let rooted = check(RelationKind::Rooted, p, q, max_states)?.holds;
    let agreement = rooted == refuting_probe.is_none();
    Ok(StableSumReport { probes: all, refuting_probe, rooted, agreement })
}
