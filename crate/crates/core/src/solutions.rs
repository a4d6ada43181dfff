//! Solutions of single-variable equations and contractions, and checks of
//! the unique-solution theorems together with the lemmas behind them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::context::{context_step, Context};
use crate::equiv::{check, Comparison, RelationKind, Verdict};
use crate::error::{Error, Result};
use crate::lts::{StateId, WeakLts};
use crate::semantics::{no_label, trace_holds, ActionList};
use crate::syntax::{Action, Process};

/// Whether a system relates a process to its unfolding by an equivalence
/// or by a preorder.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flavor {
    Equation,
    Contraction,
}

/// `X = body[X]` (or `X ≽ body[X]`) read with respect to `relation`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemSpec {
    pub body: Context,
    pub relation: RelationKind,
}

impl SystemSpec {
    pub fn new(body: Context, relation: RelationKind) -> SystemSpec {
        SystemSpec { body, relation }
    }

    pub fn flavor(&self) -> Flavor {
        if self.relation.is_preorder() {
            Flavor::Contraction
        } else {
            Flavor::Equation
        }
    }
}

/// `relation(p, body[p])`; for preorders the solution is on the left.
pub fn is_solution(spec: &SystemSpec, p: &Process, max_states: usize) -> Result<bool> {
    Ok(check(spec.relation, p, &spec.body.apply(p)?, max_states)?.holds)
}

/// The unique-solution results that can be checked on instances.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    /// Weakly guarded body, solutions up to `~`, conclusion `~`.
    Strong,
    /// Strongly guarded sequential body, solutions up to `≈`, conclusion `≈`.
    WeakEquation,
    /// Strongly guarded sequential body, solutions up to `≈c`, conclusion `≈c`.
    RootedEquation,
    /// Weakly guarded body with guarded sums, solutions up to `≽bis`,
    /// conclusion `≈`.
    Contraction,
    /// Weakly guarded body, solutions up to `≽c`, conclusion `≈c`.
    RootedContraction,
}

impl Variant {
    pub const ALL: [Variant; 5] = [
        Variant::Strong,
        Variant::WeakEquation,
        Variant::RootedEquation,
        Variant::Contraction,
        Variant::RootedContraction,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Strong => "strong",
            Variant::WeakEquation => "weak",
            Variant::RootedEquation => "rooted",
            Variant::Contraction => "contraction",
            Variant::RootedContraction => "rooted-contraction",
        }
    }

    pub fn theorem(self) -> &'static str {
        match self {
            Variant::Strong => "unique solution of weakly guarded equations for strong bisimilarity",
            Variant::WeakEquation => "unique solution of guarded sequential equations for weak bisimilarity",
            Variant::RootedEquation => "unique solution of guarded sequential equations for rooted bisimilarity",
            Variant::Contraction => "unique solution of weakly guarded contractions with guarded sums",
            Variant::RootedContraction => "unique solution of weakly guarded rooted contractions",
        }
    }

    /// Relation under which both processes must solve the system.
    pub fn solution_relation(self) -> RelationKind {
        match self {
            Variant::Strong => RelationKind::Strong,
            Variant::WeakEquation => RelationKind::Weak,
            Variant::RootedEquation => RelationKind::Rooted,
            Variant::Contraction => RelationKind::Contraction,
            Variant::RootedContraction => RelationKind::RootedContraction,
        }
    }

    /// Relation the theorem guarantees between two solutions.
    pub fn conclusion(self) -> RelationKind {
        match self {
            Variant::Strong => RelationKind::Strong,
            Variant::WeakEquation | Variant::Contraction => RelationKind::Weak,
            Variant::RootedEquation | Variant::RootedContraction => RelationKind::Rooted,
        }
    }

    /// Classification flags required of the body, in reporting order.
    pub fn required_classes(self) -> &'static [&'static str] {
        match self {
            Variant::Strong | Variant::RootedContraction => &["wg"],
            Variant::WeakEquation | Variant::RootedEquation => &["seq", "sg"],
            Variant::Contraction => &["wgs"],
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Variant> {
        Variant::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::PreconditionFailed(format!("unknown variant `{s}`")))
    }
}

#[derive(Clone, Debug)]
pub struct SolutionReport {
    pub variant: Variant,
    pub theorem: &'static str,
    /// Named hypothesis checks in evaluation order.
    pub hypothesis_checks: Vec<(String, bool)>,
    /// Decided only when every hypothesis holds.
    pub conclusion: Option<Verdict>,
}

impl SolutionReport {
    pub fn hypotheses_hold(&self) -> bool {
        self.hypothesis_checks.iter().all(|(_, b)| *b)
    }

    pub fn failed_checks(&self) -> Vec<&str> {
        self.hypothesis_checks.iter().filter(|(_, b)| !*b).map(|(n, _)| n.as_str()).collect()
    }

    /// True when the hypotheses hold and so does the conclusion.
    pub fn guarantee_met(&self) -> bool {
        self.conclusion.as_ref().is_some_and(|v| v.holds)
    }
}

/// Evaluates every hypothesis of the variant and, if they all hold, the
/// conclusion between `p` and `q`.
pub fn solution_report(variant: Variant, body: &Context, p: &Process, q: &Process, max_states: usize) -> Result<SolutionReport> {
    let class = body.classify();
    let mut hypothesis_checks: Vec<(String, bool)> = variant
        .required_classes()
        .iter()
        .map(|name| {
            let flag = class.flags().iter().find(|(n, _)| n == name).map(|(_, b)| *b).unwrap_or(false);
            (format!("body is {name}"), flag)
        })
        .collect();
    let spec = SystemSpec::new(body.clone(), variant.solution_relation());
    for (side, r) in [("p", p), ("q", q)] {
        hypothesis_checks.push((format!("{side} is a {} solution", spec.relation), is_solution(&spec, r, max_states)?));
    }
    let conclusion = if hypothesis_checks.iter().all(|(_, b)| *b) {
        Some(check(variant.conclusion(), p, q, max_states)?)
    } else {
        None
    };
    Ok(SolutionReport { variant, theorem: variant.theorem(), hypothesis_checks, conclusion })
}

/// As [`solution_report`], but a failed hypothesis is an error naming the
/// failed checks.
pub fn unique_solution(variant: Variant, body: &Context, p: &Process, q: &Process, max_states: usize) -> Result<SolutionReport> {
    let report = solution_report(variant, body, p, q, max_states)?;
    if !report.hypotheses_hold() {
        return Err(Error::HypothesisFailed {
            theorem: report.theorem.to_string(),
            check: report.failed_checks().join(", "),
        });
    }
    Ok(report)
}

/// Which side conditions `unfold_decompose` enforces.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Discipline {
    /// Outer context in `gcontext`, unfolded body in `wgs`.
    GuardedSums,
    /// Any outer context, unfolded body in `wg`.
    Unrestricted,
}

/// A context reached by context transitions, with the contexts visited on
/// the way.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub context: Context,
    pub path: Vec<Context>,
}

/// Runs the transitions of `c ∘ eⁿ` along `acts`, treating holes as inert.
/// Every returned `C'` satisfies `c[eⁿ[Q]] -acts-> C'[Q]` for all closed `Q`.
pub fn unfold_decompose(
    c: &Context,
    e: &Context,
    n: usize,
    acts: &[Action],
    discipline: Discipline,
) -> Result<Vec<Decomposition>> {
    let (cc, ec) = (c.classify(), e.classify());
    let ok = match discipline {
        Discipline::GuardedSums => cc.gcontext && ec.wgs,
        Discipline::Unrestricted => cc.context && ec.wg,
    };
    if !ok {
        return Err(Error::PreconditionFailed(format!("contexts `{c}` and `{e}` do not meet {discipline:?}")));
    }
    if acts.len() > n {
        return Err(Error::PreconditionFailed(format!("trace of length {} exceeds {n} unfoldings", acts.len())));
    }
    let start = c.compose(&e.iterate(n));
    let mut frontier: BTreeMap<Context, Vec<Context>> = BTreeMap::from([(start.clone(), vec![start])]);
    for u in acts {
        let mut next = BTreeMap::new();
        for (d, path) in &frontier {
            for (v, d2) in context_step(d)? {
                if v == *u && !next.contains_key(&d2) {
                    let mut path2 = path.clone();
                    path2.push(d2.clone());
                    next.insert(d2, path2);
                }
            }
        }
        frontier = next;
    }
    Ok(frontier.into_iter().map(|(context, path)| Decomposition { context, path }).collect())
}

/// A trace of the contracted process matching one endpoint of a trace of
/// the contracting one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceTransfer {
    pub left_end: Process,
    pub trace: ActionList,
    pub right_end: Process,
}

fn label_discipline(acts: &[Action]) -> Result<()> {
    if no_label(acts) || acts.iter().filter(|u| !u.is_tau()).count() == 1 {
        Ok(())
    } else {
        Err(Error::PreconditionFailed("trace has more than one visible action".into()))
    }
}

/// Matches every `p`-path along `acts` step by step through the
/// contraction relation: each move is answered by one step, or by staying
/// put for `τ`. Returns, for each endpoint `p'` of such a path, whether an
/// answer was found; answers only drop `τ` actions.
pub fn contraction_trace_transfer_all(
    p: &Process,
    q: &Process,
    acts: &[Action],
    max_states: usize,
) -> Result<Vec<(Process, Option<TraceTransfer>)>> {
    contraction_trace_transfer_in(&Comparison::new(p, q, max_states)?, acts)
}

/// As [`contraction_trace_transfer_all`] on the roots of an existing
/// comparison.
pub fn contraction_trace_transfer_in(cmp: &Comparison, acts: &[Action]) -> Result<Vec<(Process, Option<TraceTransfer>)>> {
    label_discipline(acts)?;
    let rel = cmp.contraction_relation();
    let (l, r) = (cmp.left(), cmp.right());
    if !rel.contains(l.root(), r.root()) {
        return Err(Error::PreconditionFailed(format!(
            "{} does not contract to {}",
            l.process(l.root()),
            r.process(r.root())
        )));
    }
    // Left states reachable along the prefix of `acts` read so far, and the
    // matched right states with one answering trace each.
    let mut left: BTreeSet<StateId> = BTreeSet::from([l.root()]);
    let mut matched: BTreeMap<(StateId, StateId), ActionList> = BTreeMap::from([((l.root(), r.root()), Vec::new())]);
    for u in acts {
        left = left.iter().flat_map(|&s| l.strong_succ(s, u).iter().copied()).collect();
        let mut next: BTreeMap<(StateId, StateId), ActionList> = BTreeMap::new();
        for (&(s, t), trace) in &matched {
            for &s2 in l.strong_succ(s, u) {
                if u.is_tau() && rel.contains(s2, t) {
                    next.entry((s2, t)).or_insert_with(|| trace.clone());
                }
                for &t2 in r.strong_succ(t, u) {
                    if rel.contains(s2, t2) {
                        let mut longer = trace.clone();
                        longer.push(u.clone());
                        let slot = next.entry((s2, t2)).or_insert_with(|| longer.clone());
                        if longer.len() < slot.len() {
                            *slot = longer;
                        }
                    }
                }
            }
        }
        matched = next;
    }
    Ok(left
        .into_iter()
        .map(|s| {
            let best = matched
                .iter()
                .filter(|((s1, _), _)| *s1 == s)
                .min_by_key(|(_, trace)| trace.len())
                .map(|(&(_, t), trace)| TraceTransfer {
                    left_end: l.process(s).clone(),
                    trace: trace.clone(),
                    right_end: r.process(t).clone(),
                });
            (l.process(s).clone(), best)
        })
        .collect())
}

/// Given `p ≽bis q` and a trace of `p` with at most one visible action,
/// finds a trace of `q` no longer than `acts` with the same visible
/// content. `None` when `acts` is not a trace of `p`.
pub fn contraction_trace_transfer(
    p: &Process,
    q: &Process,
    acts: &[Action],
    max_states: usize,
) -> Result<Option<(ActionList, Process)>> {
    Ok(contraction_trace_transfer_all(p, q, acts, max_states)?
        .into_iter()
        .find_map(|(_, t)| t)
        .map(|t| (t.trace, t.right_end)))
}

/// Which lemma `solution_transfer` follows.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransferLemma {
    /// Body in `wgs`, solutions for `≽bis`, context in `gcontext`; answers
    /// of `C[q]` use `⇒̂u`.
    Contraction,
    /// Body in `wg`, solutions for `≽c`, any context; answers use `⇒u`.
    RootedContraction,
}

/// One weak move of `C[p]` and its reconstruction through a context.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionTransfer {
    /// The derivative `R` with `C[p] ⇒u R`.
    pub derivative: Process,
    /// A trace from `C[p]` to `R`.
    pub trace: ActionList,
    /// Number of unfoldings of the body used.
    pub unfoldings: usize,
    /// The context `C'`, when one was found with `R ≽bis C'[p]`.
    pub context: Option<Context>,
    /// A process `Q'` with `C[q] ⇒u Q'` (hatted for the contraction lemma)
    /// and `Q' ≈ C'[q]`.
    pub answer: Option<Process>,
}

impl SolutionTransfer {
    pub fn succeeded(&self) -> bool {
        self.context.is_some() && self.answer.is_some()
    }
}

/// A shortest trace from the root to `target` performing `u` weakly: all
/// `τ` with at least one step when `u = τ`, otherwise exactly one `u`.
fn weak_trace(w: &WeakLts, target: StateId, u: &Action) -> Option<ActionList> {
    use std::collections::VecDeque;
    let start = (w.root(), false);
    let mut prev: BTreeMap<(StateId, bool), ((StateId, bool), Action)> = BTreeMap::new();
    let mut queue = VecDeque::from([start]);
    let mut seen = BTreeSet::from([start]);
    while let Some((s, done)) = queue.pop_front() {
        for (v, t) in w.succ(s) {
            let next = if v.is_tau() {
                (*t, done || u.is_tau())
            } else if v == u && !done {
                (*t, true)
            } else {
                continue;
            };
            if seen.insert(next) {
                prev.insert(next, ((s, done), v.clone()));
                if next == (target, true) {
                    let mut acts = Vec::new();
                    let mut cur = next;
                    while cur != start {
                        let (p, a) = prev[&cur].clone();
                        acts.push(a);
                        cur = p;
                    }
                    acts.reverse();
                    return Some(acts);
                }
                queue.push_back(next);
            }
        }
    }
    None
}

/// For each weak transition `C[p] ⇒u R`, reconstructs `R` up to `≽bis` as
/// `C'[p]` by unfolding the body as many times as the transition is long,
/// and checks that `C[q]` answers with a derivative weakly bisimilar to
/// `C'[q]`.
pub fn solution_transfer(
    e: &Context,
    p: &Process,
    q: &Process,
    c: &Context,
    u: &Action,
    lemma: TransferLemma,
    max_states: usize,
) -> Result<Vec<SolutionTransfer>> {
    let (ec, cc) = (e.classify(), c.classify());
    let (discipline, solution) = match lemma {
        TransferLemma::Contraction => {
            if !(ec.wgs && cc.gcontext) {
                return Err(Error::PreconditionFailed("body must be wgs and context gcontext".into()));
            }
            (Discipline::GuardedSums, RelationKind::Contraction)
        }
        TransferLemma::RootedContraction => {
            if !ec.wg {
                return Err(Error::PreconditionFailed("body must be wg".into()));
            }
            (Discipline::Unrestricted, RelationKind::RootedContraction)
        }
    };
    let spec = SystemSpec::new(e.clone(), solution);
    for (side, r) in [("p", p), ("q", q)] {
        if !is_solution(&spec, r, max_states)? {
            return Err(Error::PreconditionFailed(format!("{side} is not a {solution} solution")));
        }
    }
    let cp = c.apply(p)?;
    let cq = c.apply(q)?;
    let wp = WeakLts::explore(&cp, max_states)?;
    let wq = WeakLts::explore(&cq, max_states)?;
    let mut out = Vec::new();
    for &target in wp.weak_succ(wp.root(), u) {
        let trace = weak_trace(&wp, target, u).expect("weak successors are reachable");
        let derivative = wp.process(target).clone();
        let n = trace.len();
        let unfolded = c.compose(&e.iterate(n));
        let transfers = contraction_trace_transfer_all(&cp, &unfolded.apply(p)?, &trace, max_states)?;
        let matched = transfers
            .into_iter()
            .find(|(end, _)| *end == derivative)
            .and_then(|(_, t)| t);
        let mut context = None;
        if let Some(t) = matched {
            let candidates = unfold_decompose(c, e, n, &t.trace, discipline)?;
            for d in candidates {
                let dp = d.context.apply(p)?;
                if dp.canonical() == t.right_end || check(RelationKind::Contraction, &derivative, &dp, max_states)?.holds {
                    context = Some(d.context);
                    break;
                }
            }
        }
        let answer = match &context {
            Some(c2) => {
                let cmp = Comparison::from_systems(wq.clone(), WeakLts::explore(&c2.apply(q)?, max_states)?);
                let weak = cmp.weak_relation();
                let answers = match lemma {
                    TransferLemma::Contraction => wq.hat_succ(wq.root(), u),
                    TransferLemma::RootedContraction => wq.weak_succ(wq.root(), u),
                };
                answers
                    .iter()
                    .find(|&&s| weak.contains(s, cmp.right().root()))
                    .map(|&s| wq.process(s).clone())
            }
            None => None,
        };
        out.push(SolutionTransfer { derivative, trace, unfoldings: n, context, answer });
    }
    Ok(out)
}

/// Checks the soundness contract of a decomposition: the process trace
/// exists for the given closed process.
pub fn decomposition_trace_holds(
    c: &Context,
    e: &Context,
    n: usize,
    acts: &[Action],
    d: &Decomposition,
    q: &Process,
    budget: usize,
) -> Result<bool> {
    let start = c.compose(&e.iterate(n)).apply(q)?;
    trace_holds(&start, acts, &d.context.apply(q)?, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lts::DEFAULT_MAX_STATES as M;

    fn p(s: &str) -> Process {
        Process::parse(s).unwrap()
    }

    fn c(s: &str) -> Context {
        Context::parse(s).unwrap()
    }

    #[test]
    fn solution_examples() {
        let strong = SystemSpec::new(c("a._"), RelationKind::Strong);
        assert!(is_solution(&strong, &p("rec A. a.A"), M).unwrap());
        assert!(!is_solution(&strong, &p("a.0"), M).unwrap());
        let par = SystemSpec::new(c("a.0 | _"), RelationKind::Weak);
        assert!(is_solution(&par, &p("rec k. a.k"), M).unwrap());
        assert!(is_solution(&par, &p("(rec k. a.k) | b.0"), M).unwrap());
        let restricted = SystemSpec::new(c("nu {a} (a._ | 'a.0)"), RelationKind::Weak);
        assert!(is_solution(&restricted, &Process::Nil, M).unwrap());
        assert!(is_solution(&restricted, &p("b.0"), M).unwrap());
        assert_eq!(restricted.flavor(), Flavor::Equation);
        assert_eq!(SystemSpec::new(c("a._"), RelationKind::Contraction).flavor(), Flavor::Contraction);
    }

    #[test]
    fn unique_solution_examples() {
        let r = unique_solution(Variant::Contraction, &c("a._"), &p("rec A. a.A"), &p("rec A. a.t.A"), M).unwrap();
        assert!(r.guarantee_met());
        let r = unique_solution(Variant::Strong, &c("a._"), &p("rec A. a.A"), &p("a.(rec A. a.A)"), M).unwrap();
        assert!(r.guarantee_met());
        let err = unique_solution(Variant::WeakEquation, &c("a.0 | _"), &p("rec k. a.k"), &p("(rec k. a.k) | b.0"), M)
            .unwrap_err();
        match err {
            Error::HypothesisFailed { check, .. } => assert!(check.starts_with("body is seq")),
            other => panic!("{other:?}"),
        }
        let r = unique_solution(
            Variant::RootedContraction,
            &c("a._ + b.0"),
            &p("rec A. (a.A + b.0)"),
            &p("rec A. (a.t.A + b.0)"),
            M,
        )
        .unwrap();
        assert!(r.guarantee_met());
    }

    #[test]
    fn report_lists_checks() {
        let r = solution_report(Variant::RootedEquation, &c("nu {a} (a._ | 'a.0)"), &Process::Nil, &p("b.0"), M).unwrap();
        assert_eq!(r.failed_checks()[0], "body is seq");
        assert!(!r.failed_checks().contains(&"body is sg"));
        assert!(r.conclusion.is_none());
    }

    #[test]
    fn decompose_examples() {
        let a = Action::input("a");
        let got = unfold_decompose(&Context::Hole, &c("a._"), 1, std::slice::from_ref(&a), Discipline::GuardedSums).unwrap();
        assert_eq!(got.iter().map(|d| d.context.clone()).collect::<Vec<_>>(), vec![Context::Hole]);
        let got = unfold_decompose(&c("_ | b.0"), &c("a._"), 2, &[], Discipline::GuardedSums).unwrap();
        assert_eq!(got[0].context, c("a.a._ | b.0"));
        let got = unfold_decompose(&Context::Hole, &c("a._"), 2, std::slice::from_ref(&a), Discipline::GuardedSums).unwrap();
        assert_eq!(got[0].context, c("a._"));
        assert!(unfold_decompose(&Context::Hole, &c("a._"), 0, std::slice::from_ref(&a), Discipline::GuardedSums).is_err());
        assert!(unfold_decompose(&Context::Hole, &c("a._ + 0"), 1, &[a], Discipline::GuardedSums).is_err());
    }

    #[test]
    fn trace_transfer_examples() {
        let (t, a) = (Action::Tau, Action::input("a"));
        let got = contraction_trace_transfer(&p("a.0 + t.a.0"), &p("a.0"), &[t.clone(), a.clone()], M).unwrap();
        assert_eq!(got, Some((vec![a.clone()], Process::Nil)));
        let r = p("a.t.0 + t.b.0");
        let got = contraction_trace_transfer(&r, &r, &[t.clone(), Action::input("b")], M).unwrap();
        assert_eq!(got.unwrap().0, vec![t.clone(), Action::input("b")]);
        let got = contraction_trace_transfer(&p("t.t.0"), &Process::Nil, &[t.clone(), t.clone()], M).unwrap();
        assert_eq!(got, Some((vec![], Process::Nil)));
        assert!(matches!(
            contraction_trace_transfer(&p("a.0"), &p("t.a.0"), std::slice::from_ref(&a), M),
            Err(Error::PreconditionFailed(_))
        ));
        assert!(matches!(
            contraction_trace_transfer(&p("a.a.0"), &p("a.a.0"), &[a.clone(), a], M),
            Err(Error::PreconditionFailed(_))
        ));
    }

    #[test]
    fn reflexive_transfer_keeps_trace() {
        let r = p("t.a.0 + a.t.0");
        let acts = vec![Action::Tau, Action::input("a")];
        let got = contraction_trace_transfer(&r, &r, &acts, M).unwrap().unwrap();
        assert!(got.0.len() <= acts.len());
        assert!(trace_holds(&r, &got.0, &got.1, 100).unwrap());
    }

    #[test]
    fn solution_transfer_examples() {
        let a = Action::input("a");
        let got = solution_transfer(
            &c("a._"),
            &p("rec A. a.A"),
            &p("rec A. a.t.A"),
            &Context::Hole,
            &a,
            TransferLemma::Contraction,
            M,
        )
        .unwrap();
        assert_eq!(got.len(), 1);
        assert!(got[0].succeeded());
        assert_eq!(got[0].context, Some(Context::Hole));

        let none = solution_transfer(
            &c("a._"),
            &p("rec A. a.A"),
            &p("rec A. a.t.A"),
            &Context::Hole,
            &Action::input("b"),
            TransferLemma::Contraction,
            M,
        )
        .unwrap();
        assert!(none.is_empty());

        let leaf = solution_transfer(
            &c("a._"),
            &p("rec A. a.A"),
            &p("rec A. a.t.A"),
            &Context::leaf(p("t.b.0")),
            &Action::input("b"),
            TransferLemma::Contraction,
            M,
        )
        .unwrap();
        assert!(leaf.iter().all(|t| t.succeeded() && !t.context.as_ref().unwrap().has_hole()));
    }

    #[test]
    fn rooted_solution_transfer() {
        let got = solution_transfer(
            &c("a._ + b.0"),
            &p("rec A. (a.A + b.0)"),
            &p("rec A. (a.t.A + b.0)"),
            &c("_ | 'a.0"),
            &Action::Tau,
            TransferLemma::RootedContraction,
            M,
        )
        .unwrap();
        assert!(!got.is_empty());
        assert!(got.iter().all(SolutionTransfer::succeeded));
    }
}
