//! Randomized property checks over generated processes, pairs and
//! contexts. Every case is seeded from the run seed and its index, so runs
//! are reproducible and cases can be evaluated in parallel.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use rayon::prelude::*;

use crate::congruence::{
    composition_closure_bounded, decide_rooted_contraction_via_sum, decide_rooted_via_sum, hennessy_deng_check,
    sum_equiv_bounded, ClosureRelation,
};
use crate::context::context_step;
use crate::equiv::{check, clauses, partition, Comparison, PairRelation, RelationKind};
use crate::error::{Error, Result};
use crate::gen::{solution_candidates, ContextClass, Gen};
use crate::lts::{explore, Lts, StateId, WeakLts};
use crate::semantics::{no_label, step, trace_holds, unique_label, ActionList};
use crate::solutions::{
    contraction_trace_transfer_in, is_solution, solution_report, solution_transfer, unfold_decompose, Discipline,
    SystemSpec, TransferLemma, Variant,
};
use crate::syntax::{Action, Process};
use crate::context::Context;

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    pub cases: usize,
    pub max_states: usize,
    /// Nesting depth of generated processes.
    pub depth: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { seed: 42, cases: 100, max_states: 2000, depth: 4 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyReport {
    pub name: String,
    pub cases: usize,
    pub passed: usize,
    /// Cases whose state spaces exceeded the budget.
    pub skipped: usize,
    pub failures: Vec<String>,
}

impl PropertyReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<36} {:>5}/{:<5} passed, {} skipped, {} failed",
            self.name,
            self.passed,
            self.cases,
            self.skipped,
            self.failures.len()
        )
    }
}

enum Outcome {
    Pass,
    Skip,
    Fail(String),
}

fn is_budget(e: &Error) -> bool {
    matches!(e, Error::StateBudgetExceeded { .. } | Error::BudgetExceeded(_))
}

fn name_seed(name: &str) -> u64 {
    name.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3))
}

fn run<F>(name: &str, cfg: &SuiteConfig, case: F) -> PropertyReport
where
    F: Fn(&mut Gen, &SuiteConfig) -> Result<Outcome> + Sync,
{
    let seed = cfg.seed ^ name_seed(name);
    let outcomes: Vec<Outcome> = (0..cfg.cases)
        .into_par_iter()
        .map(|i| {
            let mut g = Gen::for_case(seed, i as u64);
            match case(&mut g, cfg) {
                Ok(o) => o,
                Err(e) if is_budget(&e) => Outcome::Skip,
                Err(e) => Outcome::Fail(format!("case {i}: {e}")),
            }
        })
        .collect();
    let mut report = PropertyReport { name: name.to_string(), cases: cfg.cases, passed: 0, skipped: 0, failures: Vec::new() };
    for o in outcomes {
        match o {
            Outcome::Pass => report.passed += 1,
            Outcome::Skip => report.skipped += 1,
            Outcome::Fail(msg) => report.failures.push(msg),
        }
    }
    report
}

fn expect(cond: bool, msg: impl FnOnce() -> String) -> Result<Outcome> {
    Ok(if cond { Outcome::Pass } else { Outcome::Fail(msg()) })
}

pub fn round_trip(cfg: &SuiteConfig) -> PropertyReport {
    run("round-trip", cfg, |g, cfg| {
        let p = g.process(cfg.depth);
        let back = Process::parse(&p.to_string())?;
        expect(back == p, || format!("{p} reparsed as {back}"))
    })
}

pub fn step_laws(cfg: &SuiteConfig) -> PropertyReport {
    run("step-laws", cfg, |g, cfg| {
        let (p, q) = (g.process(cfg.depth - 1), g.process(cfg.depth - 1));
        if step(&Process::sum(p.clone(), q.clone()))? != step(&Process::sum(q.clone(), p.clone()))? {
            return Ok(Outcome::Fail(format!("sum of {p} and {q} is not symmetric")));
        }
        let swap = |r: &Process| match r {
            Process::Par(a, b) => Process::Par(b.clone(), a.clone()).canonical(),
            other => other.clone(),
        };
        let pq: BTreeSet<_> = step(&Process::par(p.clone(), q.clone()))?.into_iter().map(|(u, r)| (u, swap(&r))).collect();
        if pq != step(&Process::par(q.clone(), p.clone()))? {
            return Ok(Outcome::Fail(format!("par of {p} and {q} is not symmetric")));
        }
        let x = g.alphabet()[0].clone();
        let restricted = step(&Process::restr([x.clone()], p.clone()))?;
        if restricted.iter().any(|(u, _)| u.label().is_some_and(|l| l.name == x)) {
            return Ok(Outcome::Fail(format!("restriction leaks {x} from {p}")));
        }
        let rf = crate::syntax::Relabeling::from_pairs([(x, g.alphabet()[1].clone())]).expect("single pair");
        let expected: BTreeSet<_> =
            step(&p)?.into_iter().map(|(u, r)| (rf.apply(&u), Process::relab(r, rf.clone()).canonical())).collect();
        expect(expected == step(&Process::relab(p.clone(), rf))?, || format!("relabeling of {p}"))
    })
}

/// Inclusions between the six relations on random pairs.
pub fn relation_inclusions(cfg: &SuiteConfig) -> PropertyReport {
    run("relation-inclusions", cfg, |g, cfg| {
        let (p, q) = g.pair(cfg.depth);
        let cmp = Comparison::new(&p, &q, cfg.max_states)?;
        let h = |k| cmp.verdict(k).holds;
        use RelationKind::*;
        let (s, w, r, e, c, rc) = (h(Strong), h(Weak), h(Rooted), h(Expansion), h(Contraction), h(RootedContraction));
        let back = Comparison::new(&q, &p, cfg.max_states)?.verdict(RootedContraction).holds;
        let mut broken = Vec::new();
        for (ok, what) in [
            (!s || r, "strong ⊆ rooted"),
            (!r || w, "rooted ⊆ weak"),
            (!e || c, "expansion ⊆ contraction"),
            (!c || w, "contraction ⊆ weak"),
            (!rc || c, "rooted contraction ⊆ contraction"),
            (!(rc && back) || r, "mutual rooted contraction ⊆ rooted"),
        ] {
            if !ok {
                broken.push(what);
            }
        }
        expect(broken.is_empty(), || format!("{p} vs {q}: {}", broken.join(", ")))
    })
}

/// Reflexivity and transitivity of every relation, symmetry of the
/// equivalences, on chains of perturbed processes.
pub fn relation_laws(cfg: &SuiteConfig) -> PropertyReport {
    run("relation-laws", cfg, |g, cfg| {
        let x = g.process(cfg.depth);
        let y = g.perturb(&x);
        let z = g.perturb(&y);
        let h = |k, a: &Process, b: &Process| check(k, a, b, cfg.max_states).map(|v| v.holds);
        for k in RelationKind::ALL {
            if !h(k, &x, &x)? {
                return Ok(Outcome::Fail(format!("{k} not reflexive on {x}")));
            }
            if h(k, &x, &y)? && h(k, &y, &z)? && !h(k, &x, &z)? {
                return Ok(Outcome::Fail(format!("{k} not transitive on {x}, {y}, {z}")));
            }
            if !k.is_preorder() && h(k, &x, &y)? != h(k, &y, &x)? {
                return Ok(Outcome::Fail(format!("{k} not symmetric on {x}, {y}")));
            }
        }
        Ok(Outcome::Pass)
    })
}

/// Strong and rooted bisimilarity and rooted contraction are preserved by
/// every context, weak bisimilarity by contexts with guarded sums only.
pub fn congruence(cfg: &SuiteConfig) -> PropertyReport {
    run("congruence", cfg, |g, cfg| {
        let (x, y) = g.pair(cfg.depth - 1);
        let c = g.context(ContextClass::Any, 3);
        let (cx, cy) = (c.apply(&x)?, c.apply(&y)?);
        let (before, after) = (Comparison::new(&x, &y, cfg.max_states)?, Comparison::new(&cx, &cy, cfg.max_states)?);
        let gcontext = c.classify().gcontext;
        for k in [RelationKind::Strong, RelationKind::Rooted, RelationKind::RootedContraction, RelationKind::Weak] {
            if (k != RelationKind::Weak || gcontext) && before.verdict(k).holds && !after.verdict(k).holds {
                return Ok(Outcome::Fail(format!("{k} of {x} and {y} lost under {c}")));
            }
        }
        Ok(Outcome::Pass)
    })
}

/// Rooted bisimilarity implies closure under small contexts, which implies
/// agreement under sums; closure includes the empty context, so it implies
/// weak bisimilarity.
pub fn closure_chain(cfg: &SuiteConfig) -> PropertyReport {
    run("closure-chain", cfg, |g, cfg| {
        let (x, y) = g.pair(cfg.depth - 1);
        let alphabet = g.alphabet().to_vec();
        let closed = composition_closure_bounded(ClosureRelation::Weak, &x, &y, 1, &alphabet, cfg.max_states)?;
        let rooted = check(RelationKind::Rooted, &x, &y, cfg.max_states)?.holds;
        let probes: Vec<Process> = (0..3).map(|_| g.process(2)).collect();
        let sums = sum_equiv_bounded(&x, &y, &probes, cfg.max_states)?;
        let weak = check(RelationKind::Weak, &x, &y, cfg.max_states)?.holds;
        let ok = (!rooted || closed.is_confirmed()) && (!closed.is_confirmed() || (sums.is_confirmed() && weak));
        expect(ok, || format!("{x} vs {y}: rooted {rooted}, closure {closed:?}, sums {sums:?}"))
    })
}

/// The fixpoint engine agrees with partition refinement.
pub fn partition_agreement(cfg: &SuiteConfig) -> PropertyReport {
    run("partition-agreement", cfg, |g, cfg| {
        let (p, q) = g.pair(cfg.depth);
        let cmp = Comparison::new(&p, &q, cfg.max_states)?;
        let (sl, sr) = partition::strong_classes(cmp.left().base(), cmp.right().base());
        let (wl, wr) = partition::weak_classes(cmp.left(), cmp.right());
        let (strong, weak) = (cmp.relation(RelationKind::Strong).unwrap(), cmp.weak_relation());
        for s in 0..cmp.left().len() {
            for t in 0..cmp.right().len() {
                if strong.contains(s, t) != (sl[s] == sr[t]) || weak.contains(s, t) != (wl[s] == wr[t]) {
                    return Ok(Outcome::Fail(format!("{p} vs {q} at ({s}, {t})")));
                }
            }
        }
        Ok(Outcome::Pass)
    })
}

/// The weak bisimilarity relation is itself a bisimulation, and every
/// clause-closed relation lies inside it.
pub fn weak_fixpoint(cfg: &SuiteConfig) -> PropertyReport {
    run("weak-fixpoint", cfg, |g, cfg| {
        let (p, q) = g.pair(cfg.depth);
        let cmp = Comparison::new(&p, &q, cfg.max_states)?;
        let (l, r) = (cmp.left().base(), cmp.right().base());
        let gfp = cmp.weak_relation();
        if let Some(f) = clauses::weak_failure(l, r, &gfp.to_set()) {
            return Ok(Outcome::Fail(format!("{p} vs {q}: witness not closed at {:?}", f.pair)));
        }
        let candidate = closed_subrelation(g, l, r);
        let rel = PairRelation::from_pairs(l.len(), r.len(), candidate.iter().copied());
        expect(rel.is_subset(gfp), || format!("{p} vs {q}: closed relation {candidate:?} escapes the fixpoint"))
    })
}

/// A random set of pairs pruned with the independent clause checker until
/// it is a weak bisimulation.
pub fn closed_subrelation(g: &mut Gen, l: &Lts, r: &Lts) -> BTreeSet<(StateId, StateId)> {
    let mut rel: BTreeSet<(StateId, StateId)> =
        (0..l.len()).flat_map(|s| (0..r.len()).map(move |t| (s, t))).filter(|_| g.chance(0.7)).collect();
    while let Some(f) = clauses::weak_failure(l, r, &rel) {
        rel.remove(&f.pair);
    }
    rel
}

pub fn rooted_via_sum(cfg: &SuiteConfig) -> PropertyReport {
    run("rooted-via-sum", cfg, |g, cfg| {
        let (p, q) = g.pair(cfg.depth);
        let direct = Comparison::new(&p, &q, cfg.max_states)?.verdict(RelationKind::Rooted).holds;
        let via = decide_rooted_via_sum(&p, &q, cfg.max_states)?;
        expect(direct == via, || format!("{p} vs {q}: rooted {direct}, via sum {via}"))
    })
}

pub fn rooted_contraction_via_sum(cfg: &SuiteConfig) -> PropertyReport {
    run("rooted-contraction-via-sum", cfg, |g, cfg| {
        let (p, q) = g.pair(cfg.depth);
        let direct = Comparison::new(&p, &q, cfg.max_states)?.verdict(RelationKind::RootedContraction).holds;
        let via = decide_rooted_contraction_via_sum(&p, &q, cfg.max_states)?;
        expect(direct == via, || format!("{p} vs {q}: rooted contraction {direct}, via sum {via}"))
    })
}

pub fn hennessy_deng(cfg: &SuiteConfig) -> PropertyReport {
    run("hennessy-deng", cfg, |g, cfg| {
        let (p, q) = g.pair(cfg.depth);
        let r = hennessy_deng_check(&p, &q, cfg.max_states)?;
        expect(r.biconditional_holds(), || format!("{p} vs {q}: {r:?}"))
    })
}

/// States reachable from `s` by a nonempty path performing `u` weakly,
/// each with one such path, found by breadth-first search over pairs
/// (state, visible action seen).
pub fn weak_reach_witnesses(lts: &Lts, s: StateId, u: &Action) -> BTreeMap<StateId, ActionList> {
    let mut out = BTreeMap::new();
    let mut seen = BTreeSet::new();
    let mut queue: VecDeque<(StateId, bool, ActionList)> = VecDeque::new();
    for (v, t) in lts.succ(s) {
        let next = if v.is_tau() {
            (*t, u.is_tau())
        } else if v == u {
            (*t, true)
        } else {
            continue;
        };
        if seen.insert(next) {
            queue.push_back((next.0, next.1, vec![v.clone()]));
        }
    }
    while let Some((t, done, path)) = queue.pop_front() {
        if done {
            out.entry(t).or_insert_with(|| path.clone());
        }
        for (v, t2) in lts.succ(t) {
            let next = if v.is_tau() {
                (*t2, done)
            } else if v == u && !done && !u.is_tau() {
                (*t2, true)
            } else {
                continue;
            };
            if seen.insert(next) {
                let mut p2 = path.clone();
                p2.push(v.clone());
                queue.push_back((next.0, next.1, p2));
            }
        }
    }
    out
}

fn lts_trace_holds(lts: &Lts, s: StateId, acts: &[Action], t: StateId) -> bool {
    let mut frontier = BTreeSet::from([s]);
    for u in acts {
        frontier = frontier
            .iter()
            .flat_map(|&x| lts.succ(x).iter().filter(|(v, _)| v == u).map(|(_, y)| *y))
            .collect();
    }
    frontier.contains(&t)
}

/// Weak transitions of the saturated system coincide with nonempty traces
/// that contain no visible action (for `τ`) or exactly the one visible
/// action (for a label).
pub fn check_trace_correspondence(w: &WeakLts) -> Result<Option<String>> {
    let base = w.base();
    let mut actions: Vec<Action> = base.labels().into_iter().map(Action::Visible).collect();
    actions.push(Action::Tau);
    for s in 0..w.len() {
        for u in &actions {
            let witnesses = weak_reach_witnesses(base, s, u);
            let saturated: BTreeSet<StateId> = w.weak_succ(s, u).iter().copied().collect();
            if saturated != witnesses.keys().copied().collect::<BTreeSet<_>>() {
                return Ok(Some(format!("state {} action {u}: targets differ", w.process(s))));
            }
            for (&t, acts) in &witnesses {
                let shape = if u.is_tau() { no_label(acts) } else { unique_label(u, acts)? };
                let valid = !acts.is_empty() && shape && lts_trace_holds(base, s, acts, t);
                let valid = valid && (s != w.root() || trace_holds(w.process(s), acts, w.process(t), 10_000)?);
                if !valid {
                    return Ok(Some(format!("state {} action {u}: bad witness {acts:?}", w.process(s))));
                }
            }
        }
    }
    Ok(None)
}

pub fn trace_correspondence(cfg: &SuiteConfig) -> PropertyReport {
    run("trace-correspondence", cfg, |g, cfg| {
        let p = g.process(cfg.depth);
        let w = WeakLts::explore(&p, cfg.max_states.min(50))?;
        Ok(match check_trace_correspondence(&w)? {
            None => Outcome::Pass,
            Some(msg) => Outcome::Fail(format!("{p}: {msg}")),
        })
    })
}

/// Traces of length at most `max_len` with no visible action or exactly
/// one, over the given labels.
pub fn label_disciplined_traces(labels: &[Action], max_len: usize) -> Vec<ActionList> {
    let mut out = Vec::new();
    for len in 0..=max_len {
        out.push(vec![Action::Tau; len]);
        for i in 0..len {
            for l in labels {
                let mut acts = vec![Action::Tau; len];
                acts[i] = l.clone();
                out.push(acts);
            }
        }
    }
    out
}

/// Every trace of the contracting process is matched by a trace of the
/// contracted one that is no longer, has the same visible content, and
/// ends in a contraction-related state.
pub fn check_trace_transfer(cmp: &Comparison, max_len: usize) -> Result<Option<String>> {
    let labels: Vec<Action> = cmp.left().base().labels().into_iter().map(Action::Visible).collect();
    let rel = cmp.contraction_relation();
    let (l, r) = (cmp.left(), cmp.right());
    for acts in label_disciplined_traces(&labels, max_len) {
        for (end, found) in contraction_trace_transfer_in(cmp, &acts)? {
            let Some(t) = found else {
                return Ok(Some(format!("no transfer of {acts:?} ending in {end}")));
            };
            let visible = |xs: &[Action]| xs.iter().filter(|u| !u.is_tau()).cloned().collect::<Vec<_>>();
            let (s2, t2) = (l.base().state_of(&t.left_end), r.base().state_of(&t.right_end));
            let related = matches!((s2, t2), (Some(a), Some(b)) if rel.contains(a, b));
            let walk = lts_trace_holds(r.base(), r.root(), &t.trace, t2.unwrap_or(usize::MAX));
            if t.trace.len() > acts.len() || visible(&t.trace) != visible(&acts) || !related || !walk {
                return Ok(Some(format!("bad transfer of {acts:?}: {:?} to {}", t.trace, t.right_end)));
            }
        }
    }
    Ok(None)
}

pub fn trace_transfer(cfg: &SuiteConfig) -> PropertyReport {
    run("trace-transfer", cfg, |g, cfg| {
        let (p, q) = g.pair(cfg.depth);
        let mut cmp = Comparison::new(&p, &q, cfg.max_states)?;
        if !cmp.verdict(RelationKind::Contraction).holds {
            cmp = Comparison::new(&q, &p, cfg.max_states)?;
        }
        if !cmp.verdict(RelationKind::Contraction).holds {
            cmp = Comparison::new(&p, &p, cfg.max_states)?;
        }
        Ok(match check_trace_transfer(&cmp, 6)? {
            None => Outcome::Pass,
            Some(msg) => Outcome::Fail(format!("{p} vs {q}: {msg}")),
        })
    })
}

/// Guardedness classes respect their implications on random contexts.
pub fn classifier_lattice(cfg: &SuiteConfig) -> PropertyReport {
    run("classifier-lattice", cfg, |g, _| {
        let c = g.context(ContextClass::Any, 4);
        let k = c.classify();
        let ok = (!k.wgs || (k.wg && k.gcontext)) && (!k.sg || k.wg) && k.context;
        expect(ok, || format!("{c}: {k}"))
    })
}

/// Context transitions are sound for every filling, and complete for weakly
/// guarded contexts.
pub fn context_transitions(cfg: &SuiteConfig) -> PropertyReport {
    run("context-transitions", cfg, |g, cfg| {
        let c = g.context(ContextClass::Any, 3);
        let p = g.process(cfg.depth - 1);
        let filled = step(&c.apply(&p)?)?;
        let from_context: BTreeSet<(Action, Process)> = context_step(&c)?
            .into_iter()
            .map(|(u, c2)| Ok((u, c2.apply(&p)?.canonical())))
            .collect::<Result<_>>()?;
        if !from_context.is_subset(&filled) {
            return Ok(Outcome::Fail(format!("{c} with {p}: unsound context move")));
        }
        expect(!c.classify().wg || from_context == filled, || format!("{c} with {p}: hole moved first"))
    })
}

/// Traces of `c ∘ eⁿ` filled with any process, up to length `n`, are all
/// produced by context transitions.
pub fn unfolding(cfg: &SuiteConfig) -> PropertyReport {
    run("unfolding", cfg, |g, cfg| {
        let e = g.context(ContextClass::Wgs, 2);
        let c = if g.chance(0.5) { Context::Hole } else { g.context(ContextClass::Wgs, 2) };
        let n = 1 + g.below(2);
        let q = g.process(2);
        let start = c.compose(&e.iterate(n)).apply(&q)?;
        let lts = explore(&start, cfg.max_states)?;
        let mut paths: Vec<(StateId, ActionList)> = vec![(lts.root(), Vec::new())];
        for _ in 0..n {
            let mut next = Vec::new();
            for (s, acts) in &paths {
                for (u, t) in lts.succ(*s) {
                    let mut a2 = acts.clone();
                    a2.push(u.clone());
                    next.push((*t, a2));
                }
            }
            for (t, acts) in &next {
                let ends: BTreeSet<Process> = unfold_decompose(&c, &e, n, acts, Discipline::GuardedSums)?
                    .into_iter()
                    .map(|d| Ok(d.context.apply(&q)?.canonical()))
                    .collect::<Result<_>>()?;
                if !ends.contains(lts.process(*t)) {
                    return Ok(Outcome::Fail(format!("{c} ∘ ({e})^{n} with {q}: {acts:?} not decomposed")));
                }
            }
            paths = next;
        }
        Ok(Outcome::Pass)
    })
}

fn suite_name(variant: Variant) -> String {
    format!("unique-solution-{}", variant.name())
}

fn body_class(variant: Variant) -> ContextClass {
    match variant {
        Variant::Strong | Variant::RootedContraction => ContextClass::Wg,
        Variant::WeakEquation | Variant::RootedEquation => ContextClass::SgSeq,
        Variant::Contraction => ContextClass::Wgs,
    }
}

/// Whether a hole lies beneath a parallel, restriction or relabeling
/// operator. Fixpoints of such bodies grow without bound.
pub fn hole_under_static(c: &Context, below: bool) -> bool {
    match c {
        Context::Hole => below,
        Context::Leaf(_) => false,
        Context::Prefix(_, c) => hole_under_static(c, below),
        Context::Sum(l, r) => hole_under_static(l, below) || hole_under_static(r, below),
        Context::Par(l, r) => hole_under_static(l, true) || hole_under_static(r, true),
        Context::Restr(_, c) | Context::Relab(c, _) => hole_under_static(c, true),
    }
}

/// Fixpoint-derived candidates, random processes, and fixpoints of the body
/// widened by a random summand.
pub fn candidates(g: &mut Gen, body: &Context) -> Vec<Process> {
    let mut out = solution_candidates(g, body, 2);
    for _ in 0..3 {
        out.push(g.process(2));
    }
    for _ in 0..2 {
        let extra = Context::leaf(g.process(2));
        out.extend(solution_candidates(g, &Context::sum(body.clone(), extra), 0).into_iter().take(2));
    }
    let mut seen = BTreeSet::new();
    out.retain(|p| seen.insert(p.canonical()));
    out
}

/// One generated case: a body of the variant's class and two solutions
/// drawn from its candidate set. Returns `None` when no case fits within
/// the state budget.
pub fn solution_case(g: &mut Gen, variant: Variant, max_states: usize) -> Result<Option<(Context, Process, Process)>> {
    for _ in 0..25 {
        let body = g.context(body_class(variant), 3);
        if hole_under_static(&body, false) {
            continue;
        }
        let spec = SystemSpec::new(body.clone(), variant.solution_relation());
        let mut solutions = Vec::new();
        let mut fits = true;
        for cand in candidates(g, &body) {
            match is_solution(&spec, &cand, max_states) {
                Ok(true) => solutions.push(cand),
                Ok(false) => {}
                Err(e) if is_budget(&e) => {
                    fits = false;
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        if !fits || solutions.is_empty() {
            continue;
        }
        let i = g.below(solutions.len());
        let j = if solutions.len() > 1 {
            (i + 1 + g.below(solutions.len() - 1)) % solutions.len()
        } else {
            i
        };
        return Ok(Some((body, solutions[i].clone(), solutions[j].clone())));
    }
    Ok(None)
}

pub fn unique_solution_suite(variant: Variant, cfg: &SuiteConfig) -> PropertyReport {
    run(&suite_name(variant), cfg, move |g, cfg| {
        let Some((body, p, q)) = solution_case(g, variant, cfg.max_states)? else {
            return Ok(Outcome::Skip);
        };
        let report = solution_report(variant, &body, &p, &q, cfg.max_states)?;
        expect(report.guarantee_met(), || {
            format!("body {body}, solutions {p} and {q}: failed {:?}, conclusion {:?}", report.failed_checks(), report.conclusion.as_ref().map(|v| v.holds))
        })
    })
}

/// Every weak move of `C[p]` is reconstructed through a
/// context and answered by `C[q]`.
pub fn solution_transfer_suite(cfg: &SuiteConfig) -> PropertyReport {
    run("solution-transfer", cfg, |g, cfg| {
        let Some((body, p, q)) = solution_case(g, Variant::Contraction, cfg.max_states)? else {
            return Ok(Outcome::Skip);
        };
        let u = if g.chance(0.3) { Action::Tau } else { g.visible() };
        let transfers = solution_transfer(&body, &p, &q, &Context::Hole, &u, TransferLemma::Contraction, cfg.max_states)?;
        expect(transfers.iter().all(|t| t.succeeded()), || format!("body {body}, {p} and {q} on {u}"))
    })
}

/// Every property, in reporting order.
pub fn run_all(cfg: &SuiteConfig) -> Vec<PropertyReport> {
    let mut out = vec![
        round_trip(cfg),
        step_laws(cfg),
        relation_inclusions(cfg),
        relation_laws(cfg),
        congruence(cfg),
        closure_chain(cfg),
        partition_agreement(cfg),
        weak_fixpoint(cfg),
        rooted_via_sum(cfg),
        rooted_contraction_via_sum(cfg),
        hennessy_deng(cfg),
        trace_correspondence(cfg),
        trace_transfer(cfg),
        classifier_lattice(cfg),
        context_transitions(cfg),
        unfolding(cfg),
    ];
    for v in Variant::ALL {
        out.push(unique_solution_suite(v, cfg));
    }
    out.push(solution_transfer_suite(cfg));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn witnesses_match_saturation() {
        let w = WeakLts::explore(&Process::parse("t.a.t.0 + 'b.0").unwrap(), 100).unwrap();
        assert_eq!(check_trace_correspondence(&w).unwrap(), None);
    }

    #[test]
    fn disciplined_traces() {
        let ts = label_disciplined_traces(&[Action::input("a")], 2);
        assert_eq!(ts.len(), 1 + 2 + 3);
    }

    #[test]
    fn small_run_passes() {
        let cfg = SuiteConfig { cases: 8, ..SuiteConfig::default() };
        for r in run_all(&cfg) {
            assert!(r.ok(), "{r}: {:?}", r.failures);
        }
    }
}
