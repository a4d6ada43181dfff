//! Seeded random generation of processes, process pairs, contexts of a
//! given guardedness class, and solution candidates.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::context::{Classification, Context};
use crate::syntax::{Action, Label, Name, Process, Relabeling};

/// Seed of case `index` in a run seeded by `seed`.
pub fn case_seed(seed: u64, index: u64) -> u64 {
    // SplitMix64 finalizer over the pair.
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Context classes with a dedicated generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ContextClass {
    Any,
    Wg,
    Wgs,
    SgSeq,
}

impl ContextClass {
    pub fn admits(self, c: &Classification) -> bool {
        match self {
            ContextClass::Any => c.context,
            ContextClass::Wg => c.wg,
            ContextClass::Wgs => c.wgs,
            ContextClass::SgSeq => c.sg && c.seq,
        }
    }
}

pub struct Gen {
    rng: ChaCha8Rng,
    alphabet: Vec<Name>,
}

fn name(s: &str) -> Name {
    Name::new(s).expect("valid identifier")
}

impl Gen {
    /// Generator over the two-name alphabet `{a, b}`.
    pub fn new(seed: u64) -> Gen {
        Gen::with_alphabet(seed, vec![name("a"), name("b")])
    }

    pub fn with_alphabet(seed: u64, alphabet: Vec<Name>) -> Gen {
        assert!(!alphabet.is_empty(), "alphabet must be nonempty");
        Gen { rng: ChaCha8Rng::seed_from_u64(seed), alphabet }
    }

    pub fn for_case(seed: u64, index: u64) -> Gen {
        Gen::new(case_seed(seed, index))
    }

    pub fn alphabet(&self) -> &[Name] {
        &self.alphabet
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.rng.random_bool(p)
    }

    fn pick_name(&mut self) -> Name {
        let i = self.below(self.alphabet.len());
        self.alphabet[i].clone()
    }

    pub fn visible(&mut self) -> Action {
        let n = self.pick_name();
        if self.chance(0.5) {
            Action::Visible(Label::input(n))
        } else {
            Action::Visible(Label::output(n))
        }
    }

    /// A visible action with probability 4/5, otherwise `τ`.
    pub fn action(&mut self) -> Action {
        if self.below(5) == 0 {
            Action::Tau
        } else {
            self.visible()
        }
    }

    fn restriction(&mut self) -> Name {
        self.pick_name()
    }

    fn relabeling(&mut self) -> Relabeling {
        let from = self.pick_name();
        let to = self.pick_name();
        Relabeling::from_pairs([(from, to)]).expect("single pair")
    }

    /// A closed process of nesting depth at most `depth` whose recursion is
    /// guarded and finite-state: bodies of `rec` use only prefix, sum,
    /// nested `rec`, and closed subterms.
    pub fn process(&mut self, depth: usize) -> Process {
        self.closed(depth)
    }

    fn closed(&mut self, depth: usize) -> Process {
        if depth == 0 {
            return Process::Nil;
        }
        match self.below(12) {
            0 => Process::Nil,
            1..=3 => {
                let u = self.action();
                Process::prefix(u, self.closed(depth - 1))
            }
            4 | 5 => Process::sum(self.closed(depth - 1), self.closed(depth - 1)),
            6 | 7 => Process::par(self.closed(depth - 1), self.closed(depth - 1)),
            8 => {
                let x = self.restriction();
                Process::restr([x], self.closed(depth - 1))
            }
            9 => {
                let rf = self.relabeling();
                Process::relab(self.closed(depth - 1), rf)
            }
            _ => {
                let mut env = Vec::new();
                self.rec(depth, &mut env)
            }
        }
    }

    /// `rec X. body` where `X` (and outer binders in `env`) occur only
    /// beneath a prefix.
    fn rec(&mut self, depth: usize, env: &mut Vec<(Name, bool)>) -> Process {
        let x = name(&format!("X{}", env.len()));
        env.push((x.clone(), false));
        let body = self.rec_body(depth - 1, env);
        env.pop();
        Process::rec(x, body)
    }

    fn rec_body(&mut self, depth: usize, env: &mut Vec<(Name, bool)>) -> Process {
        let guarded: Vec<Name> = env.iter().filter(|(_, g)| *g).map(|(n, _)| n.clone()).collect();
        if depth == 0 {
            return match guarded.is_empty() {
                true => Process::Nil,
                false => Process::Var(guarded[self.below(guarded.len())].clone()),
            };
        }
        match self.below(10) {
            0 if !guarded.is_empty() => Process::Var(guarded[self.below(guarded.len())].clone()),
            0 | 1 => self.closed(depth - 1),
            2..=5 => {
                let u = self.action();
                let saved: Vec<bool> = env.iter().map(|(_, g)| *g).collect();
                env.iter_mut().for_each(|(_, g)| *g = true);
                let body = self.rec_body(depth - 1, env);
                env.iter_mut().zip(saved).for_each(|((_, g), s)| *g = s);
                Process::prefix(u, body)
            }
            6..=8 => Process::sum(self.rec_body(depth - 1, env), self.rec_body(depth - 1, env)),
            _ => self.rec(depth, env),
        }
    }

    /// A pair: usually a process and a perturbation of it, sometimes two
    /// independent processes.
    pub fn pair(&mut self, depth: usize) -> (Process, Process) {
        let p = self.process(depth);
        let q = match self.below(10) {
            0 | 1 => self.process(depth),
            2 => p.clone(),
            _ => {
                let steps = 1 + self.below(2);
                (0..steps).fold(p.clone(), |acc, _| self.perturb(&acc))
            }
        };
        if self.chance(0.5) {
            (p, q)
        } else {
            (q, p)
        }
    }

    /// Applies one local rewrite at a random node. Most rewrites preserve
    /// weak bisimilarity or one of the preorders; some change behaviour.
    pub fn perturb(&mut self, p: &Process) -> Process {
        let target = self.below(p.size());
        let kind = self.below(8);
        let mut counter = 0;
        self.rewrite(p, target, kind, &mut counter)
    }

    fn rewrite(&mut self, p: &Process, target: usize, kind: usize, counter: &mut usize) -> Process {
        let here = *counter == target;
        *counter += 1;
        if here {
            return self.rewrite_here(p, kind);
        }
        match p {
            Process::Nil | Process::Var(_) => p.clone(),
            Process::Prefix(u, q) => Process::prefix(u.clone(), self.rewrite(q, target, kind, counter)),
            Process::Sum(l, r) => {
                let l2 = self.rewrite(l, target, kind, counter);
                Process::sum(l2, self.rewrite(r, target, kind, counter))
            }
            Process::Par(l, r) => {
                let l2 = self.rewrite(l, target, kind, counter);
                Process::par(l2, self.rewrite(r, target, kind, counter))
            }
            Process::Restr(names, q) => {
                Process::restr(names.iter().cloned(), self.rewrite(q, target, kind, counter))
            }
            Process::Relab(q, rf) => Process::relab(self.rewrite(q, target, kind, counter), rf.clone()),
            Process::Rec(x, q) => Process::rec(x.clone(), self.rewrite(q, target, kind, counter)),
        }
    }

    fn rewrite_here(&mut self, p: &Process, kind: usize) -> Process {
        match (kind, p) {
            (0, Process::Prefix(u, q)) => Process::prefix(u.clone(), Process::tau((**q).clone())),
            (0, _) | (1, _) => Process::tau(p.clone()),
            (2, _) => Process::sum(p.clone(), Process::tau(p.clone())),
            (3, _) => Process::sum(p.clone(), p.clone()),
            (4, Process::Sum(l, r)) => Process::Sum(r.clone(), l.clone()),
            (4, Process::Par(l, r)) => Process::Par(r.clone(), l.clone()),
            (5, Process::Sum(l, _)) => (**l).clone(),
            (6, Process::Prefix(_, q)) => {
                let u = self.action();
                Process::Prefix(u, q.clone())
            }
            (7, Process::Prefix(u, q)) if !u.is_tau() => {
                Process::sum(p.clone(), Process::prefix(u.clone(), Process::tau((**q).clone())))
            }
            _ => Process::sum(p.clone(), Process::tau(p.clone())),
        }
    }

    /// A context of nesting depth at most `depth` in the given class,
    /// containing at least one hole.
    pub fn context(&mut self, class: ContextClass, depth: usize) -> Context {
        loop {
            let c = match class {
                ContextClass::Any => self.any_ctx(depth),
                ContextClass::Wg => self.wg_ctx(depth),
                ContextClass::Wgs => self.wgs_ctx(depth),
                ContextClass::SgSeq => self.sgseq_ctx(depth),
            };
            if c.has_hole() && class.admits(&c.classify()) {
                return c;
            }
        }
    }

    fn leaf(&mut self, depth: usize) -> Context {
        Context::leaf(self.process(depth.min(2)))
    }

    fn prefixed_leaf(&mut self, depth: usize) -> Context {
        let u = self.action();
        Context::leaf(Process::prefix(u, self.process(depth.saturating_sub(1).min(1))))
    }

    fn any_ctx(&mut self, depth: usize) -> Context {
        if depth == 0 {
            return Context::Hole;
        }
        match self.below(9) {
            0 | 1 => Context::Hole,
            2 => {
                let u = self.action();
                Context::prefix(u, self.any_ctx(depth - 1))
            }
            3 => Context::sum(self.any_ctx(depth - 1), self.any_ctx(depth - 1)),
            4 => Context::sum(self.any_ctx(depth - 1), self.leaf(depth - 1)),
            5 => Context::par(self.any_ctx(depth - 1), self.any_ctx(depth - 1)),
            6 => Context::par(self.leaf(depth - 1), self.any_ctx(depth - 1)),
            7 => {
                let x = self.restriction();
                Context::restr([x], self.any_ctx(depth - 1))
            }
            _ => {
                let rf = self.relabeling();
                Context::relab(self.any_ctx(depth - 1), rf)
            }
        }
    }

    fn wg_ctx(&mut self, depth: usize) -> Context {
        if depth <= 1 {
            let u = self.action();
            return Context::prefix(u, Context::Hole);
        }
        match self.below(10) {
            0..=3 => {
                let u = self.action();
                Context::prefix(u, self.any_ctx(depth - 1))
            }
            4 | 5 => Context::sum(self.wg_ctx(depth - 1), self.leaf(depth - 1)),
            6 => Context::sum(self.wg_ctx(depth - 1), self.wg_ctx(depth - 1)),
            7 => Context::par(self.wg_ctx(depth - 1), self.leaf(depth - 1)),
            8 => {
                let x = self.restriction();
                Context::restr([x], self.wg_ctx(depth - 1))
            }
            _ => {
                let rf = self.relabeling();
                Context::relab(self.wg_ctx(depth - 1), rf)
            }
        }
    }

    fn gctx(&mut self, depth: usize) -> Context {
        if depth == 0 {
            return Context::Hole;
        }
        match self.below(8) {
            0 | 1 => Context::Hole,
            2 | 3 => {
                let u = self.action();
                Context::prefix(u, self.gctx(depth - 1))
            }
            4 | 5 => self.guarded_sum(depth),
            6 => Context::par(self.gctx(depth - 1), self.leaf(depth - 1)),
            _ => {
                let x = self.restriction();
                Context::restr([x], self.gctx(depth - 1))
            }
        }
    }

    fn guarded_sum(&mut self, depth: usize) -> Context {
        let (u, v) = (self.action(), self.action());
        let left = Context::prefix(u, self.gctx(depth.saturating_sub(2)));
        let right = if self.chance(0.5) {
            self.prefixed_leaf(depth - 1)
        } else {
            Context::prefix(v, self.gctx(depth.saturating_sub(2)))
        };
        if self.chance(0.5) {
            Context::sum(left, right)
        } else {
            Context::sum(right, left)
        }
    }

    fn wgs_ctx(&mut self, depth: usize) -> Context {
        if depth <= 1 {
            let u = self.action();
            return Context::prefix(u, Context::Hole);
        }
        match self.below(9) {
            0..=3 => {
                let u = self.action();
                Context::prefix(u, self.gctx(depth - 1))
            }
            4..=6 => self.guarded_sum(depth),
            7 => Context::par(self.wgs_ctx(depth - 1), self.leaf(depth - 1)),
            _ => {
                let rf = self.relabeling();
                Context::relab(self.wgs_ctx(depth - 1), rf)
            }
        }
    }

    fn seq_ctx(&mut self, depth: usize) -> Context {
        if depth == 0 {
            return Context::Hole;
        }
        match self.below(6) {
            0 | 1 => Context::Hole,
            2 | 3 => {
                let u = self.action();
                Context::prefix(u, self.seq_ctx(depth - 1))
            }
            4 => Context::sum(self.seq_ctx(depth - 1), self.leaf(depth - 1)),
            _ => Context::sum(self.seq_ctx(depth - 1), self.seq_ctx(depth - 1)),
        }
    }

    fn sgseq_ctx(&mut self, depth: usize) -> Context {
        if depth <= 1 {
            let u = self.visible();
            return Context::prefix(u, Context::Hole);
        }
        match self.below(8) {
            0..=3 => {
                let u = self.visible();
                Context::prefix(u, self.seq_ctx(depth - 1))
            }
            4 => Context::prefix(Action::Tau, self.sgseq_ctx(depth - 1)),
            5 => Context::sum(self.sgseq_ctx(depth - 1), self.leaf(depth - 1)),
            _ => Context::sum(self.sgseq_ctx(depth - 1), self.sgseq_ctx(depth - 1)),
        }
    }

    /// Inserts `τ` after one randomly chosen prefix of the context.
    pub fn insert_tau(&mut self, c: &Context) -> Context {
        let count = count_prefixes(c);
        if count == 0 {
            return c.clone();
        }
        let target = self.below(count);
        let mut counter = 0;
        tau_after(c, target, &mut counter)
    }
}

fn count_prefixes(c: &Context) -> usize {
    match c {
        Context::Hole => 0,
        Context::Leaf(p) => count_process_prefixes(p),
        Context::Prefix(_, d) => 1 + count_prefixes(d),
        Context::Sum(l, r) | Context::Par(l, r) => count_prefixes(l) + count_prefixes(r),
        Context::Restr(_, d) | Context::Relab(d, _) => count_prefixes(d),
    }
}

fn count_process_prefixes(p: &Process) -> usize {
    match p {
        Process::Nil | Process::Var(_) => 0,
        Process::Prefix(_, q) => 1 + count_process_prefixes(q),
        Process::Sum(l, r) | Process::Par(l, r) => count_process_prefixes(l) + count_process_prefixes(r),
        Process::Restr(_, q) | Process::Relab(q, _) | Process::Rec(_, q) => count_process_prefixes(q),
    }
}

fn tau_after(c: &Context, target: usize, counter: &mut usize) -> Context {
    match c {
        Context::Hole => Context::Hole,
        Context::Leaf(p) => Context::leaf(tau_after_process(p, target, counter)),
        Context::Prefix(u, d) => {
            let here = *counter == target;
            *counter += 1;
            let inner = tau_after(d, target, counter);
            if here {
                Context::prefix(u.clone(), Context::prefix(Action::Tau, inner))
            } else {
                Context::prefix(u.clone(), inner)
            }
        }
        Context::Sum(l, r) => {
            let l2 = tau_after(l, target, counter);
            Context::sum(l2, tau_after(r, target, counter))
        }
        Context::Par(l, r) => {
            let l2 = tau_after(l, target, counter);
            Context::par(l2, tau_after(r, target, counter))
        }
        Context::Restr(names, d) => Context::restr(names.iter().cloned(), tau_after(d, target, counter)),
        Context::Relab(d, rf) => Context::relab(tau_after(d, target, counter), rf.clone()),
    }
}

fn tau_after_process(p: &Process, target: usize, counter: &mut usize) -> Process {
    match p {
        Process::Nil | Process::Var(_) => p.clone(),
        Process::Prefix(u, q) => {
            let here = *counter == target;
            *counter += 1;
            let inner = tau_after_process(q, target, counter);
            if here {
                Process::prefix(u.clone(), Process::tau(inner))
            } else {
                Process::prefix(u.clone(), inner)
            }
        }
        Process::Sum(l, r) => {
            let l2 = tau_after_process(l, target, counter);
            Process::sum(l2, tau_after_process(r, target, counter))
        }
        Process::Par(l, r) => {
            let l2 = tau_after_process(l, target, counter);
            Process::par(l2, tau_after_process(r, target, counter))
        }
        Process::Restr(names, q) => Process::restr(names.iter().cloned(), tau_after_process(q, target, counter)),
        Process::Relab(q, rf) => Process::relab(tau_after_process(q, target, counter), rf.clone()),
        Process::Rec(x, q) => Process::rec(x.clone(), tau_after_process(q, target, counter)),
    }
}

/// `rec X. e[X]` for a variable not occurring in `e`.
pub fn fixpoint(e: &Context) -> Process {
    let mut avoid = e.to_expression(&name("X")).names();
    avoid.insert(name("X"));
    let x = (0..)
        .map(|i| name(&format!("X{i}")))
        .find(|n| !avoid.contains(n))
        .expect("infinitely many candidates");
    Process::rec(x.clone(), e.to_expression(&x))
}

/// Candidate solutions of `X = e[X]`: the fixpoint of `e`, its first two
/// unfoldings, and fixpoints of `e` with an extra `τ` after some prefix
/// together with their unfoldings.
pub fn solution_candidates(g: &mut Gen, e: &Context, tau_variants: usize) -> Vec<Process> {
    let f = fixpoint(e);
    let mut out = vec![f.clone()];
    if let Ok(f1) = e.apply(&f) {
        if let Ok(f2) = e.apply(&f1) {
            out.push(f1);
            out.push(f2);
        }
    }
    for _ in 0..tau_variants {
        let e2 = g.insert_tau(e);
        let f2 = fixpoint(&e2);
        if let Ok(f3) = e.apply(&f2) {
            out.push(f3);
        }
        out.push(f2);
    }
    let mut seen = std::collections::HashSet::new();
    out.retain(|p| seen.insert(p.canonical()));
    out
}
