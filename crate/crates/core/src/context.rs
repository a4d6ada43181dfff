//! Single-variable contexts with any number of holes, their guardedness
//! classes, and transitions that treat holes as inert.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::parser::parse_with_holes;
use crate::semantics::step;
use crate::syntax::{Action, Name, Process, Relabeling};

/// A process tree with holes. Hole-free subtrees are kept as closed
/// `Leaf` processes by the smart constructors.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Context {
    Hole,
    Leaf(Arc<Process>),
    Prefix(Action, Arc<Context>),
    Sum(Arc<Context>, Arc<Context>),
    Par(Arc<Context>, Arc<Context>),
    Restr(BTreeSet<Name>, Arc<Context>),
    Relab(Arc<Context>, Relabeling),
}

impl Context {
    pub fn hole() -> Context {
        Context::Hole
    }

    /// Constant context; the process is stored in canonical form.
    pub fn leaf(p: Process) -> Context {
        Context::Leaf(Arc::new(p.canonical()))
    }

    pub fn prefix(u: Action, c: Context) -> Context {
        match c {
            Context::Leaf(p) => Context::leaf(Process::Prefix(u, p)),
            c => Context::Prefix(u, Arc::new(c)),
        }
    }

    pub fn sum(l: Context, r: Context) -> Context {
        match (l, r) {
            (Context::Leaf(p), Context::Leaf(q)) => Context::leaf(Process::Sum(p, q)),
            (l, r) => Context::Sum(Arc::new(l), Arc::new(r)),
        }
    }

    pub fn par(l: Context, r: Context) -> Context {
        match (l, r) {
            (Context::Leaf(p), Context::Leaf(q)) => Context::leaf(Process::Par(p, q)),
            (l, r) => Context::Par(Arc::new(l), Arc::new(r)),
        }
    }

    pub fn restr<I: IntoIterator<Item = Name>>(names: I, c: Context) -> Context {
        let names: BTreeSet<Name> = names.into_iter().collect();
        match c {
            Context::Leaf(p) => Context::leaf(Process::Restr(names, p)),
            c => Context::Restr(names, Arc::new(c)),
        }
    }

    pub fn relab(c: Context, rf: Relabeling) -> Context {
        match c {
            Context::Leaf(p) => Context::leaf(Process::Relab(p, rf)),
            c => Context::Relab(Arc::new(c), rf),
        }
    }

    /// Parses the process grammar extended with `_` for holes. Leaves must
    /// be closed and holes may not occur under `rec`.
    pub fn parse(text: &str) -> Result<Context> {
        Context::from_hole_term(&parse_with_holes(text)?)
    }

    fn from_hole_term(p: &Process) -> Result<Context> {
        if !contains_hole(p) {
            let free = p.free_variables();
            if !free.is_empty() {
                return Err(Error::OpenTerm(free.iter().map(|n| n.to_string()).collect()));
            }
            return Ok(Context::leaf(p.clone()));
        }
        Ok(match p {
            Process::Var(_) => Context::Hole,
            Process::Prefix(u, q) => Context::prefix(u.clone(), Context::from_hole_term(q)?),
            Process::Sum(l, r) => Context::sum(Context::from_hole_term(l)?, Context::from_hole_term(r)?),
            Process::Par(l, r) => Context::par(Context::from_hole_term(l)?, Context::from_hole_term(r)?),
            Process::Restr(names, q) => Context::restr(names.iter().cloned(), Context::from_hole_term(q)?),
            Process::Relab(q, rf) => Context::relab(Context::from_hole_term(q)?, rf.clone()),
            Process::Rec(x, _) => {
                return Err(Error::PreconditionFailed(format!("hole under `rec {x}` is not a context")));
            }
            Process::Nil => unreachable!("nil has no hole"),
        })
    }

    /// Turns the free occurrences of `var` in `e` into holes. Fails when an
    /// occurrence lies under `rec` or another free variable remains.
    pub fn from_expression(e: &Process, var: &Name) -> Result<Context> {
        let marked = crate::syntax::substitute(e, var, &Process::Var(Name::hole()))?;
        Context::from_hole_term(&marked)
    }

    pub fn has_hole(&self) -> bool {
        !matches!(self, Context::Leaf(_))
    }

    pub fn hole_count(&self) -> usize {
        match self {
            Context::Hole => 1,
            Context::Leaf(_) => 0,
            Context::Prefix(_, c) | Context::Restr(_, c) | Context::Relab(c, _) => c.hole_count(),
            Context::Sum(l, r) | Context::Par(l, r) => l.hole_count() + r.hole_count(),
        }
    }

    /// Replaces every hole by the process `var`.
    pub fn to_expression(&self, var: &Name) -> Process {
        self.fill(&Process::Var(var.clone()))
    }

    fn fill(&self, p: &Process) -> Process {
        match self {
            Context::Hole => p.clone(),
            Context::Leaf(q) => (**q).clone(),
            Context::Prefix(u, c) => Process::prefix(u.clone(), c.fill(p)),
            Context::Sum(l, r) => Process::sum(l.fill(p), r.fill(p)),
            Context::Par(l, r) => Process::par(l.fill(p), r.fill(p)),
            Context::Restr(names, c) => Process::restr(names.iter().cloned(), c.fill(p)),
            Context::Relab(c, rf) => Process::relab(c.fill(p), rf.clone()),
        }
    }

    /// `C[p]`, every hole replaced by the closed process `p`.
    pub fn apply(&self, p: &Process) -> Result<Process> {
        let free = p.free_variables();
        if !free.is_empty() {
            return Err(Error::OpenTerm(free.iter().map(|n| n.to_string()).collect()));
        }
        Ok(self.fill(p))
    }

    /// Substitutes `inner` at every hole of `self`.
    pub fn compose(&self, inner: &Context) -> Context {
        match self {
            Context::Hole => inner.clone(),
            Context::Leaf(_) => self.clone(),
            Context::Prefix(u, c) => Context::prefix(u.clone(), c.compose(inner)),
            Context::Sum(l, r) => Context::sum(l.compose(inner), r.compose(inner)),
            Context::Par(l, r) => Context::par(l.compose(inner), r.compose(inner)),
            Context::Restr(names, c) => Context::restr(names.iter().cloned(), c.compose(inner)),
            Context::Relab(c, rf) => Context::relab(c.compose(inner), rf.clone()),
        }
    }

    /// `e` composed with itself `n` times; `Hole` for `n = 0`.
    pub fn iterate(&self, n: usize) -> Context {
        (0..n).fold(Context::Hole, |acc, _| self.compose(&acc))
    }

    pub fn classify(&self) -> Classification {
        let f = flags(self);
        Classification { context: true, gcontext: f.gcontext, wg: f.wg, wgs: f.wgs, sg: f.sg, seq: f.seq }
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fill(&Process::Var(Name::hole())))
    }
}

fn contains_hole(p: &Process) -> bool {
    match p {
        Process::Nil => false,
        Process::Var(x) => x.is_hole(),
        Process::Prefix(_, q) | Process::Restr(_, q) | Process::Relab(q, _) | Process::Rec(_, q) => contains_hole(q),
        Process::Sum(l, r) | Process::Par(l, r) => contains_hole(l) || contains_hole(r),
    }
}

/// Membership in each inductively defined class of contexts. Every
/// context is a `context`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Classification {
    pub context: bool,
    /// Holes only under guarded sums.
    pub gcontext: bool,
    /// Every hole under a prefix.
    pub wg: bool,
    /// Weakly guarded with only guarded sums.
    pub wgs: bool,
    /// Every hole under a visible prefix.
    pub sg: bool,
    /// Holes only under prefixes and sums.
    pub seq: bool,
}

impl Classification {
    pub fn flags(&self) -> [(&'static str, bool); 6] {
        [
            ("context", self.context),
            ("gcontext", self.gcontext),
            ("wg", self.wg),
            ("wgs", self.wgs),
            ("sg", self.sg),
            ("seq", self.seq),
        ]
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .flags()
            .iter()
            .map(|(name, b)| format!("{name} {}", if *b { "yes" } else { "no" }))
            .collect();
        f.write_str(&parts.join(", "))
    }
}

#[derive(Clone, Copy)]
struct Flags {
    constant: bool,
    gcontext: bool,
    wg: bool,
    wgs: bool,
    sg: bool,
    seq: bool,
}

const CONSTANT: Flags = Flags { constant: true, gcontext: true, wg: true, wgs: true, sg: true, seq: true };

/// A summand usable in a guarded sum: a prefix over a guarded context, or
/// a constant whose process is a prefix.
fn guarded_summand(c: &Context) -> bool {
    match c {
        Context::Prefix(_, inner) => flags(inner).gcontext,
        Context::Leaf(p) => matches!(**p, Process::Prefix(..)),
        _ => false,
    }
}

fn flags(c: &Context) -> Flags {
    match c {
        Context::Leaf(_) => CONSTANT,
        Context::Hole => Flags { constant: false, gcontext: true, wg: false, wgs: false, sg: false, seq: true },
        Context::Prefix(u, inner) => {
            let f = flags(inner);
            if f.constant {
                return CONSTANT;
            }
            Flags {
                constant: false,
                gcontext: f.gcontext,
                wg: true,
                wgs: f.gcontext,
                sg: !u.is_tau() || f.sg,
                seq: f.seq,
            }
        }
        Context::Sum(l, r) => {
            let (fl, fr) = (flags(l), flags(r));
            if fl.constant && fr.constant {
                return CONSTANT;
            }
            let guarded = guarded_summand(l) && guarded_summand(r);
            Flags {
                constant: false,
                gcontext: guarded,
                wg: fl.wg && fr.wg,
                wgs: guarded,
                sg: fl.sg && fr.sg,
                seq: fl.seq && fr.seq,
            }
        }
        Context::Par(l, r) => {
            let (fl, fr) = (flags(l), flags(r));
            if fl.constant && fr.constant {
                return CONSTANT;
            }
            Flags {
                constant: false,
                gcontext: fl.gcontext && fr.gcontext,
                wg: fl.wg && fr.wg,
                wgs: fl.wgs && fr.wgs,
                sg: fl.sg && fr.sg,
                seq: false,
            }
        }
        Context::Restr(_, inner) | Context::Relab(inner, _) => {
            let f = flags(inner);
            if f.constant {
                return CONSTANT;
            }
            Flags { seq: false, ..f }
        }
    }
}

/// Transitions of a context in which holes have no moves of their own.
pub fn context_step(c: &Context) -> Result<BTreeSet<(Action, Context)>> {
    Ok(context_moves(c)?.into_iter().collect())
}

fn context_moves(c: &Context) -> Result<Vec<(Action, Context)>> {
    Ok(match c {
        Context::Hole => Vec::new(),
        Context::Leaf(p) => step(p)?.into_iter().map(|(u, q)| (u, Context::leaf(q))).collect(),
        Context::Prefix(u, inner) => vec![(u.clone(), (**inner).clone())],
        Context::Sum(l, r) => {
            let mut out = context_moves(l)?;
            out.extend(context_moves(r)?);
            out
        }
        Context::Par(l, r) => {
            let left = context_moves(l)?;
            let right = context_moves(r)?;
            let mut out = Vec::new();
            for (u, l2) in &left {
                out.push((u.clone(), Context::par(l2.clone(), (**r).clone())));
            }
            for (u, r2) in &right {
                out.push((u.clone(), Context::par((**l).clone(), r2.clone())));
            }
            for (u, l2) in &left {
                let Some(co) = u.complement() else { continue };
                for (v, r2) in &right {
                    if *v == co {
                        out.push((Action::Tau, Context::par(l2.clone(), r2.clone())));
                    }
                }
            }
            out
        }
        Context::Restr(names, inner) => context_moves(inner)?
            .into_iter()
            .filter(|(u, _)| u.label().is_none_or(|l| !names.contains(&l.name)))
            .map(|(u, c2)| (u, Context::restr(names.iter().cloned(), c2)))
            .collect(),
        Context::Relab(inner, rf) => context_moves(inner)?
            .into_iter()
            .map(|(u, c2)| (rf.apply(&u), Context::relab(c2, rf.clone())))
            .collect(),
    })
}

/// Outcome of checking that every free variable occurrence of an
/// expression is beneath a prefix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GuardednessReport {
    pub weakly_guarded: bool,
    /// Variables with an occurrence outside every prefix.
    pub unguarded: BTreeSet<Name>,
    /// Free variables occurring under a `rec` binder. Such occurrences
    /// cannot be turned into holes of a context and impose no condition.
    pub under_rec: BTreeSet<Name>,
}

pub fn weakly_guarded_report(e: &Process) -> GuardednessReport {
    fn go(
        p: &Process,
        guarded: bool,
        bound: &mut Vec<Name>,
        unguarded: &mut BTreeSet<Name>,
        under_rec: &mut BTreeSet<Name>,
    ) {
        match p {
            Process::Nil => {}
            Process::Var(x) => {
                if bound.contains(x) {
                    return;
                }
                if !bound.is_empty() {
                    under_rec.insert(x.clone());
                } else if !guarded {
                    unguarded.insert(x.clone());
                }
            }
            Process::Prefix(_, q) => go(q, true, bound, unguarded, under_rec),
            Process::Restr(_, q) | Process::Relab(q, _) => go(q, guarded, bound, unguarded, under_rec),
            Process::Sum(l, r) | Process::Par(l, r) => {
                go(l, guarded, bound, unguarded, under_rec);
                go(r, guarded, bound, unguarded, under_rec);
            }
            Process::Rec(x, q) => {
                bound.push(x.clone());
                go(q, guarded, bound, unguarded, under_rec);
                bound.pop();
            }
        }
    }
    let mut unguarded = BTreeSet::new();
    let mut under_rec = BTreeSet::new();
    go(e, false, &mut Vec::new(), &mut unguarded, &mut under_rec);
    GuardednessReport { weakly_guarded: unguarded.is_empty(), unguarded, under_rec }
}

/// True iff turning any free variable occurrence (outside `rec`) into a
/// hole yields a weakly guarded context.
pub fn weakly_guarded_expr(e: &Process) -> bool {
    weakly_guarded_report(e).weakly_guarded
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> Context {
        Context::parse(s).unwrap()
    }

    fn p(s: &str) -> Process {
        Process::parse(s).unwrap()
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(c("_"), Context::Hole);
        assert_eq!(c("a._"), Context::prefix(Action::input("a"), Context::Hole));
        assert_eq!(c("a._ + b.0").to_string(), "a._ + b.0");
        assert_eq!(c("nu {a} (a._ | 'a.0)").to_string(), "nu {a} (a._ | 'a.0)");
        assert!(matches!(Context::parse("a.X + _"), Err(Error::OpenTerm(_))));
        assert!(Context::parse("rec A. (a.A + _)").is_err());
        assert_eq!(c("a.b.0"), Context::leaf(p("a.b.0")));
    }

    #[test]
    fn apply_examples() {
        assert_eq!(c("_").apply(&p("a.0 | b.0")).unwrap(), p("a.0 | b.0"));
        assert_eq!(c("a._").apply(&Process::Nil).unwrap(), p("a.0"));
        assert_eq!(c("_ | _").apply(&p("b.0")).unwrap(), p("b.0 | b.0"));
        assert!(matches!(c("a._").apply(&p("X")), Err(Error::OpenTerm(_))));
    }

    #[test]
    fn compose_and_iterate() {
        let e = c("a._");
        assert_eq!(e.iterate(0), Context::Hole);
        assert_eq!(e.iterate(2), c("a.a._"));
        assert_eq!(c("_ | b.0").compose(&e), c("a._ | b.0"));
        let (outer, inner, q) = (c("t._ + b._"), c("_ | 'a.0"), p("a.0"));
        assert_eq!(
            outer.compose(&inner).apply(&q).unwrap(),
            outer.apply(&inner.apply(&q).unwrap()).unwrap()
        );
    }

    #[test]
    fn classify_examples() {
        let k = c("_").classify();
        assert!(k.context && k.gcontext && k.seq && !k.wg && !k.wgs && !k.sg);
        let k = c("a._").classify();
        assert!(k.wg && k.sg && k.wgs && k.seq && k.gcontext);
        let k = c("t._").classify();
        assert!(k.wg && !k.sg);
        let k = c("_ + a._").classify();
        assert!(k.context && !k.wg && !k.gcontext);
    }

    #[test]
    fn classify_more() {
        let k = c("a.0 | _").classify();
        assert!(!k.wg && !k.seq && k.gcontext);
        let k = c("nu {a} (a._ | 'a.0)").classify();
        assert!(k.wg && k.sg && k.wgs && !k.seq);
        let k = c("a._ + b.0").classify();
        assert!(k.wg && k.gcontext && k.wgs && k.seq);
        let k = c("a._ + 0").classify();
        assert!(k.wg && !k.gcontext && !k.wgs);
        let k = c("a._ + (b.0 + 'b.0)").classify();
        assert!(k.wg && !k.wgs);
        let k = c("t.a._").classify();
        assert!(k.sg);
        let k = c("a._ + t._").classify();
        assert!(k.wg && !k.sg && k.wgs);
        let k = c("a.0").classify();
        assert_eq!(k.flags().iter().filter(|(_, b)| *b).count(), 6);
    }

    #[test]
    fn step_examples() {
        assert!(context_step(&Context::Hole).unwrap().is_empty());
        assert_eq!(
            context_step(&c("a._")).unwrap(),
            BTreeSet::from([(Action::input("a"), Context::Hole)])
        );
        let got = context_step(&c("a._ | 'a.0")).unwrap();
        let want = BTreeSet::from([
            (Action::input("a"), c("_ | 'a.0")),
            (Action::output("a"), c("a._ | 0")),
            (Action::Tau, c("_ | 0")),
        ]);
        assert_eq!(got, want);
    }

    #[test]
    fn weakly_guarded_examples() {
        assert!(weakly_guarded_expr(&p("a.X")));
        assert!(!weakly_guarded_expr(&p("X")));
        assert!(!weakly_guarded_expr(&p("X + a.X")));
        assert!(weakly_guarded_expr(&p("a.X | t.(X + b.0)")));
        let r = weakly_guarded_report(&p("rec A. (X + a.A)"));
        assert!(r.weakly_guarded);
        assert_eq!(r.under_rec, BTreeSet::from([Name::new("X").unwrap()]));
    }

    #[test]
    fn expression_round_trip() {
        let x = Name::new("X").unwrap();
        let e = p("a.X + b.0");
        let ctx = Context::from_expression(&e, &x).unwrap();
        assert_eq!(ctx, c("a._ + b.0"));
        assert_eq!(ctx.to_expression(&x), e);
    }
}
