//! Abstract syntax of CCS terms.
//!
//! Names and recursion variables share one identifier space; whether an
//! identifier denotes a channel or a variable is decided by its position in
//! the tree. Subterms are reference counted so that states of a transition
//! system can share structure.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

const RESERVED: [&str; 3] = ["t", "nu", "rec"];
const HOLE: &str = "_";

/// An identifier `[A-Za-z][A-Za-z0-9_]*`, excluding the keywords `t`, `nu`
/// and `rec`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Name(Arc<str>);

impl Name {
    pub fn new(text: &str) -> Result<Name> {
        if is_identifier(text) {
            Ok(Name(Arc::from(text)))
        } else {
            Err(Error::Syntax {
                line: 1,
                column: 1,
                expected: "identifier".into(),
                found: format!("`{text}`"),
            })
        }
    }

    /// The placeholder used for context holes while parsing. It can never be
    /// produced by [`Name::new`].
    pub(crate) fn hole() -> Name {
        Name(Arc::from(HOLE))
    }

    pub(crate) fn is_hole(&self) -> bool {
        &*self.0 == HOLE
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

pub(crate) fn is_identifier(text: &str) -> bool {
    let mut chars = text.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_') && !RESERVED.contains(&text)
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Polarity {
    Input,
    Output,
}

/// A visible action: `a` (input) or `'a` (output).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Label {
    pub name: Name,
    pub polarity: Polarity,
}

impl Label {
    pub fn input(name: Name) -> Label {
        Label { name, polarity: Polarity::Input }
    }

    pub fn output(name: Name) -> Label {
        Label { name, polarity: Polarity::Output }
    }

    pub fn complement(&self) -> Label {
        let polarity = match self.polarity {
            Polarity::Input => Polarity::Output,
            Polarity::Output => Polarity::Input,
        };
        Label { name: self.name.clone(), polarity }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.polarity {
            Polarity::Input => write!(f, "{}", self.name),
            Polarity::Output => write!(f, "'{}", self.name),
        }
    }
}

/// Visible labels order before `Tau`, so listings read `a`, `'a`, ..., `t`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Action {
    Visible(Label),
    Tau,
}

impl Action {
    pub fn input(name: &str) -> Action {
        Action::Visible(Label::input(Name::new(name).expect("valid identifier")))
    }

    pub fn output(name: &str) -> Action {
        Action::Visible(Label::output(Name::new(name).expect("valid identifier")))
    }

    pub fn is_tau(&self) -> bool {
        matches!(self, Action::Tau)
    }

    pub fn label(&self) -> Option<&Label> {
        match self {
            Action::Visible(l) => Some(l),
            Action::Tau => None,
        }
    }

    /// Complement of a visible action; `Tau` has none.
    pub fn complement(&self) -> Option<Action> {
        self.label().map(|l| Action::Visible(l.complement()))
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Action::Visible(l) => l.fmt(f),
            Action::Tau => f.write_str("t"),
        }
    }
}

/// A finite renaming of channel names, identity outside its domain.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Relabeling(BTreeMap<Name, Name>);

impl Relabeling {
    pub fn new() -> Relabeling {
        Relabeling::default()
    }

    /// Builds a relabeling from `(old, new)` pairs. Returns `None` when an
    /// old name is given two different images.
    pub fn from_pairs<I: IntoIterator<Item = (Name, Name)>>(pairs: I) -> Option<Relabeling> {
        let mut map = BTreeMap::new();
        for (old, new) in pairs {
            if let Some(prev) = map.insert(old, new.clone()) {
                if prev != new {
                    return None;
                }
            }
        }
        Some(Relabeling(map))
    }

    pub fn apply_name<'a>(&'a self, name: &'a Name) -> &'a Name {
        self.0.get(name).unwrap_or(name)
    }

    pub fn apply_label(&self, label: &Label) -> Label {
        Label { name: self.apply_name(&label.name).clone(), polarity: label.polarity }
    }

    pub fn apply(&self, action: &Action) -> Action {
        relabel_action(self, action)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&Name, &Name)> {
        self.0.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Relabeling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, (old, new)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{new}/{old}")?;
        }
        f.write_str("]")
    }
}

/// `Tau` is fixed; a visible action keeps its polarity and has its name
/// renamed, so the image of a complement is the complement of the image.
pub fn relabel_action(rf: &Relabeling, u: &Action) -> Action {
    match u {
        Action::Tau => Action::Tau,
        Action::Visible(l) => Action::Visible(rf.apply_label(l)),
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Process {
    Nil,
    Var(Name),
    Prefix(Action, Arc<Process>),
    Sum(Arc<Process>, Arc<Process>),
    Par(Arc<Process>, Arc<Process>),
    Restr(BTreeSet<Name>, Arc<Process>),
    Relab(Arc<Process>, Relabeling),
    Rec(Name, Arc<Process>),
}

impl Process {
    pub fn nil() -> Process {
        Process::Nil
    }

    pub fn var(name: Name) -> Process {
        Process::Var(name)
    }

    pub fn prefix(action: Action, body: Process) -> Process {
        Process::Prefix(action, Arc::new(body))
    }

    pub fn sum(left: Process, right: Process) -> Process {
        Process::Sum(Arc::new(left), Arc::new(right))
    }

    pub fn par(left: Process, right: Process) -> Process {
        Process::Par(Arc::new(left), Arc::new(right))
    }

    pub fn restr<I: IntoIterator<Item = Name>>(names: I, body: Process) -> Process {
        Process::Restr(names.into_iter().collect(), Arc::new(body))
    }

    pub fn relab(body: Process, rf: Relabeling) -> Process {
        Process::Relab(Arc::new(body), rf)
    }

    pub fn rec(var: Name, body: Process) -> Process {
        Process::Rec(var, Arc::new(body))
    }

    pub fn tau(body: Process) -> Process {
        Process::prefix(Action::Tau, body)
    }

    /// Parses a single process term.
    pub fn parse(text: &str) -> Result<Process> {
        crate::parser::parse(text)
    }

    pub fn is_closed(&self) -> bool {
        self.free_variables().is_empty()
    }

    pub fn free_variables(&self) -> BTreeSet<Name> {
        free_variables(self)
    }

    /// Every identifier occurring anywhere in the term, in any role.
    pub fn names(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        collect_names(self, &mut out);
        out
    }

    /// Number of constructors in the term.
    pub fn size(&self) -> usize {
        match self {
            Process::Nil | Process::Var(_) => 1,
            Process::Prefix(_, p) | Process::Restr(_, p) | Process::Relab(p, _) | Process::Rec(_, p) => {
                1 + p.size()
            }
            Process::Sum(p, q) | Process::Par(p, q) => 1 + p.size() + q.size(),
        }
    }

    /// Alpha-renames recursion binders to `X0`, `X1`, ... in preorder so
    /// that alpha-equivalent terms become syntactically equal. Binder names
    /// that would clash with a free variable of the term are skipped.
    pub fn canonical(&self) -> Process {
        let free = self.free_variables();
        let mut counter = 0usize;
        let mut env: Vec<(Name, Name)> = Vec::new();
        canonicalize(self, &free, &mut counter, &mut env)
    }
}

impl fmt::Display for Process {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_sum(self, f)
    }
}

/// Pretty-prints with the precedence prefix > restriction/relabeling >
/// parallel > sum; the output reparses to the same tree.
pub fn pretty(p: &Process) -> String {
    p.to_string()
}

fn fmt_sum(p: &Process, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match p {
        Process::Sum(l, r) => {
            fmt_sum(l, f)?;
            f.write_str(" + ")?;
            fmt_par(r, f)
        }
        _ => fmt_par(p, f),
    }
}

fn fmt_par(p: &Process, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match p {
        Process::Par(l, r) => {
            fmt_par(l, f)?;
            f.write_str(" | ")?;
            fmt_unary(r, f)
        }
        _ => fmt_unary(p, f),
    }
}

fn fmt_unary(p: &Process, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match p {
        Process::Nil => f.write_str("0"),
        Process::Var(x) => write!(f, "{x}"),
        Process::Prefix(a, body) => {
            write!(f, "{a}.")?;
            fmt_unary(body, f)
        }
        Process::Restr(names, body) => {
            f.write_str("nu {")?;
            for (i, n) in names.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{n}")?;
            }
            f.write_str("} ")?;
            fmt_unary(body, f)
        }
        Process::Rec(x, body) => {
            write!(f, "rec {x}. ")?;
            fmt_unary(body, f)
        }
        Process::Relab(body, rf) => {
            match &**body {
                Process::Nil | Process::Var(_) | Process::Relab(..) => fmt_unary(body, f)?,
                other => {
                    f.write_str("(")?;
                    fmt_sum(other, f)?;
                    f.write_str(")")?;
                }
            }
            write!(f, "{rf}")
        }
        Process::Sum(..) | Process::Par(..) => {
            f.write_str("(")?;
            fmt_sum(p, f)?;
            f.write_str(")")
        }
    }
}

pub fn free_variables(p: &Process) -> BTreeSet<Name> {
    fn go(p: &Process, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
        match p {
            Process::Nil => {}
            Process::Var(x) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            Process::Prefix(_, q) | Process::Restr(_, q) | Process::Relab(q, _) => go(q, bound, out),
            Process::Sum(l, r) | Process::Par(l, r) => {
                go(l, bound, out);
                go(r, bound, out);
            }
            Process::Rec(x, q) => {
                bound.push(x.clone());
                go(q, bound, out);
                bound.pop();
            }
        }
    }
    let mut out = BTreeSet::new();
    go(p, &mut Vec::new(), &mut out);
    out
}

fn collect_names(p: &Process, out: &mut BTreeSet<Name>) {
    match p {
        Process::Nil => {}
        Process::Var(x) => {
            out.insert(x.clone());
        }
        Process::Prefix(a, q) => {
            if let Some(l) = a.label() {
                out.insert(l.name.clone());
            }
            collect_names(q, out);
        }
        Process::Sum(l, r) | Process::Par(l, r) => {
            collect_names(l, out);
            collect_names(r, out);
        }
        Process::Restr(names, q) => {
            out.extend(names.iter().cloned());
            collect_names(q, out);
        }
        Process::Relab(q, rf) => {
            for (old, new) in rf.pairs() {
                out.insert(old.clone());
                out.insert(new.clone());
            }
            collect_names(q, out);
        }
        Process::Rec(x, q) => {
            out.insert(x.clone());
            collect_names(q, out);
        }
    }
}

/// Replaces every free occurrence of `var` in `body` by `value`.
///
/// Fails with [`Error::Capture`] when `value` has a free variable that an
/// inner binder of `body` would capture.
pub fn substitute(body: &Process, var: &Name, value: &Process) -> Result<Process> {
    let value_free = value.free_variables();
    subst(body, var, value, &value_free)
}

/// Substitution of a closed value; capture is impossible.
pub(crate) fn substitute_closed(body: &Process, var: &Name, value: &Process) -> Process {
    subst(body, var, value, &BTreeSet::new()).expect("closed substitution cannot capture")
}

fn subst(body: &Process, var: &Name, value: &Process, value_free: &BTreeSet<Name>) -> Result<Process> {
    Ok(match body {
        Process::Nil => Process::Nil,
        Process::Var(x) if x == var => value.clone(),
        Process::Var(_) => body.clone(),
        Process::Prefix(a, q) => Process::Prefix(a.clone(), arc_subst(q, var, value, value_free)?),
        Process::Sum(l, r) => Process::Sum(
            arc_subst(l, var, value, value_free)?,
            arc_subst(r, var, value, value_free)?,
        ),
        Process::Par(l, r) => Process::Par(
            arc_subst(l, var, value, value_free)?,
            arc_subst(r, var, value, value_free)?,
        ),
        Process::Restr(names, q) => Process::Restr(names.clone(), arc_subst(q, var, value, value_free)?),
        Process::Relab(q, rf) => Process::Relab(arc_subst(q, var, value, value_free)?, rf.clone()),
        Process::Rec(x, _) if x == var => body.clone(),
        Process::Rec(x, q) => {
            if value_free.contains(x) && q.free_variables().contains(var) {
                return Err(Error::Capture { var: var.to_string(), captured: x.to_string() });
            }
            Process::Rec(x.clone(), arc_subst(q, var, value, value_free)?)
        }
    })
}

fn arc_subst(p: &Arc<Process>, var: &Name, value: &Process, value_free: &BTreeSet<Name>) -> Result<Arc<Process>> {
    // Untouched subtrees keep sharing their allocation.
    if !mentions(p, var) {
        return Ok(p.clone());
    }
    Ok(Arc::new(subst(p, var, value, value_free)?))
}

fn mentions(p: &Process, var: &Name) -> bool {
    match p {
        Process::Nil => false,
        Process::Var(x) => x == var,
        Process::Prefix(_, q) | Process::Restr(_, q) | Process::Relab(q, _) => mentions(q, var),
        Process::Sum(l, r) | Process::Par(l, r) => mentions(l, var) || mentions(r, var),
        Process::Rec(x, q) => x != var && mentions(q, var),
    }
}

fn canonicalize(p: &Process, free: &BTreeSet<Name>, counter: &mut usize, env: &mut Vec<(Name, Name)>) -> Process {
    renamed(p, free, counter, env).unwrap_or_else(|| p.clone())
}

fn shared(old: &Arc<Process>, new: Option<Process>) -> Arc<Process> {
    new.map_or_else(|| old.clone(), Arc::new)
}

/// The canonical form of `p`, or `None` when `p` already is canonical, so
/// unchanged subterms keep their shared allocations.
fn renamed(p: &Process, free: &BTreeSet<Name>, counter: &mut usize, env: &mut Vec<(Name, Name)>) -> Option<Process> {
    match p {
        Process::Nil => None,
        Process::Var(x) => match env.iter().rev().find(|(old, _)| old == x) {
            Some((_, new)) if new != x => Some(Process::Var(new.clone())),
            _ => None,
        },
        Process::Prefix(a, q) => renamed(q, free, counter, env).map(|q2| Process::Prefix(a.clone(), Arc::new(q2))),
        Process::Sum(l, r) | Process::Par(l, r) => {
            let l2 = renamed(l, free, counter, env);
            let r2 = renamed(r, free, counter, env);
            if l2.is_none() && r2.is_none() {
                return None;
            }
            let (l2, r2) = (shared(l, l2), shared(r, r2));
            Some(if matches!(p, Process::Sum(..)) { Process::Sum(l2, r2) } else { Process::Par(l2, r2) })
        }
        Process::Restr(names, q) => renamed(q, free, counter, env).map(|q2| Process::Restr(names.clone(), Arc::new(q2))),
        Process::Relab(q, rf) => renamed(q, free, counter, env).map(|q2| Process::Relab(Arc::new(q2), rf.clone())),
        Process::Rec(x, q) => {
            let fresh = loop {
                let candidate = binder_name(*counter);
                *counter += 1;
                if !free.contains(&candidate) {
                    break candidate;
                }
            };
            env.push((x.clone(), fresh.clone()));
            let body = renamed(q, free, counter, env);
            env.pop();
            if body.is_none() && fresh == *x {
                return None;
            }
            Some(Process::Rec(fresh, shared(q, body)))
        }
    }
}

fn binder_name(i: usize) -> Name {
    thread_local! {
        static NAMES: std::cell::RefCell<Vec<Name>> = const { std::cell::RefCell::new(Vec::new()) };
    }
    NAMES.with(|names| {
        let mut names = names.borrow_mut();
        while names.len() <= i {
            let n = names.len();
            names.push(Name(Arc::from(format!("X{n}").as_str())));
        }
        names[i].clone()
    })
}
