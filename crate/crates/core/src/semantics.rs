//! One-step transitions derived from the SOS rules, and trace predicates over
//! action lists.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::syntax::{substitute_closed, Action, Process};

/// Nested `rec` unfoldings allowed without passing through a prefix.
pub const DEFAULT_UNFOLD_BUDGET: usize = 64;

/// Total `rec` unfoldings allowed within one `step` call. Stops the
/// exponential blow-up of terms such as `rec A. (A + A)` well before the
/// nesting budget is reached on every branch.
const TOTAL_UNFOLD_CAP: usize = 50_000;

pub type Transitions = BTreeSet<(Action, Process)>;
pub type ActionList = Vec<Action>;

/// All `(u, p')` with `p -u-> p'`, targets in canonical form.
pub fn step(p: &Process) -> Result<Transitions> {
    step_with_budget(p, DEFAULT_UNFOLD_BUDGET)
}

pub fn step_with_budget(p: &Process, unfold_budget: usize) -> Result<Transitions> {
    let free = p.free_variables();
    if !free.is_empty() {
        return Err(Error::OpenTerm(free.iter().map(|n| n.to_string()).collect()));
    }
    let mut unfolder = Unfolder { limit: unfold_budget, total: 0, root: p };
    let raw = unfolder.derive(p, 0)?;
    Ok(raw.into_iter().map(|(u, q)| (u, q.canonical())).collect())
}

struct Unfolder<'a> {
    limit: usize,
    total: usize,
    root: &'a Process,
}

impl Unfolder<'_> {
    fn unguarded(&self) -> Error {
        Error::UnguardedRecursion { process: self.root.to_string(), limit: self.limit }
    }

    fn derive(&mut self, p: &Process, depth: usize) -> Result<Vec<(Action, Process)>> {
        Ok(match p {
            Process::Nil => Vec::new(),
            Process::Var(x) => return Err(Error::OpenTerm(vec![x.to_string()])),
            Process::Prefix(u, body) => vec![(u.clone(), (**body).clone())],
            Process::Sum(l, r) => {
                let mut out = self.derive(l, depth)?;
                out.extend(self.derive(r, depth)?);
                out
            }
            Process::Par(l, r) => {
                let left = self.derive(l, depth)?;
                let right = self.derive(r, depth)?;
                let mut out = Vec::with_capacity(left.len() + right.len());
                for (u, l2) in &left {
                    out.push((u.clone(), Process::Par(Arc::new(l2.clone()), r.clone())));
                }
                for (u, r2) in &right {
                    out.push((u.clone(), Process::Par(l.clone(), Arc::new(r2.clone()))));
                }
                for (u, l2) in &left {
                    let Some(co) = u.complement() else { continue };
                    for (v, r2) in &right {
                        if *v == co {
                            out.push((Action::Tau, Process::par(l2.clone(), r2.clone())));
                        }
                    }
                }
                out
            }
            Process::Restr(names, body) => self
                .derive(body, depth)?
                .into_iter()
                .filter(|(u, _)| u.label().is_none_or(|l| !names.contains(&l.name)))
                .map(|(u, q)| (u, Process::Restr(names.clone(), q.into())))
                .collect(),
            Process::Relab(body, rf) => self
                .derive(body, depth)?
                .into_iter()
                .map(|(u, q)| (rf.apply(&u), Process::relab(q, rf.clone())))
                .collect(),
            Process::Rec(x, body) => {
                self.total += 1;
                if depth >= self.limit || self.total > TOTAL_UNFOLD_CAP {
                    return Err(self.unguarded());
                }
                let unfolded = substitute_closed(body, x, p);
                self.derive(&unfolded, depth + 1)?
            }
        })
    }
}

/// Whether `p` can reach `q` by performing exactly `acts` in order. The
/// empty list relates a process to itself only.
pub fn trace_holds(p: &Process, acts: &[Action], q: &Process, budget: usize) -> Result<bool> {
    let target = q.canonical();
    let mut frontier: BTreeSet<Process> = BTreeSet::from([p.canonical()]);
    for u in acts {
        let mut next = BTreeSet::new();
        for r in &frontier {
            for (v, r2) in step(r)? {
                if v == *u {
                    next.insert(r2);
                }
            }
            if next.len() > budget {
                return Err(Error::BudgetExceeded(budget));
            }
        }
        if next.is_empty() {
            return Ok(false);
        }
        frontier = next;
    }
    Ok(frontier.contains(&target))
}

/// True iff no action of the list is visible.
pub fn no_label(acts: &[Action]) -> bool {
    acts.iter().all(Action::is_tau)
}

/// True iff `acts = l1 ++ [u] ++ l2` where neither `l1` nor `l2` contains a
/// visible action.
pub fn unique_label(u: &Action, acts: &[Action]) -> Result<bool> {
    if u.is_tau() {
        return Err(Error::NotVisible(u.to_string()));
    }
    let mut visible = acts.iter().filter(|a| !a.is_tau());
    Ok(visible.next() == Some(u) && visible.next().is_none())
}
