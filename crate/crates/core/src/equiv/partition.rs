//! Signature-based partition refinement on the disjoint union of two
//! systems. Serves as a fast path for strong and weak bisimilarity and as a
//! cross-check of the fixpoint engine.

use std::collections::HashMap;

use crate::error::Result;
use crate::lts::{explore, Lts, StateId, WeakLts};
use crate::syntax::{Action, Process};

/// Coarsest stable partition of a system given by successor lists; returns
/// a block number per state.
pub fn refine(succ: &[Vec<(Action, StateId)>]) -> Vec<usize> {
    let mut actions: HashMap<&Action, usize> = HashMap::new();
    let edges: Vec<Vec<(usize, StateId)>> = succ
        .iter()
        .map(|out| {
            out.iter()
                .map(|(u, t)| {
                    let next = actions.len();
                    (*actions.entry(u).or_insert(next), *t)
                })
                .collect()
        })
        .collect();
    let mut block = vec![0usize; succ.len()];
    let mut count = usize::from(!succ.is_empty());
    loop {
        let mut ids: HashMap<(usize, Vec<(usize, usize)>), usize> = HashMap::new();
        let next: Vec<usize> = edges
            .iter()
            .enumerate()
            .map(|(s, out)| {
                let mut sig: Vec<(usize, usize)> = out.iter().map(|&(a, t)| (a, block[t])).collect();
                sig.sort_unstable();
                sig.dedup();
                let fresh = ids.len();
                *ids.entry((block[s], sig)).or_insert(fresh)
            })
            .collect();
        let new_count = ids.len();
        block = next;
        if new_count == count {
            return block;
        }
        count = new_count;
    }
}

fn union(left: Vec<Vec<(Action, StateId)>>, right: Vec<Vec<(Action, StateId)>>) -> (Vec<Vec<(Action, StateId)>>, usize) {
    let offset = left.len();
    let mut all = left;
    all.extend(right.into_iter().map(|out| out.into_iter().map(|(u, t)| (u, t + offset)).collect()));
    (all, offset)
}

fn base_edges(l: &Lts) -> Vec<Vec<(Action, StateId)>> {
    (0..l.len()).map(|s| l.succ(s).to_vec()).collect()
}

/// Edges of the hatted weak system: `τ` to every state of the tau closure
/// (including the state itself) and `l` to every weak `l`-derivative.
fn saturated_edges(w: &WeakLts) -> Vec<Vec<(Action, StateId)>> {
    (0..w.len())
        .map(|s| {
            let mut out: Vec<(Action, StateId)> = w.eps_succ(s).iter().map(|&t| (Action::Tau, t)).collect();
            for l in w.weak_labels(s) {
                let u = Action::Visible(l.clone());
                out.extend(w.weak_succ(s, &u).iter().map(|&t| (u.clone(), t)));
            }
            out
        })
        .collect()
}

/// Strong bisimilarity classes of both systems, numbered jointly.
pub fn strong_classes(left: &Lts, right: &Lts) -> (Vec<usize>, Vec<usize>) {
    let (all, offset) = union(base_edges(left), base_edges(right));
    let mut blocks = refine(&all);
    let r = blocks.split_off(offset);
    (blocks, r)
}

/// Weak bisimilarity classes: strong classes of the saturated systems.
pub fn weak_classes(left: &WeakLts, right: &WeakLts) -> (Vec<usize>, Vec<usize>) {
    let (all, offset) = union(saturated_edges(left), saturated_edges(right));
    let mut blocks = refine(&all);
    let r = blocks.split_off(offset);
    (blocks, r)
}

pub fn strong_equivalent(p: &Process, q: &Process, max_states: usize) -> Result<bool> {
    let (l, r) = (explore(p, max_states)?, explore(q, max_states)?);
    let (bl, br) = strong_classes(&l, &r);
    Ok(bl[l.root()] == br[r.root()])
}

pub fn weak_equivalent(p: &Process, q: &Process, max_states: usize) -> Result<bool> {
    let (l, r) = (WeakLts::explore(p, max_states)?, WeakLts::explore(q, max_states)?);
    let (bl, br) = weak_classes(&l, &r);
    Ok(bl[l.root()] == br[r.root()])
}
