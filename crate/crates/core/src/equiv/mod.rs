//! Greatest-fixpoint checkers for strong, weak and rooted bisimilarity and
//! for the expansion, contraction and rooted-contraction preorders.

pub mod clauses;
pub mod partition;
mod relation;

use std::borrow::Cow;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::lts::{StateId, WeakLts, DEFAULT_MAX_STATES};
use crate::syntax::{Action, Process};

pub use relation::PairRelation;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RelationKind {
    Strong,
    Weak,
    Rooted,
    Expansion,
    Contraction,
    RootedContraction,
}

impl RelationKind {
    pub const ALL: [RelationKind; 6] = [
        RelationKind::Strong,
        RelationKind::Weak,
        RelationKind::Rooted,
        RelationKind::Expansion,
        RelationKind::Contraction,
        RelationKind::RootedContraction,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RelationKind::Strong => "strong",
            RelationKind::Weak => "weak",
            RelationKind::Rooted => "rooted",
            RelationKind::Expansion => "expansion",
            RelationKind::Contraction => "contraction",
            RelationKind::RootedContraction => "rooted-contraction",
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            RelationKind::Strong => "~",
            RelationKind::Weak => "≈",
            RelationKind::Rooted => "≈c",
            RelationKind::Expansion => "≽e",
            RelationKind::Contraction => "≽bis",
            RelationKind::RootedContraction => "≽c",
        }
    }

    pub fn is_preorder(self) -> bool {
        matches!(self, RelationKind::Expansion | RelationKind::Contraction | RelationKind::RootedContraction)
    }

    pub fn is_rooted(self) -> bool {
        matches!(self, RelationKind::Rooted | RelationKind::RootedContraction)
    }
}

impl fmt::Display for RelationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RelationKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<RelationKind> {
        RelationKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::PreconditionFailed(format!("unknown relation `{s}`")))
    }
}

/// Which process makes the challenging move.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChallengeSide {
    Left,
    Right,
}

impl fmt::Display for ChallengeSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChallengeSide::Left => "left",
            ChallengeSide::Right => "right",
        })
    }
}

/// A pair that fails a clause: the move of the challenger that has no
/// acceptable answer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Distinguisher {
    pub left: StateId,
    pub right: StateId,
    pub side: ChallengeSide,
    pub action: Action,
    pub target: StateId,
    pub left_process: Process,
    pub right_process: Process,
    pub target_process: Process,
}

impl fmt::Display for Distinguisher {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (mover, other) = match self.side {
            ChallengeSide::Left => (&self.left_process, &self.right_process),
            ChallengeSide::Right => (&self.right_process, &self.left_process),
        };
        write!(
            f,
            "{} move {} -{}-> {} has no matching answer from {}",
            self.side, mover, self.action, self.target_process, other
        )
    }
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub kind: RelationKind,
    pub holds: bool,
    /// Present when the relation holds; contains the root pair.
    pub witness: Option<PairRelation>,
    /// Present when the relation fails.
    pub distinguisher: Option<Distinguisher>,
}

#[derive(Clone, Copy, Debug)]
enum Answer {
    Strong,
    Hat,
    Weak,
    OneOrStay,
}

fn answers<'a>(w: &'a WeakLts, s: StateId, u: &Action, answer: Answer) -> Cow<'a, [StateId]> {
    match answer {
        Answer::Strong => Cow::Borrowed(w.strong_succ(s, u)),
        Answer::Hat => Cow::Borrowed(w.hat_succ(s, u)),
        Answer::Weak => Cow::Borrowed(w.weak_succ(s, u)),
        Answer::OneOrStay => Cow::Owned(w.one_or_stay(s, u)),
    }
}

#[derive(Clone, Copy)]
struct Clause<'a> {
    side: ChallengeSide,
    answer: Answer,
    /// `None` means the answer must land in the relation being computed.
    fixed: Option<&'a PairRelation>,
}

struct Gfp {
    relation: PairRelation,
    root: Option<Distinguisher>,
}

/// Two explored and saturated systems together with lazily computed
/// relations between their states.
pub struct Comparison {
    left: WeakLts,
    right: WeakLts,
    strong: OnceLock<Gfp>,
    weak: OnceLock<Gfp>,
    expansion: OnceLock<Gfp>,
    contraction: OnceLock<Gfp>,
}

impl Comparison {
    pub fn new(p: &Process, q: &Process, max_states: usize) -> Result<Comparison> {
        Ok(Comparison::from_systems(WeakLts::explore(p, max_states)?, WeakLts::explore(q, max_states)?))
    }

    pub fn from_systems(left: WeakLts, right: WeakLts) -> Comparison {
        Comparison {
            left,
            right,
            strong: OnceLock::new(),
            weak: OnceLock::new(),
            expansion: OnceLock::new(),
            contraction: OnceLock::new(),
        }
    }

    pub fn left(&self) -> &WeakLts {
        &self.left
    }

    pub fn right(&self) -> &WeakLts {
        &self.right
    }

    /// The greatest fixpoint for the four coinductive relations; `None` for
    /// the rooted ones, which are not fixpoints.
    pub fn relation(&self, kind: RelationKind) -> Option<&PairRelation> {
        self.gfp(kind).map(|g| &g.relation)
    }

    pub fn weak_relation(&self) -> &PairRelation {
        &self.gfp(RelationKind::Weak).expect("weak is a fixpoint").relation
    }

    pub fn contraction_relation(&self) -> &PairRelation {
        &self.gfp(RelationKind::Contraction).expect("contraction is a fixpoint").relation
    }

    /// Whether state `s` of the left system is related to state `t` of the
    /// right system.
    pub fn related(&self, kind: RelationKind, s: StateId, t: StateId) -> bool {
        match kind {
            RelationKind::Rooted | RelationKind::RootedContraction => self.rooted_violation(kind, s, t).is_none(),
            _ => self.relation(kind).is_some_and(|r| r.contains(s, t)),
        }
    }

    /// Decides the relation between the two roots.
    pub fn verdict(&self, kind: RelationKind) -> Verdict {
        let (root_l, root_r) = (self.left.root(), self.right.root());
        match self.gfp(kind) {
            Some(g) => {
                let holds = g.relation.contains(root_l, root_r);
                Verdict {
                    kind,
                    holds,
                    witness: holds.then(|| g.relation.clone()),
                    distinguisher: if holds { None } else { g.root.clone() },
                }
            }
            None => {
                let violation = self.rooted_violation(kind, root_l, root_r);
                let witness = violation.is_none().then(|| {
                    let mut w = self.inner(kind).clone();
                    w.insert(root_l, root_r);
                    w
                });
                Verdict { kind, holds: violation.is_none(), witness, distinguisher: violation }
            }
        }
    }

    fn inner(&self, kind: RelationKind) -> &PairRelation {
        match kind {
            RelationKind::RootedContraction => self.contraction_relation(),
            _ => self.weak_relation(),
        }
    }

    fn rooted_violation(&self, kind: RelationKind, s: StateId, t: StateId) -> Option<Distinguisher> {
        let weak = self.weak_relation();
        let left_clause = match kind {
            RelationKind::RootedContraction => {
                Clause { side: ChallengeSide::Left, answer: Answer::Strong, fixed: Some(self.contraction_relation()) }
            }
            _ => Clause { side: ChallengeSide::Left, answer: Answer::Weak, fixed: Some(weak) },
        };
        let right_clause = Clause { side: ChallengeSide::Right, answer: Answer::Weak, fixed: Some(weak) };
        [left_clause, right_clause]
            .into_iter()
            .find_map(|c| self.violation(s, t, c, weak))
    }

    fn gfp(&self, kind: RelationKind) -> Option<&Gfp> {
        use ChallengeSide::{Left, Right};
        let both = |answer| {
            [Clause { side: Left, answer, fixed: None }, Clause { side: Right, answer, fixed: None }]
        };
        Some(match kind {
            RelationKind::Strong => self.strong.get_or_init(|| self.fixpoint(&both(Answer::Strong))),
            RelationKind::Weak => self.weak.get_or_init(|| self.fixpoint(&both(Answer::Hat))),
            RelationKind::Expansion => self.expansion.get_or_init(|| {
                self.fixpoint(&[
                    Clause { side: Left, answer: Answer::OneOrStay, fixed: None },
                    Clause { side: Right, answer: Answer::Weak, fixed: None },
                ])
            }),
            RelationKind::Contraction => self.contraction.get_or_init(|| {
                let weak = self.weak_relation();
                self.fixpoint(&[
                    Clause { side: Left, answer: Answer::OneOrStay, fixed: None },
                    Clause { side: Right, answer: Answer::Hat, fixed: Some(weak) },
                ])
            }),
            RelationKind::Rooted | RelationKind::RootedContraction => return None,
        })
    }

    /// Starts from all pairs, applies the clauses with fixed targets once,
    /// then deletes violators of the remaining clauses round by round until
    /// nothing changes.
    fn fixpoint(&self, clauses: &[Clause<'_>]) -> Gfp {
        let (n1, n2) = (self.left.len(), self.right.len());
        let root = (self.left.root(), self.right.root());
        let mut relation = PairRelation::full(n1, n2);
        let mut root_violation = None;
        let (fixed, dynamic): (Vec<_>, Vec<_>) = clauses.iter().copied().partition(|c| c.fixed.is_some());
        for s in 0..n1 {
            for t in 0..n2 {
                if let Some(d) = fixed.iter().find_map(|c| self.violation(s, t, *c, &relation)) {
                    relation.remove(s, t);
                    if (s, t) == root {
                        root_violation = Some(d);
                    }
                }
            }
        }
        loop {
            let mut changed = false;
            for s in 0..n1 {
                for t in 0..n2 {
                    if !relation.contains(s, t) {
                        continue;
                    }
                    if let Some(d) = dynamic.iter().find_map(|c| self.violation(s, t, *c, &relation)) {
                        relation.remove(s, t);
                        changed = true;
                        if (s, t) == root {
                            root_violation = Some(d);
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        Gfp { relation, root: root_violation }
    }

    fn violation(&self, s: StateId, t: StateId, clause: Clause<'_>, current: &PairRelation) -> Option<Distinguisher> {
        let target_rel = clause.fixed.unwrap_or(current);
        let (action, target) = match clause.side {
            ChallengeSide::Left => self.left.succ(s).iter().find(|(u, s2)| {
                !answers(&self.right, t, u, clause.answer).iter().any(|&t2| target_rel.contains(*s2, t2))
            })?,
            ChallengeSide::Right => self.right.succ(t).iter().find(|(u, t2)| {
                !answers(&self.left, s, u, clause.answer).iter().any(|&s2| target_rel.contains(s2, *t2))
            })?,
        };
        let target_process = match clause.side {
            ChallengeSide::Left => self.left.process(*target),
            ChallengeSide::Right => self.right.process(*target),
        };
        Some(Distinguisher {
            left: s,
            right: t,
            side: clause.side,
            action: action.clone(),
            target: *target,
            left_process: self.left.process(s).clone(),
            right_process: self.right.process(t).clone(),
            target_process: target_process.clone(),
        })
    }
}

/// Decides `kind` between `p` (left) and `q` (right).
pub fn check(kind: RelationKind, p: &Process, q: &Process, max_states: usize) -> Result<Verdict> {
    Ok(Comparison::new(p, q, max_states)?.verdict(kind))
}

pub fn strong_bisim(p: &Process, q: &Process) -> Result<Verdict> {
    check(RelationKind::Strong, p, q, DEFAULT_MAX_STATES)
}

pub fn weak_bisim(p: &Process, q: &Process) -> Result<Verdict> {
    check(RelationKind::Weak, p, q, DEFAULT_MAX_STATES)
}

pub fn rooted_bisim(p: &Process, q: &Process) -> Result<Verdict> {
    check(RelationKind::Rooted, p, q, DEFAULT_MAX_STATES)
}

/// Decides `p ≽e q`.
pub fn expansion(p: &Process, q: &Process) -> Result<Verdict> {
    check(RelationKind::Expansion, p, q, DEFAULT_MAX_STATES)
}

/// Decides `p ≽bis q`.
pub fn contraction(p: &Process, q: &Process) -> Result<Verdict> {
    check(RelationKind::Contraction, p, q, DEFAULT_MAX_STATES)
}

/// Decides `p ≽c q`.
pub fn rooted_contraction(p: &Process, q: &Process) -> Result<Verdict> {
    check(RelationKind::RootedContraction, p, q, DEFAULT_MAX_STATES)
}
