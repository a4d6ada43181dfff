//! Toolkit for Milner's CCS: parsing, SOS transitions, finite transition
//! systems, behavioural equivalences and preorders, guardedness of contexts,
//! and checks of unique-solution results for equations and contractions.

pub mod congruence;
pub mod context;
pub mod equiv;
pub mod error;
pub mod gen;
pub mod lts;
pub mod parser;
pub mod semantics;
pub mod solutions;
pub mod suite;
pub mod syntax;

pub use error::{Error, Result};
pub use lts::{explore, saturate, Lts, StateId, WeakLts};
pub use parser::Definitions;
pub use semantics::{no_label, step, trace_holds, unique_label, ActionList};
pub use syntax::{pretty, relabel_action, substitute, Action, Label, Name, Polarity, Process, Relabeling};
pub use equiv::{
    check, contraction, expansion, rooted_bisim, rooted_contraction, strong_bisim, weak_bisim, ChallengeSide,
    Comparison, Distinguisher, PairRelation, RelationKind, Verdict,
};
pub use context::{context_step, weakly_guarded_expr, weakly_guarded_report, Classification, Context, GuardednessReport};
