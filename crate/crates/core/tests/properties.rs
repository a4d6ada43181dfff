use std::collections::BTreeSet;

use ccs_core::context::{context_step, Context};
use ccs_core::gen::{ContextClass, Gen};
use ccs_core::*;
use proptest::prelude::*;

fn config() -> ProptestConfig {
    ProptestConfig { cases: 256, ..ProptestConfig::default() }
}

fn x() -> Name {
    Name::new("X").unwrap()
}

/// Transitions read directly off the rules, with recursion unfolded by a
/// separate substitution.
mod naive {
    use super::*;

    fn subst(p: &Process, x: &Name, v: &Process) -> Process {
        match p {
            Process::Nil => Process::Nil,
            Process::Var(y) if y == x => v.clone(),
            Process::Var(_) => p.clone(),
            Process::Prefix(u, q) => Process::prefix(u.clone(), subst(q, x, v)),
            Process::Sum(l, r) => Process::sum(subst(l, x, v), subst(r, x, v)),
            Process::Par(l, r) => Process::par(subst(l, x, v), subst(r, x, v)),
            Process::Restr(ns, q) => Process::restr(ns.iter().cloned(), subst(q, x, v)),
            Process::Relab(q, rf) => Process::relab(subst(q, x, v), rf.clone()),
            Process::Rec(y, _) if y == x => p.clone(),
            Process::Rec(y, q) => Process::rec(y.clone(), subst(q, x, v)),
        }
    }

    fn restricted(ns: &BTreeSet<Name>, u: &Action) -> bool {
        match u {
            Action::Tau => false,
            Action::Visible(l) => ns.contains(&l.name),
        }
    }

    pub fn step(p: &Process) -> Vec<(Action, Process)> {
        let mut out = Vec::new();
        match p {
            Process::Nil | Process::Var(_) => {}
            Process::Prefix(u, q) => out.push((u.clone(), (**q).clone())),
            Process::Sum(l, r) => {
                out.extend(step(l));
                out.extend(step(r));
            }
            Process::Par(l, r) => {
                let (ls, rs) = (step(l), step(r));
                for (u, l2) in &ls {
                    out.push((u.clone(), Process::par(l2.clone(), (**r).clone())));
                }
                for (u, r2) in &rs {
                    out.push((u.clone(), Process::par((**l).clone(), r2.clone())));
                }
                for (u, l2) in &ls {
                    for (v, r2) in &rs {
                        if let (Action::Visible(a), Action::Visible(b)) = (u, v) {
                            if a.name == b.name && a.polarity != b.polarity {
                                out.push((Action::Tau, Process::par(l2.clone(), r2.clone())));
                            }
                        }
                    }
                }
            }
            Process::Restr(ns, q) => {
                for (u, q2) in step(q) {
                    if !restricted(ns, &u) {
                        out.push((u, Process::restr(ns.iter().cloned(), q2)));
                    }
                }
            }
            Process::Relab(q, rf) => {
                for (u, q2) in step(q) {
                    out.push((rf.apply(&u), Process::relab(q2, rf.clone())));
                }
            }
            Process::Rec(y, q) => out.extend(step(&subst(q, y, p))),
        }
        out
    }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn round_trip(seed in any::<u64>()) {
        let p = Gen::new(seed).process(5);
        prop_assert_eq!(Process::parse(&pretty(&p)).unwrap(), p);
    }

    #[test]
    fn substitution_is_idempotent_on_closed_values(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let body = g.context(ContextClass::Any, 3).to_expression(&x());
        let v = g.process(3);
        let once = substitute(&body, &x(), &v).unwrap();
        prop_assert_eq!(substitute(&once, &x(), &v).unwrap(), once);
    }

    #[test]
    fn substitution_free_variables(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let c = g.context(ContextClass::Any, 3);
        let body = if g.chance(0.5) { Process::sum(c.to_expression(&x()), Process::Var(Name::new("Y").unwrap())) } else { c.to_expression(&x()) };
        let v = g.process(3);
        let mut expected = body.free_variables();
        expected.remove(&x());
        prop_assert_eq!(substitute(&body, &x(), &v).unwrap().free_variables(), expected);
    }

    #[test]
    fn relabeling_commutes_with_complement(a in 0usize..3, b in 0usize..3, output in any::<bool>()) {
        let names = ["a", "b", "c"].map(|s| Name::new(s).unwrap());
        let rf = Relabeling::from_pairs([(names[a].clone(), names[b].clone())]).unwrap();
        let u = if output { Action::output(names[a].as_str()) } else { Action::input(names[a].as_str()) };
        let lifted = u.complement().unwrap();
        prop_assert_eq!(relabel_action(&rf, &lifted), relabel_action(&rf, &u).complement().unwrap());
        prop_assert_eq!(relabel_action(&rf, &Action::Tau), Action::Tau);
    }

    #[test]
    fn step_agrees_with_naive_rules(seed in any::<u64>()) {
        let p = Gen::new(seed).process(5);
        let naive: BTreeSet<(Action, Process)> = naive::step(&p).into_iter().map(|(u, q)| (u, q.canonical())).collect();
        prop_assert_eq!(step(&p).unwrap(), naive);
    }

    #[test]
    fn restriction_hides_names(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let p = g.process(4);
        let a = Name::new("a").unwrap();
        for (u, _) in step(&Process::restr([a.clone()], p)).unwrap() {
            prop_assert!(u.label().is_none_or(|l| l.name != a));
        }
    }

    #[test]
    fn saturation_is_deterministic(seed in any::<u64>()) {
        let p = Gen::new(seed).process(4);
        let base = explore(&p, 2000).unwrap();
        let (w1, w2) = (saturate(base.clone()), saturate(base));
        let mut actions: Vec<Action> = w1.base().labels().into_iter().map(Action::Visible).collect();
        actions.push(Action::Tau);
        for s in 0..w1.len() {
            prop_assert_eq!(w1.eps_succ(s), w2.eps_succ(s));
            for u in &actions {
                prop_assert_eq!(w1.weak_succ(s, u), w2.weak_succ(s, u));
            }
        }
    }

    #[test]
    fn eps_is_stay_or_tau_trace(seed in any::<u64>()) {
        let p = Gen::new(seed).process(4);
        let w = WeakLts::explore(&p, 2000).unwrap();
        for s in 0..w.len() {
            let mut expected: BTreeSet<StateId> = suite::weak_reach_witnesses(w.base(), s, &Action::Tau).into_keys().collect();
            expected.insert(s);
            prop_assert_eq!(w.eps_succ(s).iter().copied().collect::<BTreeSet<_>>(), expected);
        }
    }

    #[test]
    fn apply_respects_compose(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let (c, d, p) = (g.context(ContextClass::Any, 3), g.context(ContextClass::Any, 3), g.process(3));
        prop_assert_eq!(c.compose(&d).apply(&p).unwrap().canonical(), c.apply(&d.apply(&p).unwrap()).unwrap().canonical());
    }

    #[test]
    fn context_moves_are_sound(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let (c, p) = (g.context(ContextClass::Any, 3), g.process(3));
        let filled = step(&c.apply(&p).unwrap()).unwrap();
        for (u, c2) in context_step(&c).unwrap() {
            prop_assert!(filled.contains(&(u, c2.apply(&p).unwrap().canonical())));
        }
    }

    #[test]
    fn weakly_guarded_contexts_move_first(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let (c, p) = (g.context(ContextClass::Wg, 3), g.process(3));
        let from_context: BTreeSet<(Action, Process)> =
            context_step(&c).unwrap().into_iter().map(|(u, c2)| (u, c2.apply(&p).unwrap().canonical())).collect();
        prop_assert_eq!(step(&c.apply(&p).unwrap()).unwrap(), from_context);
    }

    #[test]
    fn holes_of_wg_contexts_are_guarded(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let c = g.context(ContextClass::Wg, 3);
        prop_assert!(weakly_guarded_expr(&c.to_expression(&x())));
    }

    #[test]
    fn composed_contexts_keep_their_class(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let (c, d) = (g.context(ContextClass::Wgs, 3), g.context(ContextClass::Wgs, 3));
        let k = c.compose(&d).classify();
        prop_assert!(k.wgs && k.wg);
    }
}

#[test]
fn suite_properties_hold() {
    let cfg = suite::SuiteConfig { cases: 50, seed: 3, ..suite::SuiteConfig::default() };
    for r in suite::run_all(&cfg) {
        assert!(r.ok(), "{r}: {:?}", r.failures);
    }
}

#[test]
fn context_round_trips_through_expressions() {
    let mut g = Gen::new(9);
    for _ in 0..200 {
        let c = g.context(ContextClass::Any, 3);
        assert_eq!(Context::from_expression(&c.to_expression(&x()), &x()).unwrap(), c);
    }
}
