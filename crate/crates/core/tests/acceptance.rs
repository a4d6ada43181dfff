use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use ccs_core::context::{Classification, Context};
use ccs_core::equiv::clauses;
use ccs_core::gen::Gen;
use ccs_core::solutions::{is_solution, solution_report, SystemSpec, Variant};
use ccs_core::suite::{self, SuiteConfig};
use ccs_core::*;

type Outcome = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const SEED: u64 = 20_240_601;

fn p(s: &str) -> Process {
    Process::parse(s).unwrap()
}

fn ctx(s: &str) -> Context {
    Context::parse(s).unwrap()
}

fn ensure(cond: bool, msg: impl Into<String>) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn holds(v: Result<Verdict>) -> std::result::Result<bool, String> {
    v.map(|v| v.holds).map_err(|e| e.to_string())
}

fn transition_enumeration() -> Outcome {
    let got = step(&p("a.0 | 'a.0")).map_err(|e| e.to_string())?;
    let expected: BTreeSet<(Action, Process)> = [
        (Action::input("a"), p("0 | 'a.0")),
        (Action::output("a"), p("a.0 | 0")),
        (Action::Tau, p("0 | 0")),
    ]
    .into_iter()
    .collect();
    ensure(got == expected, format!("got {got:?}"))?;
    Ok("3 transitions".into())
}

fn contraction_examples() -> Outcome {
    let (a, a_ta, ta) = (p("a.0"), p("a.0 + t.a.0"), p("t.a.0"));
    ensure(holds(contraction(&a_ta, &a))?, "a + t.a does not contract to a")?;
    ensure(holds(contraction(&a, &a_ta))?, "a does not contract to a + t.a")?;
    ensure(!holds(contraction(&a, &ta))?, "a contracts to t.a")?;
    ensure(!holds(expansion(&a, &a_ta))?, "a expands a + t.a")?;
    ensure(holds(expansion(&ta, &a))?, "t.a does not expand a")?;
    Ok("expansion strictly inside contraction".into())
}

fn solution_of(body: &Context, kind: RelationKind, q: &Process) -> std::result::Result<bool, String> {
    is_solution(&SystemSpec::new(body.clone(), kind), q, 10_000).map_err(|e| e.to_string())
}

fn equation_non_uniqueness() -> Outcome {
    let body = ctx("a.0 | _");
    let (k, kb) = (p("rec k. a.k"), p("(rec k. a.k) | b.0"));
    ensure(solution_of(&body, RelationKind::Weak, &k)?, "K is not a solution")?;
    ensure(solution_of(&body, RelationKind::Weak, &kb)?, "K | b is not a solution")?;
    ensure(!holds(weak_bisim(&k, &kb))?, "K and K | b are weakly bisimilar")?;
    Ok("two inequivalent solutions".into())
}

fn non_sequential_counterexample() -> Outcome {
    let body = ctx("nu {a} (a._ | 'a.0)");
    let (nil, b) = (p("0"), p("b.0"));
    ensure(solution_of(&body, RelationKind::Weak, &nil)?, "0 is not a solution")?;
    ensure(solution_of(&body, RelationKind::Weak, &b)?, "b.0 is not a solution")?;
    ensure(!holds(weak_bisim(&nil, &b))?, "0 and b.0 are weakly bisimilar")?;
    let report = solution_report(Variant::WeakEquation, &body, &nil, &b, 10_000).map_err(|e| e.to_string())?;
    ensure(report.failed_checks() == vec!["body is seq"], format!("failed checks {:?}", report.failed_checks()))?;
    match solutions::unique_solution(Variant::WeakEquation, &body, &nil, &b, 10_000) {
        Err(Error::HypothesisFailed { check, .. }) if check == "body is seq" => Ok("hypothesis check reports seq".into()),
        other => Err(format!("unexpected {other:?}")),
    }
}

fn theorem_instances() -> Outcome {
    let body = ctx("a._");
    let (x, y) = (p("rec A. a.A"), p("rec A. a.t.A"));
    ensure(body.classify().wgs, "a._ is not wgs")?;
    ensure(solution_of(&body, RelationKind::Contraction, &x)?, "rec A. a.A is not a contraction solution")?;
    ensure(solution_of(&body, RelationKind::Contraction, &y)?, "rec A. a.t.A is not a contraction solution")?;
    let r = solution_report(Variant::Contraction, &body, &x, &y, 10_000).map_err(|e| e.to_string())?;
    ensure(r.hypotheses_hold() && r.guarantee_met(), format!("contraction instance {:?}", r.failed_checks()))?;
    ensure(r.conclusion.as_ref().is_some_and(|v| v.kind == RelationKind::Weak && v.holds), "no weak conclusion")?;

    for (body, x, y) in [
        ("a._ + b.0", "rec A. (a.A + b.0)", "rec A. (a.t.A + b.0)"),
        ("a._ + 0", "rec A. (a.A + 0)", "rec A. (a.t.A + 0)"),
    ] {
        let body = ctx(body);
        let (x, y) = (p(x), p(y));
        ensure(body.classify().wg, format!("{body} is not wg"))?;
        let r = solution_report(Variant::RootedContraction, &body, &x, &y, 10_000).map_err(|e| e.to_string())?;
        ensure(r.hypotheses_hold() && r.guarantee_met(), format!("{body}: {:?}", r.failed_checks()))?;
        ensure(r.conclusion.as_ref().is_some_and(|v| v.kind == RelationKind::Rooted && v.holds), "no rooted conclusion")?;
    }
    ensure(!ctx("a._ + 0").classify().wgs, "a._ + 0 has a guarded sum")?;
    Ok("weak and rooted conclusions".into())
}

fn report_outcome(reports: &[suite::PropertyReport], min_cases: usize) -> Outcome {
    let mut lines = Vec::new();
    for r in reports {
        if !r.ok() {
            return Err(format!("{}: {}", r, r.failures.iter().take(3).cloned().collect::<Vec<_>>().join("; ")));
        }
        if r.passed < min_cases {
            return Err(format!("{r}: fewer than {min_cases} evaluated cases"));
        }
        lines.push(format!("{} {}/{}", r.name, r.passed, r.cases));
    }
    Ok(lines.join(", "))
}

fn unique_solution_suites() -> Outcome {
    let cfg = SuiteConfig { seed: SEED, cases: 100, max_states: 2000, depth: 3 };
    let start = Instant::now();
    let reports: Vec<_> = [Variant::Strong, Variant::RootedEquation, Variant::Contraction, Variant::RootedContraction]
        .into_iter()
        .map(|v| suite::unique_solution_suite(v, &cfg))
        .collect();
    ensure(start.elapsed().as_secs() < 120, format!("took {:?}", start.elapsed()))?;
    report_outcome(&reports, 100)
}

fn pair_config(cases: usize) -> SuiteConfig {
    SuiteConfig { seed: SEED, cases, max_states: 2000, depth: 4 }
}

fn coarsest_congruence() -> Outcome {
    let cfg = pair_config(300);
    report_outcome(&[suite::rooted_via_sum(&cfg), suite::rooted_contraction_via_sum(&cfg)], 200)
}

fn corpus(n: usize) -> Vec<(Process, Process)> {
    (0..n as u64).map(|i| Gen::for_case(SEED, i).pair(4)).collect()
}

fn fixed_point_coinduction() -> Outcome {
    let mut witnesses = 0;
    let mut closed = 0;
    for (i, (x, y)) in corpus(300).into_iter().enumerate() {
        let Ok(cmp) = Comparison::new(&x, &y, 2000) else { continue };
        let (l, r) = (cmp.left().base(), cmp.right().base());
        let v = cmp.verdict(RelationKind::Weak);
        if v.holds {
            let w = v.witness.ok_or("missing witness")?.to_set();
            ensure(clauses::is_weak_bisimulation(l, r, &w), format!("witness for {x} and {y} is not a bisimulation"))?;
            witnesses += 1;
        }
        let mut g = Gen::for_case(SEED ^ 0x5eed, i as u64);
        for _ in 0..4 {
            let rel = suite::closed_subrelation(&mut g, l, r);
            ensure(rel.iter().all(|&(s, t)| cmp.weak_relation().contains(s, t)), format!("{x} vs {y}: {rel:?} escapes"))?;
            closed += 1;
        }
    }
    ensure(witnesses > 0, "no weakly bisimilar pair in the corpus")?;
    Ok(format!("{witnesses} witnesses re-verified, {closed} closed relations contained"))
}

fn trace_correspondence() -> Outcome {
    let mut systems = 0;
    for (x, y) in corpus(300) {
        for z in [x, y] {
            let Ok(w) = WeakLts::explore(&z, 50) else { continue };
            if let Some(msg) = suite::check_trace_correspondence(&w).map_err(|e| e.to_string())? {
                return Err(format!("{z}: {msg}"));
            }
            systems += 1;
        }
    }
    Ok(format!("{systems} systems"))
}

fn trace_transfer() -> Outcome {
    let mut pairs = 0;
    for (x, y) in corpus(300) {
        for (l, r) in [(&x, &y), (&y, &x)] {
            let Ok(cmp) = Comparison::new(l, r, 2000) else { continue };
            if !cmp.verdict(RelationKind::Contraction).holds {
                continue;
            }
            if let Some(msg) = suite::check_trace_transfer(&cmp, 6).map_err(|e| e.to_string())? {
                return Err(format!("{l} contracting to {r}: {msg}"));
            }
            pairs += 1;
        }
    }
    Ok(format!("{pairs} contraction pairs"))
}

/// Membership by conditions on each path from the root to a hole.
fn path_oracle(c: &Context) -> Classification {
    #[derive(Clone, Copy)]
    struct Path {
        prefix: bool,
        visible: bool,
        sequential: bool,
        guarded_sums: bool,
    }
    fn prefixed(c: &Context) -> bool {
        match c {
            Context::Prefix(..) => true,
            Context::Leaf(p) => matches!(**p, Process::Prefix(..)),
            _ => false,
        }
    }
    fn walk(c: &Context, at: Path, out: &mut Vec<Path>) {
        match c {
            Context::Hole => out.push(at),
            Context::Leaf(_) => {}
            Context::Prefix(u, c) => walk(c, Path { prefix: true, visible: at.visible || !u.is_tau(), ..at }, out),
            Context::Sum(l, r) => {
                let next = Path { guarded_sums: at.guarded_sums && prefixed(l) && prefixed(r), ..at };
                walk(l, next, out);
                walk(r, next, out);
            }
            Context::Par(l, r) => {
                walk(l, Path { sequential: false, ..at }, out);
                walk(r, Path { sequential: false, ..at }, out);
            }
            Context::Restr(_, c) | Context::Relab(c, _) => walk(c, Path { sequential: false, ..at }, out),
        }
    }
    let mut paths = Vec::new();
    walk(c, Path { prefix: false, visible: false, sequential: true, guarded_sums: true }, &mut paths);
    let all = |f: fn(&Path) -> bool| paths.iter().all(f);
    let (wg, gcontext) = (all(|q| q.prefix), all(|q| q.guarded_sums));
    Classification { context: true, gcontext, wg, wgs: wg && gcontext, sg: all(|q| q.visible), seq: all(|q| q.sequential) }
}

fn lattice_violation(c: &Context) -> Option<String> {
    let k = c.classify();
    let lattice = (!k.wgs || (k.wg && k.gcontext)) && (!k.sg || k.wg) && k.context;
    if !lattice {
        return Some(format!("{c}: implication fails for {k}"));
    }
    let oracle = path_oracle(c);
    (k != oracle).then(|| format!("{c}: classified {k}, expected {oracle}"))
}

fn classifier_lattice() -> Outcome {
    use rayon::prelude::*;
    let atoms = vec![Context::Hole, Context::leaf(p("0")), Context::leaf(p("a.0"))];
    let unary = |c: &Context| {
        let rf = Relabeling::from_pairs([(Name::new("a").unwrap(), Name::new("b").unwrap())]).unwrap();
        [
            Context::prefix(Action::Tau, c.clone()),
            Context::prefix(Action::input("a"), c.clone()),
            Context::prefix(Action::output("b"), c.clone()),
            Context::restr([Name::new("a").unwrap()], c.clone()),
            Context::relab(c.clone(), rf),
        ]
    };
    let level = |below: &[Context]| {
        let mut out = atoms.clone();
        out.extend(below.iter().flat_map(unary));
        for l in below {
            for r in below {
                out.push(Context::sum(l.clone(), r.clone()));
                out.push(Context::par(l.clone(), r.clone()));
            }
        }
        out
    };
    let l1 = level(&atoms);
    let l2 = level(&l1);
    let top_unary: Vec<Context> = atoms.iter().cloned().chain(l2.iter().flat_map(unary)).collect();
    let mut counts = [0usize; 6];
    for c in atoms.iter().chain(&l1).chain(&l2).chain(&top_unary) {
        if let Some(v) = lattice_violation(c) {
            return Err(v);
        }
        for (i, (_, f)) in c.classify().flags().iter().enumerate() {
            counts[i] += usize::from(*f);
        }
    }
    let binary: std::result::Result<usize, String> = l2
        .par_iter()
        .map(|l| {
            let mut n = 0;
            for r in &l2 {
                for c in [Context::sum(l.clone(), r.clone()), Context::par(l.clone(), r.clone())] {
                    if let Some(v) = lattice_violation(&c) {
                        return Err(v);
                    }
                    n += 1;
                }
            }
            Ok(n)
        })
        .sum();
    let total = atoms.len() + l1.len() + l2.len() + top_unary.len() + binary?;
    ensure(counts.iter().all(|&n| n > 0), "a class is empty at depth 3")?;
    Ok(format!("{total} contexts"))
}

fn hennessy_deng() -> Outcome {
    report_outcome(&[suite::hennessy_deng(&pair_config(300))], 200)
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("transition enumeration", transition_enumeration),
        ("contraction examples", contraction_examples),
        ("equation non-uniqueness", equation_non_uniqueness),
        ("non-sequential counterexample", non_sequential_counterexample),
        ("unique-solution instances", theorem_instances),
        ("unique-solution random suites", unique_solution_suites),
        ("coarsest (pre)congruence agreement", coarsest_congruence),
        ("fixed point and coinduction", fixed_point_coinduction),
        ("trace correspondence", trace_correspondence),
        ("trace transfer", trace_transfer),
        ("classifier implication lattice", classifier_lattice),
        ("Hennessy/Deng biconditional", hennessy_deng),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} ({detail}; {secs:.2}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({detail}; {secs:.2}s)", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
