//! `ccs`: parse CCS terms, list transitions, check equivalences and
//! preorders, classify contexts, verify unique-solution instances and run
//! the property suite.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use ccs_core::congruence::{composition_closure_bounded, ClosureRelation, TriState};
use ccs_core::context::Context;
use ccs_core::lts::to_dot;
use ccs_core::solutions::{solution_report, Variant};
use ccs_core::suite::{run_all, SuiteConfig};
use ccs_core::{check, explore, step, Definitions, Error, Name, Process, RelationKind, Verdict};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "ccs", version, about = "Behavioural equivalences and unique solutions for CCS")]
struct Cli {
    /// State budget for every exploration.
    #[arg(long, global = true, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    max_states: u64,
    /// Depth of the context search behind `--closure`.
    #[arg(long, global = true, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
    probe_depth: u64,
    /// Seed for generated cases.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Include the full witness relation instead of its size.
    #[arg(long, global = true)]
    full_witness: bool,
    /// Definition file whose agents may be named in place of terms.
    #[arg(long, short = 'f', global = true, value_name = "FILE")]
    defs: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print a term, or every agent of a definition file, in normal form.
    Parse { input: String },
    /// List the one-step transitions of a term or agent.
    Trans {
        /// `[FILE] TERM`: a definition file followed by an agent name, or a term.
        #[arg(num_args = 1..=2, required = true)]
        args: Vec<String>,
    },
    /// Print the reachable transition system.
    Lts {
        #[arg(num_args = 1..=2, required = true)]
        args: Vec<String>,
        /// Graphviz output.
        #[arg(long)]
        dot: bool,
    },
    /// Check an equivalence.
    Eq {
        relation: Equivalence,
        left: String,
        right: String,
        /// Also search for a distinguishing context up to `--probe-depth`.
        #[arg(long)]
        closure: bool,
    },
    /// Check a preorder.
    Pre {
        relation: Preorder,
        left: String,
        right: String,
        #[arg(long)]
        closure: bool,
    },
    /// Classify a context written with `_` for the hole.
    Classify { context: String },
    /// Check a unique-solution instance: hypotheses, then the conclusion.
    Solution {
        /// Equation body, a context written with `_` for the variable.
        #[arg(long)]
        body: String,
        /// strong, weak, rooted, contraction or rooted-contraction.
        #[arg(long)]
        variant: String,
        left: String,
        right: String,
    },
    /// Run the randomized property suite.
    Suite {
        /// Random cases per property.
        #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
        cases: u64,
        /// Nesting depth of generated processes.
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(2..))]
        depth: u64,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Equivalence {
    Strong,
    Weak,
    Rooted,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Preorder {
    Expansion,
    Contraction,
    RootedContraction,
}

impl From<Equivalence> for RelationKind {
    fn from(e: Equivalence) -> RelationKind {
        match e {
            Equivalence::Strong => RelationKind::Strong,
            Equivalence::Weak => RelationKind::Weak,
            Equivalence::Rooted => RelationKind::Rooted,
        }
    }
}

impl From<Preorder> for RelationKind {
    fn from(p: Preorder) -> RelationKind {
        match p {
            Preorder::Expansion => RelationKind::Expansion,
            Preorder::Contraction => RelationKind::Contraction,
            Preorder::RootedContraction => RelationKind::RootedContraction,
        }
    }
}

/// Settings shared by every command.
struct RunConfig {
    max_states: usize,
    probe_depth: usize,
    seed: u64,
    json: bool,
    full_witness: bool,
}

enum Failure {
    /// The checked property does not hold.
    Negative,
    Error(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Error(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

struct Session {
    config: RunConfig,
    defs: Definitions,
}

fn load_defs(path: &Path) -> Result<Definitions, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Error(format!("cannot read {}: {e}", path.display())))?;
    Ok(Definitions::parse(&text)?)
}

impl Session {
    fn emit(&self, text: impl FnOnce() -> String, value: impl FnOnce() -> Value) {
        if self.config.json {
            println!("{}", value());
        } else {
            let text = text();
            if !text.is_empty() {
                println!("{text}");
            }
        }
    }

    /// An agent name of the loaded definitions, or a term whose free names
    /// are agents.
    fn term(&self, text: &str) -> Result<Process, Failure> {
        if self.defs.contains(text) {
            return Ok(self.defs.get(text)?.clone());
        }
        let parsed = Process::parse(text)?;
        if let Process::Var(x) = &parsed {
            return Err(Error::UndefinedAgent(x.to_string()).into());
        }
        let p = self.defs.instantiate(&parsed)?;
        let free = p.free_variables();
        if !free.is_empty() {
            return Err(Error::OpenTerm(free.iter().map(Name::to_string).collect()).into());
        }
        Ok(p)
    }

    /// `[FILE] TERM` positional arguments.
    fn file_term(&mut self, args: &[String]) -> Result<Process, Failure> {
        if let [file, _] = args {
            self.defs = load_defs(Path::new(file))?;
        }
        self.term(args.last().expect("at least one argument"))
    }

    fn parse(&self, input: &str) -> Outcome {
        if Path::new(input).is_file() {
            let defs = load_defs(Path::new(input))?;
            let agents: Vec<(String, String)> = defs
                .names()
                .iter()
                .map(|n| Ok((n.to_string(), defs.get(n.as_str())?.to_string())))
                .collect::<Result<_, Error>>()?;
            self.emit(
                || agents.iter().map(|(n, p)| format!("agent {n} = {p};")).collect::<Vec<_>>().join("\n"),
                || json!({ "agents": agents.iter().map(|(n, p)| json!({ "name": n, "process": p })).collect::<Vec<_>>() }),
            );
        } else {
            let p = self.defs.instantiate(&Process::parse(input)?)?;
            let free: Vec<String> = p.free_variables().iter().map(Name::to_string).collect();
            self.emit(|| p.to_string(), || json!({ "process": p.to_string(), "free_variables": free }));
        }
        Ok(())
    }

    fn trans(&mut self, args: &[String]) -> Outcome {
        let p = self.file_term(args)?;
        let moves = step(&p)?;
        self.emit(
            || moves.iter().map(|(u, q)| format!("-{u}-> {q}")).collect::<Vec<_>>().join("\n"),
            || {
                json!({
                    "process": p.to_string(),
                    "transitions": moves.iter().map(|(u, q)| json!({ "action": u.to_string(), "target": q.to_string() })).collect::<Vec<_>>(),
                })
            },
        );
        Ok(())
    }

    fn lts(&mut self, args: &[String], dot: bool) -> Outcome {
        let p = self.file_term(args)?;
        let lts = explore(&p, self.config.max_states)?;
        if dot && !self.config.json {
            print!("{}", to_dot(&lts));
            return Ok(());
        }
        self.emit(
            || {
                let mut lines: Vec<String> = lts.states().map(|(s, q)| format!("s{s} = {q}")).collect();
                lines.extend(lts.edges().map(|(s, u, t)| format!("s{s} -{u}-> s{t}")));
                lines.join("\n")
            },
            || {
                json!({
                    "root": lts.root(),
                    "states": lts.states().map(|(_, q)| q.to_string()).collect::<Vec<_>>(),
                    "edges": lts.edges().map(|(s, u, t)| json!({ "from": s, "action": u.to_string(), "to": t })).collect::<Vec<_>>(),
                })
            },
        );
        Ok(())
    }

    fn verdict_json(&self, v: &Verdict) -> Value {
        let mut out = json!({ "relation": v.kind.name(), "holds": v.holds });
        if let Some(w) = &v.witness {
            out["witness_size"] = json!(w.len());
            if self.config.full_witness {
                out["witness"] = json!(w.pairs().collect::<Vec<_>>());
            }
        }
        out["distinguisher"] = match &v.distinguisher {
            Some(d) => json!({
                "side": d.side.to_string(),
                "left": d.left_process.to_string(),
                "right": d.right_process.to_string(),
                "action": d.action.to_string(),
                "target": d.target_process.to_string(),
                "explanation": d.to_string(),
            }),
            None => Value::Null,
        };
        out
    }

    fn relation(&self, kind: RelationKind, left: &str, right: &str, closure: bool) -> Outcome {
        let (p, q) = (self.term(left)?, self.term(right)?);
        let v = check(kind, &p, &q, self.config.max_states)?;
        let probe = if closure { Some(self.closure(kind, &p, &q)?) } else { None };
        let mut value = self.verdict_json(&v);
        value["left"] = json!(p.to_string());
        value["right"] = json!(q.to_string());
        if let Some(probe) = &probe {
            value["closure"] = probe.clone();
        }
        self.emit(
            || {
                let mut lines = vec![format!(
                    "{}: {p} {} {q}",
                    if v.holds { "holds" } else { "does not hold" },
                    kind.symbol()
                )];
                if let Some(w) = &v.witness {
                    lines.push(format!("witness: {} pairs", w.len()));
                    if self.config.full_witness {
                        lines.push(format!("{w:?}"));
                    }
                }
                if let Some(d) = &v.distinguisher {
                    lines.push(format!("distinguisher: {d}"));
                }
                if let Some(probe) = &probe {
                    lines.push(format!("closure: {}", probe["summary"].as_str().unwrap_or_default()));
                }
                lines.join("\n")
            },
            || value.clone(),
        );
        if v.holds {
            Ok(())
        } else {
            Err(Failure::Negative)
        }
    }

    /// Distinguishing-context search under the weak relation matching `kind`.
    fn closure(&self, kind: RelationKind, p: &Process, q: &Process) -> Result<Value, Failure> {
        let relation = if kind.is_preorder() { ClosureRelation::Contraction } else { ClosureRelation::Weak };
        let mut alphabet = BTreeSet::new();
        for r in [p, q] {
            alphabet.extend(explore(r, self.config.max_states)?.labels().into_iter().map(|l| l.name));
        }
        let mut alphabet: Vec<Name> = alphabet.into_iter().collect();
        if alphabet.is_empty() {
            alphabet.push(Name::new("a").expect("valid name"));
        }
        Ok(match composition_closure_bounded(relation, p, q, self.config.probe_depth, &alphabet, self.config.max_states)? {
            TriState::Confirmed { checked, bound } => {
                json!({ "outcome": "confirmed", "checked": checked, "bound": bound, "summary": format!("no distinguishing context among {checked} ({bound})") })
            }
            TriState::Refuted(c) => {
                json!({ "outcome": "refuted", "context": c.to_string(), "summary": format!("distinguished by {c}") })
            }
            TriState::Inconclusive(why) => json!({ "outcome": "inconclusive", "summary": why }),
        })
    }

    fn classify(&self, text: &str) -> Outcome {
        let c = Context::parse(text)?;
        let k = c.classify();
        self.emit(
            || format!("{c}\n{k}"),
            || {
                let classes: serde_json::Map<String, Value> = k.flags().iter().map(|(n, b)| (n.to_string(), json!(b))).collect();
                json!({ "context": c.to_string(), "classes": classes })
            },
        );
        Ok(())
    }

    fn solution(&self, body: &str, variant: &str, left: &str, right: &str) -> Outcome {
        let variant: Variant = variant.parse()?;
        let body = Context::parse(body)?;
        let (p, q) = (self.term(left)?, self.term(right)?);
        let report = solution_report(variant, &body, &p, &q, self.config.max_states)?;
        self.emit(
            || {
                let mut lines = vec![format!("{variant}: {}", report.theorem), format!("body {body}")];
                for (name, ok) in &report.hypothesis_checks {
                    lines.push(format!("  {} {name}", if *ok { "pass" } else { "FAIL" }));
                }
                lines.push(match &report.conclusion {
                    Some(v) => format!(
                        "conclusion {p} {} {q}: {}",
                        v.kind.symbol(),
                        if v.holds { "holds" } else { "does not hold" }
                    ),
                    None => "conclusion not evaluated: a hypothesis failed".to_string(),
                });
                lines.join("\n")
            },
            || {
                json!({
                    "variant": variant.name(),
                    "theorem": report.theorem,
                    "body": body.to_string(),
                    "left": p.to_string(),
                    "right": q.to_string(),
                    "checks": report.hypothesis_checks.iter().map(|(n, b)| json!({ "check": n, "holds": b })).collect::<Vec<_>>(),
                    "conclusion": report.conclusion.as_ref().map(|v| self.verdict_json(v)),
                    "guarantee_met": report.guarantee_met(),
                })
            },
        );
        if report.guarantee_met() {
            Ok(())
        } else {
            Err(Failure::Negative)
        }
    }

    fn suite(&self, cases: usize, depth: usize) -> Outcome {
        let cfg = SuiteConfig { seed: self.config.seed, cases, max_states: self.config.max_states.min(2000), depth };
        let reports = run_all(&cfg);
        let ok = reports.iter().all(|r| r.ok());
        self.emit(
            || {
                let mut lines: Vec<String> = Vec::new();
                for r in &reports {
                    lines.push(r.to_string());
                    lines.extend(r.failures.iter().take(3).map(|f| format!("    {f}")));
                }
                lines.push(format!("seed {}: {}", cfg.seed, if ok { "all properties hold" } else { "failures found" }));
                lines.join("\n")
            },
            || {
                json!({
                    "seed": cfg.seed,
                    "cases": cfg.cases,
                    "ok": ok,
                    "properties": reports.iter().map(|r| json!({
                        "name": r.name,
                        "cases": r.cases,
                        "passed": r.passed,
                        "skipped": r.skipped,
                        "failures": r.failures,
                    })).collect::<Vec<_>>(),
                })
            },
        );
        if ok {
            Ok(())
        } else {
            Err(Failure::Negative)
        }
    }
}

fn run(cli: Cli) -> Outcome {
    let config = RunConfig {
        max_states: cli.max_states as usize,
        probe_depth: cli.probe_depth as usize,
        seed: cli.seed,
        json: cli.json,
        full_witness: cli.full_witness,
    };
    let defs = match &cli.defs {
        Some(path) => load_defs(path)?,
        None => Definitions::default(),
    };
    let mut session = Session { config, defs };
    match &cli.command {
        Command::Parse { input } => session.parse(input),
        Command::Trans { args } => session.trans(args),
        Command::Lts { args, dot } => session.lts(args, *dot),
        Command::Eq { relation, left, right, closure } => session.relation((*relation).into(), left, right, *closure),
        Command::Pre { relation, left, right, closure } => session.relation((*relation).into(), left, right, *closure),
        Command::Classify { context } => session.classify(context),
        Command::Solution { body, variant, left, right } => session.solution(body, variant, left, right),
        Command::Suite { cases, depth } => session.suite(*cases as usize, *depth as usize),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Negative) => ExitCode::from(1),
        Err(Failure::Error(msg)) => {
            if json {
                println!("{}", json!({ "error": msg }));
            } else {
                eprintln!("error: {msg}");
            }
            ExitCode::from(2)
        }
    }
}
