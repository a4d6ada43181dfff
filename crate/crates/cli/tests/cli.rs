use std::path::PathBuf;
use std::process::{Command, Output};

fn ccs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ccs")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(args: &[&str]) -> i32 {
    ccs(args).status.code().unwrap()
}

fn defs() -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli-defs.ccs");
    std::fs::write(&path, "# examples\nagent A = a.0 | 'a.0;\nagent Z = 0;\nagent K = a.K;\nagent KB = K | b.0;\n").unwrap();
    path
}

#[test]
fn trans_lists_three_moves() {
    let file = defs();
    let o = ccs(&["trans", file.to_str().unwrap(), "A"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "-a-> 0 | 'a.0\n-'a-> a.0 | 0\n-t-> 0 | 0\n");
}

#[test]
fn trans_of_nil_is_empty() {
    let file = defs();
    let o = ccs(&["trans", file.to_str().unwrap(), "Z"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "");
}

#[test]
fn undefined_agent_is_an_error() {
    let file = defs();
    let o = ccs(&["trans", file.to_str().unwrap(), "Q"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Q"));
}

#[test]
fn relation_exit_codes() {
    assert_eq!(code(&["eq", "weak", "t.a.0", "a.0"]), 0);
    assert_eq!(code(&["eq", "rooted", "t.a.0", "a.0"]), 1);
    assert_eq!(code(&["pre", "contraction", "a.0 + t.a.0", "a.0"]), 0);
    assert_eq!(code(&["pre", "expansion", "a.0", "a.0 + t.a.0"]), 1);
    assert_eq!(code(&["eq", "weak", "a.(", "a.0"]), 2);
    assert_eq!(code(&["eq", "bogus", "a.0", "a.0"]), 2);
    assert_eq!(code(&["--max-states", "5", "eq", "strong", "rec A. (a.A | b.0)", "a.0"]), 2);
}

#[test]
fn agents_resolve_through_definitions() {
    let file = defs();
    let f = file.to_str().unwrap();
    assert_eq!(code(&["-f", f, "eq", "weak", "K", "KB"]), 1);
    assert_eq!(code(&["-f", f, "eq", "strong", "K", "a.K"]), 0);
}

#[test]
fn json_verdicts() {
    let o = ccs(&["--json", "eq", "rooted", "t.a.0", "a.0"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["holds"], false);
    assert_eq!(v["relation"], "rooted");
    assert_eq!(v["distinguisher"]["side"], "left");
    let o = ccs(&["--json", "pre", "contraction", "a.0 + t.a.0", "a.0"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["holds"], true);
    assert!(v["witness_size"].as_u64().unwrap() >= 1);
    assert!(v.get("witness").is_none());
    let o = ccs(&["--json", "--full-witness", "pre", "contraction", "a.0 + t.a.0", "a.0"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["witness"].as_array().unwrap().len() as u64, v["witness_size"].as_u64().unwrap());
}

#[test]
fn json_errors() {
    let o = ccs(&["--json", "eq", "weak", "a.(", "a.0"]);
    assert_eq!(o.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["error"].as_str().unwrap().contains("syntax"));
}

#[test]
fn classify_hole() {
    let o = ccs(&["classify", "_"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("context yes, gcontext yes, wg no, wgs no, sg no, seq yes"));
    let o = ccs(&["--json", "classify", "a._ + b.0"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["classes"]["wg"], true);
}

#[test]
fn solution_instances() {
    let o = ccs(&["solution", "--body", "a._", "--variant", "contraction", "rec A. a.A", "rec A. a.t.A"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("conclusion rec A. a.A ≈ rec A. a.t.A: holds"));
    let o = ccs(&["--json", "solution", "--body", "nu {a} (a._ | 'a.0)", "--variant", "weak", "0", "b.0"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["checks"][0], serde_json::json!({ "check": "body is seq", "holds": false }));
    assert!(v["conclusion"].is_null());
    assert_eq!(code(&["solution", "--body", "a._", "--variant", "nope", "0", "0"]), 2);
}

#[test]
fn lts_and_dot() {
    let o = ccs(&["lts", "rec A. (a.A + b.0)"]);
    assert_eq!(stdout(&o), "s0 = rec X0. (a.X0 + b.0)\ns1 = 0\ns0 -a-> s0\ns0 -b-> s1\n");
    let o = ccs(&["lts", "--dot", "a.0"]);
    assert!(stdout(&o).starts_with("digraph lts {"));
}

#[test]
fn parse_prints_normal_forms() {
    let file = defs();
    let o = ccs(&["parse", file.to_str().unwrap()]);
    assert!(stdout(&o).contains("agent K = rec K. a.K;"));
    let o = ccs(&["parse", "a.0+b.0"]);
    assert_eq!(stdout(&o), "a.0 + b.0\n");
}

#[test]
fn suite_is_deterministic() {
    let args = ["--json", "--seed", "42", "suite", "--cases", "20"];
    let (a, b) = (ccs(&args), ccs(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["ok"], true);
}

#[test]
fn invalid_configuration() {
    assert_eq!(code(&["--max-states", "0", "eq", "weak", "a.0", "a.0"]), 2);
    assert_eq!(code(&["suite", "--cases", "0"]), 2);
}
