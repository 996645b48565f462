//! End-to-end tests of the `bgames` binary: verdict shapes, witness
//! round-trips, determinism, and exit codes.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bgames"))
}

/// Run the binary with `args`, expecting the given exit code; returns the
/// raw output.
fn run_expect(args: &[&str], code: i32) -> Output {
    let output = bin().args(args).output().expect("the binary runs");
    assert_eq!(
        output.status.code(),
        Some(code),
        "args {args:?}\nstdout: {}\nstderr: {}",
        String::from_utf8_lossy(&output.stdout),
        String::from_utf8_lossy(&output.stderr),
    );
    output
}

/// Run the binary expecting success and a single-line JSON verdict.
fn verdict(args: &[&str]) -> Value {
    let output = run_expect(args, 0);
    let stdout = String::from_utf8(output.stdout).expect("verdicts are UTF-8");
    serde_json::from_str(stdout.trim()).unwrap_or_else(|e| panic!("bad JSON from {args:?}: {e}\n{stdout}"))
}

fn path_str(path: &Path) -> &str {
    path.to_str().expect("temp paths are UTF-8")
}

struct Workdir {
    _dir: tempfile::TempDir,
    root: PathBuf,
}

impl Workdir {
    fn new() -> Self {
        let dir = tempfile::tempdir().expect("temp dir");
        let root = dir.path().to_owned();
        Workdir { _dir: dir, root }
    }

    fn file(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }
}

#[test]
fn staircase_value_and_constructed_machine() {
    let work = Workdir::new();
    let arena = work.file("g1_3.json");
    verdict(&["generate", "g1", "--n", "3", "-o", path_str(&arena)]);

    let value = verdict(&["value", path_str(&arena), "--cond", "b-until", "--nmax", "10"]);
    assert_eq!(value, serde_json::json!({ "value": 3 }));

    // The constructed 4-state machine keeps the bound-2 game within 3.
    let arena2 = work.file("g1_2.json");
    let generated = verdict(&[
        "generate", "g1", "--n", "2", "--with-strategy", "-o", path_str(&arena2),
    ]);
    let machine = generated["strategy"].as_str().expect("strategy path");
    let evaluated = verdict(&[
        "eval", path_str(&arena2), machine, "--cond", "b-until", "--nmax", "10",
    ]);
    assert_eq!(evaluated, serde_json::json!({ "value": 3 }));
}

#[test]
fn search_refutes_two_states_on_the_staircase() {
    let work = Workdir::new();
    let arena = work.file("g1_2.json");
    verdict(&["generate", "g1", "--n", "2", "-o", path_str(&arena)]);
    let refuted = verdict(&[
        "search", path_str(&arena), "--mem", "2", "--cond", "b-until", "--bound", "2",
    ]);
    assert_eq!(refuted, serde_json::json!({ "exists": false }));
}

#[test]
fn search_witnesses_reevaluate_to_the_verdict() {
    let work = Workdir::new();
    let arena = work.file("t2.json");
    verdict(&["generate", "tradeoff", "--n", "2", "-o", path_str(&arena)]);
    let witness = work.file("t2_witness.json");
    let found = verdict(&[
        "search", path_str(&arena), "--mem", "3", "--cond", "b-until", "--bound", "2",
        "-o", path_str(&witness),
    ]);
    assert_eq!(found["exists"], Value::Bool(true));
    assert_eq!(found["witness"], Value::String(path_str(&witness).to_owned()));

    let evaluated = verdict(&[
        "eval", path_str(&arena), path_str(&witness), "--cond", "b-until", "--nmax", "2",
    ]);
    let value = evaluated["value"].as_u64().expect("the witness stays bounded");
    assert!(value <= 2, "witness evaluates to {value}");
}

#[test]
fn solve_witnesses_reevaluate_to_the_verdict() {
    let work = Workdir::new();
    let arena = work.file("g1_2.json");
    verdict(&["generate", "g1", "--n", "2", "-o", path_str(&arena)]);
    let witness = work.file("solve_witness.json");
    let solved = verdict(&[
        "solve", path_str(&arena), "--cond", "b-until", "--bound", "3",
        "-o", path_str(&witness),
    ]);
    assert_eq!(solved["winner"], Value::String("eve".into()));
    assert_eq!(solved["witness"], Value::String(path_str(&witness).to_owned()));
    let evaluated = verdict(&[
        "eval", path_str(&arena), path_str(&witness), "--cond", "b-until", "--nmax", "3",
    ]);
    assert!(evaluated["value"].as_u64().expect("bounded") <= 3);
}

#[test]
fn layered_family_generates_the_nine_state_machine() {
    let work = Workdir::new();
    let arena = work.file("gkn.json");
    let generated = verdict(&[
        "generate", "gkn", "--k", "2", "--n", "2", "--with-strategy", "-o", path_str(&arena),
    ]);
    let machine_path = generated["strategy"].as_str().expect("strategy path");
    let machine: Value =
        serde_json::from_str(&std::fs::read_to_string(machine_path).expect("written")).expect("JSON");
    assert_eq!(machine["states"].as_array().expect("states").len(), 9);
}

#[test]
fn cyclic_family_is_one_vertex_with_a_loop_per_counter() {
    let work = Workdir::new();
    let arena_path = work.file("cyc.json");
    verdict(&["generate", "cyclic", "--k", "2", "-o", path_str(&arena_path)]);
    let arena: Value =
        serde_json::from_str(&std::fs::read_to_string(&arena_path).expect("written")).expect("JSON");
    assert_eq!(arena["vertices"].as_array().expect("vertices").len(), 1);
    assert_eq!(arena["edges"].as_array().expect("edges").len(), 2);
}

#[test]
fn outputs_are_byte_deterministic() {
    let work = Workdir::new();
    let first = work.file("a.json");
    let second = work.file("b.json");
    verdict(&["generate", "tradeoff", "--n", "3", "-o", path_str(&first)]);
    verdict(&["generate", "tradeoff", "--n", "3", "-o", path_str(&second)]);
    let a = std::fs::read(&first).expect("written");
    let b = std::fs::read(&second).expect("written");
    assert_eq!(a, b, "two runs of the same generation differ");

    let report1 = run_expect(&["verify-paper", "--scope", "fig1"], 0).stdout;
    let report2 = run_expect(&["verify-paper", "--scope", "fig1"], 0).stdout;
    assert_eq!(report1, report2, "two verification runs differ");
}

#[test]
fn verify_scope_fig1_checks_three_claims() {
    let output = run_expect(&["verify-paper", "--scope", "fig1"], 0);
    let report = String::from_utf8(output.stdout).expect("UTF-8");
    let claim_lines = report.lines().filter(|l| l.starts_with("PASS") || l.starts_with("FAIL"));
    assert_eq!(claim_lines.count(), 3, "fig1 runs exactly three claims:\n{report}");
    assert!(report.contains("3 claims, 0 failed"), "{report}");
}

#[test]
fn unknown_scopes_and_bad_inputs_exit_one() {
    run_expect(&["verify-paper", "--scope", "nonsense"], 1);

    let work = Workdir::new();
    let missing = work.file("missing.json");
    run_expect(&["value", path_str(&missing), "--cond", "b-until", "--nmax", "3"], 1);

    let garbage = work.file("garbage.json");
    std::fs::write(&garbage, "{\"k\": 1}").expect("written");
    run_expect(&["value", path_str(&garbage), "--cond", "b-until", "--nmax", "3"], 1);
}

#[test]
fn exhausted_search_budgets_exit_two() {
    let work = Workdir::new();
    let arena = work.file("g1_2.json");
    verdict(&["generate", "g1", "--n", "2", "-o", path_str(&arena)]);
    let output = run_expect(
        &["search", path_str(&arena), "--mem", "2", "--cond", "b-until", "--bound", "2",
          "--budget", "10"],
        2,
    );
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("budget"), "stderr: {stderr}");
}

#[test]
fn thread_cap_is_validated() {
    let work = Workdir::new();
    let arena = work.file("t.json");
    verdict(&["generate", "tradeoff", "--n", "2", "-o", path_str(&arena)]);

    let ok = bin()
        .env("CG_THREADS", "4")
        .args(["value", path_str(&arena), "--cond", "b-until", "--nmax", "4"])
        .output()
        .expect("runs");
    assert_eq!(ok.status.code(), Some(0));

    let bad = bin()
        .env("CG_THREADS", "many")
        .args(["value", path_str(&arena), "--cond", "b-until", "--nmax", "4"])
        .output()
        .expect("runs");
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn transforms_emit_loadable_arenas() {
    let work = Workdir::new();
    let arena = work.file("in.json");
    std::fs::write(
        &arena,
        serde_json::to_string(&serde_json::json!({
            "k": 1,
            "initial": "a",
            "vertices": [
                {"id": "a", "owner": "E", "color": 0},
                {"id": "b", "owner": "A", "color": 1}
            ],
            "edges": [
                {"from": "a", "to": "b", "act": ["i"]},
                {"from": "b", "to": "a", "act": ["r"]}
            ]
        }))
        .expect("JSON"),
    )
    .expect("written");

    let out = work.file("even.json");
    let summary = verdict(&["transform", "even", path_str(&arena), "-o", path_str(&out)]);
    assert_eq!(summary["vertices"], serde_json::json!(6));
    assert_eq!(summary["counters"], serde_json::json!(2));
    // The emitted arena loads and solves.
    let solved = verdict(&[
        "solve", path_str(&out), "--cond", "b-parity", "--bound", "6",
    ]);
    assert!(solved["winner"].is_string());
}

#[test]
fn ranks_report_the_chain_and_dot_renders() {
    let work = Workdir::new();
    let arena = work.file("ranked.json");
    std::fs::write(
        &arena,
        serde_json::to_string(&serde_json::json!({
            "k": 1,
            "initial": "u",
            "vertices": [
                {"id": "u", "owner": "E", "color": 1},
                {"id": "w", "owner": "A", "color": 2},
                {"id": "f", "owner": "E", "color": 1}
            ],
            "edges": [
                {"from": "u", "to": "w", "act": ["i"]},
                {"from": "w", "to": "f", "act": ["e"]}
            ],
            "target": ["f"],
            "rank": {"u": 0, "w": 1, "f": 2}
        }))
        .expect("JSON"),
    )
    .expect("written");

    let ranks = verdict(&["ranks", path_str(&arena), "--width", "2"]);
    assert_eq!(ranks["ranks"]["f"], serde_json::json!(2));
    assert!(ranks["steps"].as_u64().expect("steps") <= 4);

    let output = run_expect(&["export-dot", path_str(&arena)], 0);
    let dot = String::from_utf8(output.stdout).expect("UTF-8");
    assert!(dot.starts_with("digraph"), "{dot}");
    assert!(dot.contains("\"u\"") && dot.contains("\"f\""), "{dot}");
}
