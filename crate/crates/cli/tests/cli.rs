use std::path::PathBuf;
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_semigraphoid"))
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn lines(o: &Output) -> Vec<String> {
    stdout(o).lines().map(str::to_string).collect()
}

#[test]
fn antichain_closure_of_contraction_pair() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "m.cim", "1;2|3\n1;3\n");
    let o = run(&["closure", "--mode", "antichain", m.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(lines(&o), ["1 ; 2,3"]);
}

#[test]
fn fixpoint_closure_lists_everything_and_dominants_on_request() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "m.cim", "# pair\n1;2|3\n1;3\n");
    let full = run(&["closure", m.to_str().unwrap()]);
    assert_eq!(
        lines(&full),
        ["1 ; 2", "1 ; 2 | 3", "1 ; 2,3", "1 ; 3", "1 ; 3 | 2"]
    );
    let dom = run(&["closure", "--dominants-only", m.to_str().unwrap()]);
    assert_eq!(lines(&dom), ["1 ; 2,3"]);
}

#[test]
fn empty_model_closes_to_nothing() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "m.cim", "# nothing\n");
    let o = run(&["closure", m.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
}

#[test]
fn malformed_triplet_is_an_input_error_with_line() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "m.cim", "1;2\n1;;2\n");
    let o = run(&["closure", m.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn missing_file_is_an_input_error() {
    let o = run(&["closure", "/nonexistent/model.cim"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn derive_reports_trace_or_failure() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "m.cim", "1;2|3\n1;3\n");
    let o = run(&["derive", "--trace", m.to_str().unwrap(), "1;2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("contraction"));
    assert!(text.contains("decomposition"));

    let f = write(&dir, "f.cim", "vars: a,b,c,d\na;b|c\na;c|d\na;d|b\n");
    let o = run(&["derive", f.to_str().unwrap(), "a;c|b"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn derive_accepts_fresh_variables_without_header() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "m.cim", "a;b\n");
    let o = run(&["derive", m.to_str().unwrap(), "a;e"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn implies_one_and_two_antecedents() {
    assert_eq!(run(&["implies", "a;b,c", "a;b"]).status.code(), Some(0));
    assert_eq!(run(&["implies", "a;b", "a;b,c"]).status.code(), Some(1));
    assert_eq!(
        run(&["implies", "1;2|3", "1;3", "1;2"]).status.code(),
        Some(0)
    );
    assert_eq!(
        run(&["implies", "1;2|3", "1;4", "1;2"]).status.code(),
        Some(1)
    );
    assert_eq!(run(&["implies", "a;b"]).status.code(), Some(1));
}

#[test]
fn implies_with_three_antecedents_needs_refute_flag() {
    let args = ["implies", "a;b|c", "a;c|d", "a;d|b", "a;c|b"];
    assert_eq!(run(&args).status.code(), Some(2));
    let o = bin()
        .args(["--trials", "40"])
        .args(&args[..1])
        .arg("--refute")
        .args(&args[1..])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn ci_model_of_parity_measure() {
    let dir = TempDir::new().unwrap();
    let p = write(
        &dir,
        "xor.cmw",
        "vars: 1:2 2:2 3:2\n0 0 0 1\n0 1 1 1\n1 0 1 1\n1 1 0 1\n",
    );
    let o = run(&["ci-model", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(lines(&o), ["1 ; 2", "1 ; 3", "2 ; 3"]);
}

#[test]
fn refute_finds_witness_for_unsound_step() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "m.cim", "a;b\n");
    let o = run(&["refute", m.to_str().unwrap(), "a;b,c"]);
    assert_eq!(o.status.code(), Some(0));
    let witness = write(&dir, "w.cmw", &stdout(&o));
    let model = run(&["ci-model", witness.to_str().unwrap()]);
    let got = lines(&model);
    assert!(got.contains(&"a ; b".to_string()));
    assert!(!got.contains(&"a ; b,c".to_string()));
}

#[test]
fn refute_is_inconclusive_on_sound_step() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "m.cim", "a;b,c\n");
    let o = run(&["--trials", "50", "refute", m.to_str().unwrap(), "a;b"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn refute_rejects_large_universes() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "m.cim", "vars: a,b,c,d,e,f,g\na;b\n");
    let o = run(&["refute", m.to_str().unwrap(), "a;c"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn verify_couples_exhaustive() {
    let o = run(&["--format", "kv", "verify", "couples", "--n", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("inputs=1540\n"));
    assert!(text.contains("failures=0\n"));
    assert!(text.ends_with("status=pass\n"));
}

#[test]
fn verify_reports_are_reproducible() {
    let args = [
        "--format",
        "json",
        "--seed",
        "7",
        "--trials",
        "10",
        "verify",
        "soundness",
        "--n",
        "3",
    ];
    let a = run(&args);
    let b = bin().args(["--jobs", "1"]).args(args).output().unwrap();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let json: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(json["inputs"], 10);
    assert_eq!(json["failures"], 0);
}

#[test]
fn enumerate_counts() {
    let o = run(&["enumerate", "--n", "3"]);
    assert_eq!(lines(&o).len(), 9);
    let o = run(&["enumerate", "--vars", "x,y"]);
    assert_eq!(lines(&o), ["x ; y"]);
}
