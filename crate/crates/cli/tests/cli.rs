use assert_cmd::Command;

fn papb() -> Command {
    Command::cargo_bin("papb").unwrap()
}

fn stdout(args: &[&str]) -> (String, i32) {
    let out = papb().args(args).output().unwrap();
    (String::from_utf8(out.stdout).unwrap().trim_end().to_string(), out.status.code().unwrap())
}

const TRIPLE: &str = r#"{"u":["x1","x1"],"x":{"src":"mc(x1,x2)","tgt":"mc(x2,x1)","braid":[1]},"mu":["mo(y1,f(mc(x1,x2)))","mo(f(x2),mo(y1,f(x1)))"]}"#;

#[test]
fn braid_relation_is_equal() {
    assert_eq!(stdout(&["braid", "eq", "s1 s2 s1", "s2 s1 s2", "--strands", "3"]), ("equal".into(), 0));
    assert_eq!(stdout(&["braid", "eq", "s1", "S1", "--strands", "2"]), ("not equal".into(), 1));
}

#[test]
fn chord_dimension_in_degree_two() {
    assert_eq!(stdout(&["cd", "dims", "--strands", "3", "--degree", "2"]), ("7".into(), 0));
}

#[test]
fn solved_associator_checks_clean() {
    let (phi, code) = stdout(&["assoc", "solve", "--mu", "1", "--degree", "3"]);
    assert_eq!(code, 0);
    papb()
        .args(["assoc", "check"])
        .write_stdin(phi)
        .assert()
        .success()
        .stdout("pentagon: 0, hexagon1: 0, hexagon2: 0\n");
}

#[test]
fn perturbed_associator_fails_check() {
    let (phi, _) = stdout(&["assoc", "solve", "--mu", "1", "--degree", "3"]);
    let bad = phi.replace("\"1/24\"", "\"1/12\"");
    assert_ne!(bad, phi);
    papb().args(["assoc", "check"]).write_stdin(bad).assert().code(1);
}

#[test]
fn usage_errors_exit_two() {
    papb().args(["braid", "eq", "s1", "--strands", "3"]).assert().code(2);
    papb().args(["braid", "perm", "s5", "--strands", "3"]).assert().code(2);
    papb().args(["tree", "graft", "mc(x1,x2)", "q1", "x1"]).assert().code(2);
    papb().args(["frobnicate"]).assert().code(2);
}

#[test]
fn coherence_checker_exit_codes() {
    assert_eq!(stdout(&["coherence", "check", "--example", "z2"]).1, 0);
    let (text, code) = stdout(&["coherence", "check", "--example", "s3"]);
    assert_eq!(code, 1);
    assert!(text.starts_with("rejected: "));
    let (text, code) = stdout(&["coherence", "check", "--example", "z2-hexagon-bad"]);
    assert_eq!(code, 1);
    assert!(text.contains("hexagon at (1, 1, 1)"));
}

#[test]
fn coherence_reads_tables_from_a_file() {
    let (json, _) = stdout(&["coherence", "check", "--example", "z2"]);
    assert!(json.ends_with("total instances: 76"));
    let dir = std::env::temp_dir().join(format!("papb-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("z2.json");
    let table = serde_json::to_string(&papb::algebra_checker::examples::z2_graded()).unwrap();
    std::fs::write(&path, table).unwrap();
    papb().args(["coherence", "check", "--in", path.to_str().unwrap()]).assert().success();
}

#[test]
fn tree_commands() {
    assert_eq!(stdout(&["tree", "omega", "mo(f(mc(x1,x2)), mo(f(x3), y1))"]).0, "[A1 A2 A3 T1]");
    assert_eq!(stdout(&["tree", "graft", "mc(x1,x2)", "c2", "mc(x1,x2)"]).0, "mc(x1,mc(x2,x3))");
    let (json, _) = stdout(&["tree", "enum", "--open", "1", "--closed", "2", "--json"]);
    let trees: Vec<String> = serde_json::from_str(&json).unwrap();
    // TAA and AAT: one f-block (1 bracketing) or two (2); ATA: two blocks (2); times 2 aerial orders
    assert_eq!(trees.len(), (3 + 3 + 2) * 2);
}

#[test]
fn papb_decompose_and_words() {
    let m = r#"{"src":"mo(y1,f(mc(x1,x2)))","tgt":"mo(f(x2),mo(y1,f(x1)))","braid":[1]}"#;
    let (text, code) = stdout(&["papb", "decompose", m]);
    assert_eq!(code, 0);
    assert!(text.ends_with("recomposes: true"));
    let (w, code) = stdout(&["papb", "words", m]);
    assert_eq!(code, 0);
    assert!(w.starts_with("(compose"));
    assert_eq!(stdout(&["papb", "coherence-selftest", "--instances", "20"]).1, 0);
}

#[test]
fn mixed_commands() {
    let (r, code) = stdout(&["mixed", "rho", TRIPLE]);
    assert_eq!(code, 0);
    assert!(r.starts_with("[1 shifted, 2 ordinary]"));
    let (phi, _) = stdout(&["assoc", "solve", "--mu", "1", "--degree", "2"]);
    papb().args(["mixed", "apply-phi", TRIPLE]).write_stdin(phi).assert().success();
}

#[test]
fn json_output_is_deterministic() {
    let args = ["voronov", "check", "--instances", "20", "--seed", "7", "--json"];
    let (a, code) = stdout(&args);
    assert_eq!(code, 0);
    assert_eq!(stdout(&args).0, a);
    let args = ["coherence", "check", "--example", "z2-graded-bad", "--json"];
    let (a, code) = stdout(&args);
    assert_eq!(code, 1);
    assert_eq!(stdout(&args).0, a);
}
