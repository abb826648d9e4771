use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name).display().to_string()
}

fn wahl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wahl")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let o = wahl(&full);
    let v = serde_json::from_str(&stdout(&o)).expect("json report");
    (o.status.code().expect("exit code"), v)
}

#[test]
fn info_reports_p1_invariants() {
    let (code, v) = json(&["info", &data("p1.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["det"], "81");
    assert_eq!(v["negative_definite"], true);
    assert_eq!(v["e"], 5);
    assert_eq!(v["sigma"], -4);
    assert_eq!(v["h1_order"], "81");
}

#[test]
fn info_text_mentions_determinant() {
    let o = wahl(&["info", &data("p1.json")]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("det: 81"));
}

#[test]
fn wahl_tree_round_trips_through_info() {
    let o = wahl(&["wahl", "4"]);
    assert!(o.status.success());
    let graph = stdout(&o);
    let (code, v) = json(&["boundary", graph.trim()]);
    assert_eq!(code, 0);
    assert_eq!(v["h1_order"], "289");
}

#[test]
fn monodromy_eval_closes_up() {
    let (code, v) = json(&["monodromy", "eval", "(a^3 b)^3"]);
    assert_eq!(code, 0);
    assert_eq!(v["identity"], true);
}

#[test]
fn monodromy_verify_reports_mismatch() {
    let o = wahl(&["monodromy", "verify", "ab", "ba"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("different"));
    let o = wahl(&["monodromy", "verify", "(ab)^6", "1"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn monodromy_census_counts_euler_number() {
    let (code, v) = json(&["monodromy", "census", "(a^3 b)^3"]);
    assert_eq!(code, 0);
    assert_eq!(v["euler_count"], 12);
    assert_eq!(v["certified"], true);
}

#[test]
fn config_verify_and_search() {
    let o = wahl(&["config", "verify", &data("construction1.json")]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let (code, v) = json(&["config", "search", &data("construction1_partial.json"), "--bound", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["classes"].as_array().map(Vec::len), Some(4));
}

#[test]
fn config_search_reports_no_solution_as_failure() {
    let single = r#"{"lattice":{"positive":1,"negative":1},
        "graph":{"vertices":[{"id":0,"weight":-4}],"edges":[]},"classes":[null]}"#;
    let o = wahl(&["config", "search", single, "--bound", "1"]);
    assert_eq!(o.status.code(), Some(1));
    let o = wahl(&["config", "search", single, "--bound", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn blowdown_of_p1_in_cp2_13() {
    let (code, v) = json(&["blowdown", &data("blowdown_p1.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["e"], 12);
    assert_eq!(v["sigma"], -8);
    assert_eq!(v["name"], "CP²#9C̄P²");
}

#[test]
fn numerology_commands() {
    let (_, v) = json(&["swdim", "--k-sq", "0", "--sigma", "-8", "--e", "12"]);
    assert_eq!(v["d"], 0);
    let (_, v) = json(&["wallcross", "--minus", "0", "--d", "0"]);
    assert_eq!(v["plus"], -1);
    let o = wahl(&["swdim", "--k-sq", "1", "--sigma", "-8", "--e", "12"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn swreport_names_failing_conditions() {
    let o = wahl(&["swreport", &data("construction1.json"), "--a", "0,0,1,-1,0,0,0,0,0,0,0,0,0,0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("a.a >= 0: -2: FAIL"));
}

#[test]
fn seifert_commands_agree_on_p1() {
    let o = wahl(&["seifert", "from-plumbing", &data("p1.json")]);
    assert_eq!(stdout(&o).trim(), "M(0; (1,1), (3,2), (3,2), (3,2))");
    let (_, v) = json(&["seifert", "h1", r#"{"e0":0,"pairs":[[1,1],[3,2],[3,2],[3,2]]}"#]);
    assert_eq!(v["h1_order"], "81");
    let (_, v) = json(&["seifert", "to-plumbing", r#"{"e0":0,"pairs":[[1,1],[3,2],[3,2],[3,2]]}"#]);
    assert_eq!(v["vertices"].as_array().map(Vec::len), Some(4));
}

#[test]
fn repro_passes_and_is_deterministic() {
    let a = wahl(&["repro"]);
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    let b = wahl(&["repro"]);
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    for line in text.lines().filter(|l| l.starts_with("PASS") || l.starts_with("FAIL")) {
        assert!(
            ["published", "derived", "trivial"].contains(&line.split_whitespace().nth(1).unwrap_or_default()),
            "untagged line {line}"
        );
    }
}

#[test]
fn repro_failure_exits_one() {
    let dir = std::env::temp_dir().join(format!("wahl-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.json");
    std::fs::write(
        &path,
        r#"{"checks":[{"name":"wrong order","anchor":"P1 boundary","provenance":"derived",
            "op":"h1_order","input":{"graph":"P1"},"expected":"80"}]}"#,
    )
    .unwrap();
    let o = wahl(&["repro", "--manifest", path.to_str().unwrap()]);
    std::fs::remove_dir_all(&dir).ok();
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL derived   wrong order"));
}

#[test]
fn malformed_input_exits_two_with_position() {
    let o = wahl(&["info", r#"{"vertices":[{"id":0,"weight":-2}],"edges":[[0,1]"#]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("line 1"), "{err}");

    let o = wahl(&["info", r#"{"vertices":[{"id":0,"weight":-2.0}],"edges":[]}"#]);
    assert_eq!(o.status.code(), Some(2));

    let o = wahl(&["info", "/nonexistent/graph.json"]);
    assert_eq!(o.status.code(), Some(2));

    let o = wahl(&["no-such-command"]);
    assert_eq!(o.status.code(), Some(2));
}
