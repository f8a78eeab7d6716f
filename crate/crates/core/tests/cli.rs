use std::path::PathBuf;
use std::process::{Command, Output};

fn relop(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_relop")).args(args).output().expect("binary runs")
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn verify_passes_with_exit_zero() {
    let o = relop(&["verify", "partitions"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("partitions: all checks passed"));
}

#[test]
fn verify_is_deterministic() {
    let a = relop(&["--seed", "11", "--format", "json", "verify", "trees"]);
    let b = relop(&["--seed", "11", "--format", "json", "verify", "trees"]);
    assert_eq!(a.stdout, b.stdout);
    let report: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(report["suite"], "trees");
}

#[test]
fn injected_faults_exit_one() {
    for (fault, suite) in [("partition-merge", "partitions"), ("com-pair-unit", "pairs"), ("free-swap", "operads")] {
        let o = relop(&["--inject-fault", fault, "verify", suite]);
        assert_eq!(o.status.code(), Some(1), "{fault}");
        assert!(stdout(&o).contains("FAIL"));
    }
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(relop(&["verify", "everything"]).status.code(), Some(2));
    assert_eq!(relop(&["--bound", "0", "verify", "sets"]).status.code(), Some(2));
    assert_eq!(relop(&["--tolerance", "-1", "verify", "sets"]).status.code(), Some(2));
    assert_eq!(relop(&["--inject-fault", "nope", "verify", "sets"]).status.code(), Some(2));
    assert_eq!(relop(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(relop(&["merge", "1/2,1/3"]).status.code(), Some(2));
    assert_eq!(relop(&["render", "/nonexistent.json"]).status.code(), Some(2));
}

#[test]
fn merge_reads_literals_and_files() {
    let o = relop(&["merge", "1/3", "1/6,2/3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "merged <1/6,1/3,2/3>\ndelta1 [0,0,1,1]\ndelta2 [0,1,1,2]\n");

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("family.json");
    std::fs::write(&path, r#"[["1/3"], ["1/6", "2/3"]]"#).unwrap();
    let o = relop(&["--format", "json", "merge", path.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["merged"], serde_json::json!(["1/6", "1/3", "2/3"]));
}

#[test]
fn render_fixture_has_three_dashed_levels() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig1.dot");
    let o = relop(&["--out", out.to_str().unwrap(), "render", fixture("fig1_tree.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let dot = std::fs::read_to_string(out).unwrap();
    assert!(dot.starts_with("digraph"));
    assert_eq!(dot.matches("subgraph cluster_level_").count(), 3);
    assert_eq!(dot.matches("style=dashed;").count(), 3);
    // nine leaves, six of them d-colored
    assert_eq!(dot.matches("shape=plaintext").count(), 9);
}

#[test]
fn render_height_zero_is_leaves_only() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.json");
    std::fs::write(
        &path,
        r#"{"root_color":"c","levels":[[{"label":"x","color":"c"},{"label":"y","color":"d"}]],"targets":[]}"#,
    )
    .unwrap();
    let o = relop(&["render", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let dot = stdout(&o);
    assert!(!dot.contains("cluster"));
    assert_eq!(dot.matches("->").count(), 2);
}

#[test]
fn render_rejects_mismatched_partition() {
    let dir = tempfile::tempdir().unwrap();
    let tree = std::fs::read_to_string(fixture("fig1_tree.json")).unwrap();
    let path = dir.path().join("p.json");
    std::fs::write(&path, format!(r#"{{"tree": {tree}, "partition": ["1/2"]}}"#)).unwrap();
    assert_eq!(relop(&["render", path.to_str().unwrap()]).status.code(), Some(2));
    std::fs::write(&path, format!(r#"{{"tree": {tree}, "partition": ["1/4", "1/2", "3/4"]}}"#)).unwrap();
    let o = relop(&["render", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("t2 = 3/4"));
}

#[test]
fn demos_pass_and_write_dot() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["fig2", "fig3", "fig4"] {
        let out = dir.path().join(format!("{name}.dot"));
        let o = relop(&["--out", out.to_str().unwrap(), "demo", name]);
        assert_eq!(o.status.code(), Some(0), "{name}");
        assert!(stdout(&o).contains("all checks passed"));
        assert!(std::fs::read_to_string(out).unwrap().contains("digraph"));
    }
    assert_eq!(relop(&["demo", "fig7"]).status.code(), Some(2));
}
