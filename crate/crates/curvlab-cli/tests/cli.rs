//! Black-box tests of the binary: flag handling, formats, exit codes.

use std::process::{Command, Output};

fn curvlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_curvlab"))
        .args(args)
        .output()
        .expect("spawning curvlab")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn curvature_table_for_triangle() {
    let out = curvlab(&["curvature", "--g6", "Bw"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.matches("3/2").count(), 3);
    assert!(text.contains("positively curved: true"));
}

#[test]
fn curvature_json_has_exact_fractions() {
    let out = curvlab(&["curvature", "--g6", "Bw", "--format", "json", "--edges-only"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["pairs"].as_array().unwrap().len(), 3);
    assert_eq!(v["pairs"][0]["kappa"], "3/2");
    assert_eq!(v["positively_curved"], true);
}

#[test]
fn decimal_flag_appends_rounded_column() {
    let out = curvlab(&["curvature", "--g6", "Bw", "--decimal", "2", "--edges-only"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("3/2 (1.50)"));
}

#[test]
fn single_edge_curvature_is_two() {
    let out = curvlab(&["curvature", "--g6", "A_"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains(" 2 "));
}

#[test]
fn missing_input_is_a_usage_error() {
    let out = curvlab(&["curvature"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn conflicting_inputs_are_a_usage_error() {
    let out = curvlab(&["curvature", "--g6", "Bw", "--file", "/dev/null"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_graph6_is_an_input_error() {
    let out = curvlab(&["curvature", "--g6", "B"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn disconnected_graph_is_an_input_error() {
    // Two isolated vertices.
    let out = curvlab(&["curvature", "--g6", "A?"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn adjacency_list_file_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("triangle.txt");
    std::fs::write(&path, "# a triangle\n0 1\n0 2\n1 2\n").unwrap();
    let out = curvlab(&["curvature", "--file", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("3/2"));
}

#[test]
fn classify_small_corpus_table() {
    let out = curvlab(&["classify", "--n-max", "5", "--format", "table"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("total: 7"));
    // Two-connected restriction drops the bowtie.
    let out = curvlab(&[
        "classify", "--n-max", "5", "--two-connected-only", "--format", "table",
    ]);
    assert!(stdout(&out).contains("total: 6"));
}

#[test]
fn classify_json_schema() {
    let out = curvlab(&["classify", "--n-max", "4", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["n_max"], 4);
    assert_eq!(v["total"], 3);
    assert!(v["graphs"][0]["edges"][0]["kappa"].is_string());
}

#[test]
fn classify_dot_writes_one_file_per_graph() {
    let dir = tempfile::tempdir().unwrap();
    let out = curvlab(&[
        "classify",
        "--n-max",
        "4",
        "--format",
        "dot",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let mut names: Vec<String> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(names, vec!["n03_001.dot", "n04_001.dot", "n04_002.dot"]);
    let body = std::fs::read_to_string(dir.path().join("n03_001.dot")).unwrap();
    assert!(body.starts_with("// graph6: "));
    assert!(body.contains("layout=circo"));
}

#[test]
fn classify_rejects_out_of_range_order() {
    let out = curvlab(&["classify", "--n-max", "12"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn verify_single_check_passes() {
    let out = curvlab(&["verify", "--lemma", "3.6", "--n-max", "5"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("3.6  pass"));
    assert!(!text.contains("3.1"));
}

#[test]
fn verify_unknown_check_is_a_usage_error() {
    let out = curvlab(&["verify", "--lemma", "9.9"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_json_format_and_seed_env() {
    let out = Command::new(env!("CARGO_BIN_EXE_curvlab"))
        .args(["verify", "--lemma", "3.1", "--n-max", "5", "--samples", "3", "--format", "json"])
        .env("CURVLAB_SEED", "42")
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&String::from_utf8_lossy(&out.stdout)).unwrap();
    assert_eq!(v[0]["lemma"], "3.1");
    assert_eq!(v[0]["pass"], true);
}

#[test]
fn bad_seed_env_is_an_input_error() {
    let out = Command::new(env!("CARGO_BIN_EXE_curvlab"))
        .args(["verify", "--lemma", "3.1", "--n-max", "4"])
        .env("CURVLAB_SEED", "not-a-number")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn export_writes_labeled_dot() {
    let dir = tempfile::tempdir().unwrap();
    let g8_code = curvlab_core::encode_graph6(&curvlab_core::find_g8()).unwrap();
    let out = curvlab(&["export", "--g6", &g8_code, "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    let body = std::fs::read_to_string(dir.path().join("n08_001.dot")).unwrap();
    assert_eq!(body.matches(" -- ").count(), 12);
    assert!(body.contains(&format!("graph6: {g8_code}")));
}

#[test]
fn jobs_flag_is_validated() {
    let out = curvlab(&["classify", "--n-max", "4", "--jobs", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let out = curvlab(&["classify", "--n-max", "4", "--jobs", "2"]);
    assert!(out.status.success());
}
