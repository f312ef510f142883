//! End-to-end tests of the command-line interface: exit codes, JSON output,
//! and the solve -> welfare round trip.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn maxswp(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_maxswp"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn write(dir: &TempDir, name: &str, contents: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, contents).unwrap();
    path.to_string_lossy().into_owned()
}

fn stdout_json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn path_edge_list(n: usize) -> String {
    let mut s = format!("{} {}\n", n, n - 1);
    for v in 1..n {
        s.push_str(&format!("{} {}\n", v - 1, v));
    }
    s
}

#[test]
fn solve_path_mode_emits_theorem_partition() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "p6.edges", &path_edge_list(6));
    let out = maxswp(&["solve", &input, "--mode", "path"], dir.path());
    let json = stdout_json(&out);
    assert_eq!(json["mode"], "path");
    assert_eq!(json["n"], 6);
    assert_eq!(json["welfare"]["num"], "10");
    assert_eq!(json["welfare"]["den"], "3");
    assert_eq!(json["blocks"], serde_json::json!([[0, 1, 2], [3, 4, 5]]));
}

#[test]
fn tree_and_exact_modes_agree() {
    let dir = TempDir::new().unwrap();
    // A 12-vertex tree that is not a path.
    let edges = "12 11\n0 1\n0 2\n1 3\n1 4\n2 5\n2 6\n5 7\n5 8\n8 9\n8 10\n4 11\n";
    let input = write(&dir, "tree.edges", edges);
    let tree = stdout_json(&maxswp(&["solve", &input, "--mode", "tree"], dir.path()));
    let exact = stdout_json(&maxswp(&["solve", &input, "--mode", "exact"], dir.path()));
    assert_eq!(tree["mode"], "tree");
    assert_eq!(exact["mode"], "exact");
    assert_eq!(tree["welfare"], exact["welfare"]);
    // Auto prefers the tree solver here.
    let auto = stdout_json(&maxswp(&["solve", &input], dir.path()));
    assert_eq!(auto["mode"], "tree");
}

#[test]
fn exact_mode_size_limit_is_exit_3() {
    let dir = TempDir::new().unwrap();
    // 25 vertices, not a tree (an extra chord makes a cycle).
    let mut edges = path_edge_list(25);
    edges = edges.replacen("25 24\n", "25 25\n", 1);
    edges.push_str("0 24\n");
    let input = write(&dir, "cycle25.edges", &edges);
    let out = maxswp(&["solve", &input, "--mode", "exact"], dir.path());
    assert_eq!(out.status.code(), Some(3));
    let auto = maxswp(&["solve", &input], dir.path());
    assert_eq!(auto.status.code(), Some(3));
}

#[test]
fn malformed_or_missing_input_is_exit_2() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.edges", "2 1\n0 7\n");
    assert_eq!(maxswp(&["solve", &bad], dir.path()).status.code(), Some(2));
    assert_eq!(
        maxswp(&["solve", "does-not-exist.edges"], dir.path())
            .status
            .code(),
        Some(2)
    );
    let not_path = write(&dir, "star.edges", "4 3\n0 1\n0 2\n0 3\n");
    assert_eq!(
        maxswp(&["solve", &not_path, "--mode", "path"], dir.path())
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn welfare_round_trips_solve_output() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "p7.edges", &path_edge_list(7));
    let solved = dir.path().join("solved.json");
    let out = maxswp(
        &[
            "solve",
            &input,
            "--output",
            solved.to_str().unwrap(),
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let solved_json: Value =
        serde_json::from_str(&std::fs::read_to_string(&solved).unwrap()).unwrap();
    let report = stdout_json(&maxswp(
        &["welfare", &input, "--partition", solved.to_str().unwrap()],
        dir.path(),
    ));
    assert_eq!(report["total"], solved_json["welfare"]);
}

#[test]
fn welfare_reports_blocks_and_utilities() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "p4.edges", &path_edge_list(4));
    let grand = write(&dir, "grand.json", r#"{"blocks": [[0, 1, 2, 3]]}"#);
    let report = stdout_json(&maxswp(
        &["welfare", &input, "--partition", &grand],
        dir.path(),
    ));
    assert_eq!(report["total"]["num"], "13");
    assert_eq!(report["total"]["den"], "6");
    assert_eq!(report["utilities"].as_array().unwrap().len(), 4);

    let split = write(&dir, "split.json", r#"{"blocks": [[0, 1], [2, 3]]}"#);
    let report = stdout_json(&maxswp(
        &["welfare", &input, "--partition", &split],
        dir.path(),
    ));
    assert_eq!(report["total"]["num"], "2");
    assert_eq!(report["total"]["den"], "1");

    let overlap = write(&dir, "overlap.json", r#"{"blocks": [[0, 1], [1, 2, 3]]}"#);
    assert_eq!(
        maxswp(&["welfare", &input, "--partition", &overlap], dir.path())
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn reduce_verifies_threshold_on_small_instance() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "n3.xsat", "p xsat 3 3\n1 2 3\n1 2 3\n1 2 3\n");
    let prefix = dir.path().join("g3");
    let report = stdout_json(&maxswp(
        &["reduce", &input, "--verify", "--output", prefix.to_str().unwrap()],
        dir.path(),
    ));
    assert_eq!(report["vertices"], 15);
    assert_eq!(report["edges"], 30);
    let v = &report["verification"];
    assert_eq!(v["mode"], "exact");
    assert_eq!(v["threshold"]["num"], "41");
    assert_eq!(v["threshold"]["den"], "4");
    assert_eq!(v["optimum_equals_threshold"], true);

    // The emitted gadget parses back as a 4-regular graph.
    let edges = std::fs::read_to_string(prefix.with_extension("edges")).unwrap();
    let g = maxswp::Graph::parse_edge_list(&edges).unwrap();
    assert_eq!(g.n(), 15);
    assert!((0..15u32).all(|v| g.degree(v) == 4));
    let labels = std::fs::read_to_string(dir.path().join("g3.labels.json")).unwrap();
    let labels: maxswp::reduce::GadgetLabels = serde_json::from_str(&labels).unwrap();
    assert_eq!(labels.literal_vertices.len(), 3);
    assert_eq!(labels.clause_vertices.len(), 3);
}

#[test]
fn reduce_large_instance_is_forward_only() {
    let dir = TempDir::new().unwrap();
    let input = write(
        &dir,
        "n5.xsat",
        "p xsat 5 5\n1 2 3\n1 2 4\n1 3 5\n2 4 5\n3 4 5\n",
    );
    let prefix = dir.path().join("g5");
    let report = stdout_json(&maxswp(
        &["reduce", &input, "--verify", "--output", prefix.to_str().unwrap()],
        dir.path(),
    ));
    assert_eq!(report["vertices"], 25);
    assert_eq!(report["verification"]["mode"], "forward-only");
    assert_eq!(report["verification"]["assignment_certified"], Value::Null);
}

#[test]
fn reduce_rejects_malformed_instances() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "bad.xsat", "p xsat 3 3\n1 2 3\n1 2 3\n1 2 2\n");
    assert_eq!(
        maxswp(&["reduce", &input], dir.path()).status.code(),
        Some(2)
    );
}

#[test]
fn bench_emits_csv_rows() {
    let dir = TempDir::new().unwrap();
    let out = maxswp(
        &["bench", "--sizes", "50,120", "--seed", "7"],
        dir.path(),
    );
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    let lines: Vec<&str> = text.trim().lines().collect();
    assert_eq!(lines[0], "n,runtime_ms");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("50,"));
    assert!(lines[2].starts_with("120,"));

    let empty = maxswp(&["bench", "--sizes", ""], dir.path());
    assert!(empty.status.success());
    assert_eq!(
        String::from_utf8_lossy(&empty.stdout).trim(),
        "n,runtime_ms"
    );

    let bad = maxswp(&["bench", "--sizes", "10,zap"], dir.path());
    assert_eq!(bad.status.code(), Some(2));
}
