use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::{json, Value};

const INTRO: &str = r#"{"num_vertices":6,"edges":[[0,1],[1,2],[0,2],[0,3],[0,4],[1,5],[2,3],[3,5],[4,5]],"divisor":[-1,0,2,0,2,3]}"#;

fn chipfire(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_chipfire"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    if let Some(text) = stdin {
        child.stdin.take().unwrap().write_all(text.as_bytes()).unwrap();
    }
    drop(child.stdin.take());
    child.wait_with_output().unwrap()
}

fn write_temp(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn solve_intro_from_file_and_stdin() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_temp(&dir, "intro.json", INTRO);
    let out = chipfire(&["solve", &path], None);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["move_count"], 4);
    assert_eq!(v["status"], "won");
    assert_eq!(v["final"], json!([0, 1, 2, 1, 1, 1]));

    let piped = chipfire(&["solve", "-"], Some(INTRO));
    assert_eq!(piped.stdout, out.stdout);
}

#[test]
fn solve_trace_lists_states() {
    let out = chipfire(&["solve", "-", "--trace"], Some(INTRO));
    let v = stdout_json(&out);
    let states = v["states"].as_array().unwrap();
    assert_eq!(states.len(), 5);
    assert_eq!(states[0], json!([-1, 0, 2, 0, 2, 3]));
}

#[test]
fn solve_stable_and_unwinnable() {
    let stable = r#"{"num_vertices":3,"edges":[[0,1],[1,2]],"divisor":[0,1,0]}"#;
    let out = chipfire(&["solve", "-", "--side", "chip"], Some(stable));
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["move_count"], 0);

    let stuck = r#"{"num_vertices":2,"edges":[[0,1]],"divisor":[-1,-1]}"#;
    let out = chipfire(&["solve", "-"], Some(stuck));
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout_json(&out)["status"], "unwinnable");
}

#[test]
fn solve_step_limit_exit_code() {
    let out = chipfire(&["solve", "-", "--max-steps", "2"], Some(INTRO));
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(stdout_json(&out)["status"], "step_limit");
}

#[test]
fn malformed_input_names_json_path() {
    let bad = r#"{"num_vertices":6,"edges":[[0,1]],"divisor":[0,"x",0,0,0,0]}"#;
    let out = chipfire(&["solve", "-"], Some(bad));
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("divisor[1]"), "{err}");

    let out = chipfire(&["optimal", "/nonexistent/file.json"], None);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn optimal_intro_report() {
    let out = chipfire(&["optimal", "-"], Some(INTRO));
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["m0"], 4);
    assert_eq!(v["m_min"], 1);
    assert_eq!(v["bound_rational"], json!({"num": 4, "den": 5}));
    assert_eq!(v["bound_ceiling"], 1);
    assert_eq!(v["holds"], true);
    assert_eq!(v["witness_moves"], json!([{"vertex": 4, "kind": "lend"}]));
}

#[test]
fn optimal_star_is_tight_with_both_methods() {
    let star = chipfire(&["gen", "star", "--n", "5", "--k", "2"], None);
    let text = String::from_utf8(star.stdout).unwrap();
    for method in ["bfs", "coset"] {
        let out = chipfire(&["optimal", "-", "--method", method], Some(&text));
        assert_eq!(out.status.code(), Some(0), "{method}");
        let v = stdout_json(&out);
        assert_eq!(v["m0"], 8);
        assert_eq!(v["m_min"], 2);
        assert_eq!(v["tight"], true);
        assert_eq!(v["method"], method);
    }
}

#[test]
fn optimal_stable_input_is_all_zero() {
    let stable = r#"{"num_vertices":3,"edges":[[0,1],[1,2]],"divisor":[0,1,0],"side":"chip"}"#;
    let out = chipfire(&["optimal", "-"], Some(stable));
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["m0"], 0);
    assert_eq!(v["m_min"], 0);
    assert_eq!(v["bound_rational"], json!({"num": 0, "den": 1}));
    assert_eq!(v["tight"], true);
}

#[test]
fn optimal_cap_and_unwinnable_exit_codes() {
    let hybrid = String::from_utf8(chipfire(&["gen", "hybrid", "--n", "8", "--k", "2"], None).stdout).unwrap();
    let out = chipfire(&["optimal", "-", "--method", "bfs", "--cap", "1"], Some(&hybrid));
    assert_eq!(out.status.code(), Some(3));

    let stuck = r#"{"num_vertices":2,"edges":[[0,1]],"divisor":[-1,-1]}"#;
    assert_eq!(chipfire(&["optimal", "-"], Some(stuck)).status.code(), Some(2));
}

#[test]
fn optimal_explain_shows_shift() {
    let out = chipfire(&["optimal", "-", "--explain"], Some(INTRO));
    let v = stdout_json(&out);
    assert_eq!(v["report"]["m_min"], 1);
    assert_eq!(v["explain"]["minimal_norm"], 2);
    assert_eq!(v["explain"]["minimal"], json!([0, 0, 0, 0, 1, 1]));
}

#[test]
fn gen_families() {
    let v = stdout_json(&chipfire(&["gen", "intro"], None));
    assert_eq!(v["divisor"], json!([-1, 0, 2, 0, 2, 3]));

    let v = stdout_json(&chipfire(&["gen", "hybrid", "--n", "4", "--k", "1"], None));
    assert_eq!(v["num_vertices"], 5);
    assert_eq!(v["divisor"], json!([-4, 0, 0, 1, 1]));
    assert_eq!(v["side"], "chip");

    let a = chipfire(&["gen", "random", "--n", "6", "--p", "1/3", "--min", "-2", "--max", "2", "--seed", "9"], None);
    let b = chipfire(&["gen", "random", "--n", "6", "--p", "1/3", "--min", "-2", "--max", "2", "--seed", "9"], None);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = stdout_json(&a);
    assert!(v["divisor"].as_array().unwrap().iter().all(|x| (-2..=2).contains(&x.as_i64().unwrap())));

    let bad = chipfire(&["gen", "hybrid", "--n", "5"], None);
    assert_eq!(bad.status.code(), Some(1));
    let unknown = chipfire(&["gen", "wheel"], None);
    assert_eq!(unknown.status.code(), Some(1));
}

#[test]
fn gen_dot_and_out_file() {
    let out = chipfire(&["gen", "star", "--n", "3", "--k", "1", "--format", "dot"], None);
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "graph G {\n  0 [label=\"0\\n-3\", color=red];\n  1 [label=\"1\\n1\"];\n  2 [label=\"2\\n1\"];\n  0 -- 1;\n  0 -- 2;\n}\n"
    );

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("star.json");
    let out = chipfire(&["gen", "star", "--out", path.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    let solved = chipfire(&["solve", path.to_str().unwrap()], None);
    assert_eq!(solved.status.code(), Some(0));
    assert_eq!(stdout_json(&solved)["move_count"], 8);
    assert!(written.ends_with('\n'));
}

#[test]
fn outputs_are_byte_stable() {
    let golden = concat!(
        r#"{"moves":[{"vertex":0,"kind":"borrow"},{"vertex":1,"kind":"borrow"},{"vertex":3,"kind":"borrow"},{"vertex":2,"kind":"borrow"}],"#,
        r#""aggregate":[-1,-1,-1,-1,0,0],"move_count":4,"final":[0,1,2,1,1,1],"status":"won"}"#,
        "\n"
    );
    for _ in 0..3 {
        let out = chipfire(&["solve", "-"], Some(INTRO));
        assert_eq!(String::from_utf8(out.stdout).unwrap(), golden);
    }
    let first = chipfire(&["optimal", "-", "--method", "coset"], Some(INTRO)).stdout;
    let second = chipfire(&["optimal", "-", "--method", "coset"], Some(INTRO)).stdout;
    assert_eq!(first, second);
}
