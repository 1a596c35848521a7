use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn posiflag(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_posiflag")).args(args).env_remove("POSIFLAG_SEED").output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn generate(dir: &TempDir, name: &str, args: &[&str]) -> PathBuf {
    let out = posiflag(args);
    assert_eq!(code(&out), 0, "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    write(dir, name, &stdout(&out))
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const IDENTITY_3: &str = r#"{"dim": 3, "entries": [["1","0","0"],["0","1","0"],["0","0","1"]]}"#;
const DIAG: &str = r#"{"dim": 2, "entries": [["2","0"],["0","1/2"]]}"#;

#[test]
fn pascal_six_is_positive_under_both_methods() {
    let dir = TempDir::new().unwrap();
    let p = generate(&dir, "p6.json", &["pascal", "--d", "6"]);
    let out = posiflag(&["--format", "machine", "tp-check", "--input", s(&p), "--method", "both"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("method=staged status=Positive evaluations=56"));
    assert!(text.contains("method=oracle status=Positive"));
}

#[test]
fn identity_witness() {
    let dir = TempDir::new().unwrap();
    let id = write(&dir, "id.json", IDENTITY_3);
    for method in ["oracle", "staged"] {
        let out = posiflag(&["tp-check", "--input", s(&id), "--method", method, "--emit", "witness"]);
        assert_eq!(code(&out), 1);
        assert_eq!(stdout(&out), "1;(1);(2);0\n");
    }
}

#[test]
fn negative_entry_is_outside() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "m.json", r#"{"dim": 2, "entries": [["1","-1"],["0","1"]]}"#);
    let out = posiflag(&["--format", "machine", "tp-check", "--input", s(&m)]);
    assert_eq!(code(&out), 1);
    for line in stdout(&out).lines() {
        assert!(line.contains("status=Outside") && line.ends_with("witness=1;(1);(2);-1"), "{line}");
    }
}

#[test]
fn non_unipotent_input_is_a_precondition_failure() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "m.json", r#"{"dim": 2, "entries": [["2","1"],["0","1"]]}"#);
    assert_eq!(code(&posiflag(&["tp-check", "--input", s(&m)])), 3);
}

#[test]
fn corrupted_inputs_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let cases = [
        "not json",
        r#"{"dim": 2, "entries": [["1","1"]]}"#,
        r#"{"dim": 1, "entries": [["1/0"]]}"#,
        r#"{"dim": 1, "entries": [["one"]]}"#,
        r#"{"dim": 1, "entries": [["1"]], "extra": true}"#,
    ];
    for (i, text) in cases.iter().enumerate() {
        let m = write(&dir, &format!("bad{i}.json"), text);
        assert_eq!(code(&posiflag(&["tp-check", "--input", s(&m)])), 2, "{text}");
        assert_eq!(code(&posiflag(&["tuple-check", "--flags", s(&m)])), 2, "{text}");
        assert_eq!(code(&posiflag(&["map-check", "--sample", s(&m)])), 2, "{text}");
    }
    let missing = dir.path().join("missing.json");
    assert_eq!(code(&posiflag(&["tp-check", "--input", s(&missing)])), 2);
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(code(&posiflag(&[])), 2);
    assert_eq!(code(&posiflag(&["tp-check"])), 2);
    assert_eq!(code(&posiflag(&["pascal", "--d", "3", "--bogus"])), 2);
    assert_eq!(code(&posiflag(&["tp-check", "--input", "x", "--method", "fast"])), 2);
    assert_eq!(code(&posiflag(&["barbot", "--d", "4", "--j", "1", "--emit", "spec"])), 2);
    assert_eq!(code(&posiflag(&["barbot", "--d", "5", "--j", "3", "--emit", "spec"])), 2);
    assert_eq!(code(&posiflag(&["barbot", "--d", "5", "--j", "1", "--emit", "matrix"])), 2);
    assert_eq!(code(&posiflag(&["bench", "--d-min", "1", "--d-max", "3"])), 2);
}

#[test]
fn barbot_triple_is_not_positive() {
    let dir = TempDir::new().unwrap();
    let pts = write(&dir, "pts.json", "[[1, 0], [1, 1], [0, 1]]");
    let flags = generate(&dir, "b.json", &["barbot", "--d", "3", "--j", "1", "--emit", "flags", "--points", s(&pts)]);
    assert_eq!(code(&posiflag(&["tuple-check", "--flags", s(&flags), "--method", "both"])), 1);
    assert_eq!(code(&posiflag(&["flags-transverse", "--input", s(&flags)])), 0);
}

#[test]
fn veronese_triple_is_positive_and_sample_is_consistent() {
    let dir = TempDir::new().unwrap();
    let pts = write(&dir, "pts.json", "[[1, 0], [1, 1], [0, 1], [-1, 1]]");
    let flags = generate(&dir, "v.json", &["veronese", "--d", "4", "--points", s(&pts)]);
    assert_eq!(code(&posiflag(&["tuple-check", "--flags", s(&flags), "--method", "both"])), 0);
    let sample = generate(&dir, "s.json", &["veronese", "--d", "4", "--points", s(&pts), "--emit", "sample"]);
    let out = posiflag(&["--format", "machine", "map-check", "--sample", s(&sample)]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("outcome=consistent triples=4 positive_triples=4"));
}

#[test]
fn barbot_sample_is_vacuously_consistent() {
    let dir = TempDir::new().unwrap();
    let sample = generate(
        &dir,
        "s.json",
        &["--seed", "3", "barbot", "--d", "5", "--j", "2", "--emit", "sample", "--count", "5"],
    );
    let out = posiflag(&["--format", "machine", "map-check", "--sample", s(&sample)]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("outcome=vacuous triples=10 positive_triples=0"));
}

#[test]
fn repeated_point_is_a_precondition_failure() {
    let dir = TempDir::new().unwrap();
    let pts = write(&dir, "pts.json", "[[1, 2], [-1, -2]]");
    assert_eq!(code(&posiflag(&["veronese", "--d", "3", "--points", s(&pts), "--emit", "sample"])), 3);
    let bad = write(&dir, "bad.json", "[[0, 0]]");
    assert_eq!(code(&posiflag(&["veronese", "--d", "3", "--points", s(&bad)])), 2);
}

#[test]
fn non_transverse_pair_exits_with_three() {
    let dir = TempDir::new().unwrap();
    let frame = r#"{"frame": {"dim": 2, "entries": [["1","0"],["0","1"]]}}"#;
    let flags = write(&dir, "f.json", &format!("[{frame}, {frame}, {frame}]"));
    assert_eq!(code(&posiflag(&["tuple-check", "--flags", s(&flags)])), 3);
    let out = posiflag(&["--format", "machine", "flags-transverse", "--input", s(&flags), "--pair", "1", "2"]);
    assert_eq!(code(&out), 1);
    assert_eq!(stdout(&out), "record=transverse pair=1,2 transverse=false\n");
    assert_eq!(code(&posiflag(&["flags-transverse", "--input", s(&flags), "--pair", "1", "4"])), 2);
}

#[test]
fn threshold_example_and_cap() {
    let dir = TempDir::new().unwrap();
    let u = generate(&dir, "u.json", &["pascal", "--d", "3"]);
    let g = write(&dir, "g.json", r#"{"frame": {"dim": 3, "entries": [["0","5","1"],["0","1","0"],["1","0","0"]]}}"#);
    let out = posiflag(&["--format", "machine", "threshold", "--u", s(&u), "--flag", s(&g)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(stdout(&out), "record=threshold t=11 cap=100000\n");
    assert_eq!(code(&posiflag(&["threshold", "--u", s(&u), "--flag", s(&g), "--cap", "10"])), 4);
    let id = write(&dir, "id.json", IDENTITY_3);
    assert_eq!(code(&posiflag(&["threshold", "--u", s(&id), "--flag", s(&g)])), 3);
}

#[test]
fn generators_round_trip_through_the_checkers() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.json", r#"{"dim": 2, "entries": [["1","1"],["0","1"]]}"#);
    let out = posiflag(&["sym-power", "--d", "4", "--g", s(&g)]);
    assert_eq!(code(&out), 0);
    let pascal = posiflag(&["pascal", "--d", "4"]);
    assert_eq!(stdout(&out), stdout(&pascal));
    let m = generate(&dir, "m.json", &["barbot", "--d", "5", "--j", "1", "--emit", "matrix", "--g", s(&g)]);
    assert_eq!(code(&posiflag(&["tp-check", "--input", s(&m)])), 1);
    let basis = posiflag(&["barbot", "--d", "5", "--j", "1", "--emit", "basis"]);
    assert!(stdout(&basis).contains("\"dim\": 5"));
    let spec = posiflag(&["barbot", "--d", "7", "--j", "3", "--emit", "spec"]);
    assert_eq!(stdout(&spec), "d=7 j=3 k=1 perm=1,5,2,6,3,7,4\n");
}

#[test]
fn limit_demo_series_and_summary() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.json", DIAG);
    let out = posiflag(&["limit-demo", "--d", "5", "--j", "2", "--g", s(&g), "--iters", "10"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,distance,min_gap");
    assert_eq!(lines.len(), 11);
    for line in &lines[1..] {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 3);
        assert!(fields[1].parse::<f64>().unwrap() < 1e-6);
    }
    let skew = write(&dir, "h.json", r#"{"dim": 2, "entries": [["2","1"],["1","1"]]}"#);
    let out =
        posiflag(&["--format", "machine", "limit-demo", "--d", "3", "--j", "1", "--g", s(&skew), "--emit", "summary"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("record=limit-demo d=3 j=1 iters=50 "));
    let parabolic = write(&dir, "p.json", r#"{"dim": 2, "entries": [["1","1"],["0","1"]]}"#);
    assert_eq!(code(&posiflag(&["limit-demo", "--d", "3", "--j", "1", "--g", s(&parabolic)])), 3);
}

#[test]
fn machine_output_is_deterministic() {
    let strip =
        |o: Output| stdout(&o).lines().map(|l| l.split(" micros=").next().unwrap().to_string()).collect::<Vec<_>>();
    let run = || {
        posiflag(&["--format", "machine", "--seed", "11", "bench", "--d-min", "3", "--d-max", "5", "--samples", "3"])
    };
    let first = run();
    assert_eq!(code(&first), 0);
    assert_eq!(strip(first), strip(run()));

    let with_env = Command::new(env!("CARGO_BIN_EXE_posiflag"))
        .args(["barbot", "--d", "5", "--j", "1", "--emit", "sample"])
        .env("POSIFLAG_SEED", "11")
        .output()
        .unwrap();
    let with_flag = posiflag(&["--seed", "11", "barbot", "--d", "5", "--j", "1", "--emit", "sample"]);
    let default = posiflag(&["barbot", "--d", "5", "--j", "1", "--emit", "sample"]);
    assert_eq!(stdout(&with_env), stdout(&with_flag));
    assert_ne!(stdout(&with_env), stdout(&default));

    let dir = TempDir::new().unwrap();
    let id = write(&dir, "id.json", IDENTITY_3);
    let a = posiflag(&["--format", "machine", "tp-check", "--input", s(&id)]);
    let b = posiflag(&["--format", "machine", "tp-check", "--input", s(&id)]);
    assert_eq!(a.stdout, b.stdout);
}
