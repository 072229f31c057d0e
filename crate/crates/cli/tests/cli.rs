use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn dicho(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dicho")).args(args).output().unwrap()
}

fn example1() -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures/example1.txt")
        .to_string_lossy()
        .into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const EXAMPLE1_POINTS: &str = "11 11 14\n13 16 11\n15 9 17\n19 14 10\n";

#[test]
fn solve_example1_with_each_algorithm() {
    let dir = tempfile::tempdir().unwrap();
    for alg in ["dummy", "bd"] {
        for arith in ["exact", "float"] {
            let out = dir.path().join(format!("{alg}_{arith}.txt"));
            let o = dicho(&["solve", &example1(), "--algorithm", alg, "--arithmetic", arith, "--out", out.to_str().unwrap()]);
            assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
            assert_eq!(fs::read_to_string(&out).unwrap(), EXAMPLE1_POINTS);
            let report = stdout(&o);
            assert!(report.starts_with("ysn1=4\nsolver_calls="), "{report}");
            for key in ["float_calls=", "init_calls=", "time_s="] {
                assert!(report.contains(key));
            }
            if arith == "exact" {
                assert!(report.contains("float_calls=0\n"));
            }
        }
    }
}

#[test]
fn balloon_reports_every_hull_vertex() {
    let o = dicho(&["solve", &example1(), "--algorithm", "balloon"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    for line in EXAMPLE1_POINTS.lines() {
        assert!(text.lines().any(|l| l == line), "{text}");
    }
}

#[test]
fn solve_prints_points_then_report_without_out() {
    let o = dicho(&["solve", &example1()]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with(EXAMPLE1_POINTS));
    assert!(text.contains("ysn1=4"));
}

#[test]
fn check_passes_on_example1() {
    let o = dicho(&["check", &example1()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "oracle=4 dummy=4 bd=4\nPASS\n");
}

#[test]
fn bad_input_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "MOAP 2 2\n1 2\n3\n").unwrap();
    assert_eq!(dicho(&["solve", bad.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(dicho(&["check", "/nonexistent/instance.txt"]).status.code(), Some(2));
    assert_eq!(dicho(&["generate", "ap", "9", "4"]).status.code(), Some(2));
    assert_eq!(dicho(&["solve", &example1(), "--tolerance", "-1"]).status.code(), Some(2));
}

#[test]
fn check_refuses_oversized_instances() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("big.txt");
    let o = dicho(&["generate", "ap", "3", "12", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(dicho(&["check", path.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn generate_is_deterministic_and_solvable() {
    let a = stdout(&dicho(&["generate", "kp", "3", "10", "--seed", "7"]));
    let b = stdout(&dicho(&["generate", "kp", "3", "10", "--seed", "7"]));
    let c = stdout(&dicho(&["generate", "kp", "3", "10", "--seed", "8"]));
    assert_eq!(a, b);
    assert_ne!(a, c);
    assert!(a.starts_with("MOKP 3 10\n"));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("kp.txt");
    fs::write(&path, &a).unwrap();
    let o = dicho(&["check", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn bench_writes_table_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("rows.json");
    let o = dicho(&["bench", "ap", "3", "--sizes", "4", "--instances", "2", "--out", json.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let table = stdout(&o);
    assert_eq!(table.lines().count(), 5);
    assert!(table.contains("4x4"));
    let rows: serde_json::Value = serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 4);
    let o = dicho(&["bench", "kp", "3", "--sizes", "6", "--instances", "1", "--variants", "v2_ex"]);
    assert!(stdout(&o).contains("v2_ex"));
}
