use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn two_sources() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/two_sources.json")
}

fn evac(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_evac")).args(args).env_remove("EVAC_JOBS").output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn horizon_on_two_sources() {
    let out = evac(&["horizon", two_sources().to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "T* = 9/2, A* = {v1,v2}\n|A-hat| = 3 (tuples examined: 6)\n");
}

#[test]
fn horizon_lists_the_family() {
    let out = evac(&["horizon", two_sources().to_str().unwrap(), "--family"]);
    let text = stdout(&out);
    assert!(text.contains("{v2} theta = 4 via (v2)"));
    assert!(text.contains("{v1} theta = 7/2 via (v1,v1)"));
    assert!(text.contains("{v1,v2} theta = 9/2 via (v2,v1)"));
}

#[test]
fn solve_cross_check_and_verify_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let flow = dir.path().join("flow.json");
    let out = evac(&["solve", two_sources().to_str().unwrap(), "--cross-check", "--output", flow.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("order (v1,v2,t) lambda 1/5 vertex v1=4 v2=1 t=-5"));
    assert!(text.contains("order (v2,v1,t) lambda 4/5 vertex v1=3/2 v2=7/2 t=-5"));
    assert!(text.contains("verify: pass"));
    assert!(text.contains("cross-check: oracle T* = 9/2 (agree)"));

    let out = evac(&["verify", two_sources().to_str().unwrap(), flow.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "pass\n");

    // a horizon too short for the same flow
    let out = evac(&["oracle", "verify", two_sources().to_str().unwrap(), flow.to_str().unwrap(), "--time", "4"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).starts_with("fail: "));
}

#[test]
fn solve_with_a_finer_step() {
    let dir = tempfile::tempdir().unwrap();
    let flow = dir.path().join("flow.json");
    let out = evac(&["solve", two_sources().to_str().unwrap(), "--step", "1/4", "--output", flow.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("flow: step 1/4, horizon 9/2"));
    let out = evac(&["verify", two_sources().to_str().unwrap(), flow.to_str().unwrap()]);
    assert_eq!(stdout(&out), "pass\n");

    let out = evac(&["solve", two_sources().to_str().unwrap(), "--step", "2/3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn oracle_commands() {
    let path = two_sources();
    let f = path.to_str().unwrap();
    assert_eq!(stdout(&evac(&["oracle", "tstar", f])), "9/2\n");
    assert_eq!(stdout(&evac(&["oracle", "feasible", f, "--time", "9/2"])), "true\n");
    assert_eq!(stdout(&evac(&["oracle", "feasible", f, "--time", "4"])), "false\n");
    assert_eq!(stdout(&evac(&["oracle", "otA", f, "--set", "v1", "--time", "3"])), "1\n");
    assert_eq!(stdout(&evac(&["oracle", "otA", f, "--set", "v1,v2", "--time", "9/2"])), "5\n");
}

#[test]
fn theta_of_a_subset() {
    let out = evac(&["theta", two_sources().to_str().unwrap(), "--set", "v1,v2", "--time", "3"]);
    assert_eq!(stdout(&out), "A = {v1,v2}, p = 2\n  P1 cost 1: v2 -> t\n  P2 cost 3: v1 -> t\ntheta = 9/2\no^3 = 2\n");
    let out = evac(&["theta", two_sources().to_str().unwrap(), "--set", "t"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn grid_generation_and_filtered_solve() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("grid.json");
    let out = evac(&["gen-grid", "--side", "3", "--sink", "0,0", "--output", path.to_str().unwrap()]);
    assert!(out.status.success());
    let out = evac(&["solve", path.to_str().unwrap(), "--grid", "--cross-check"]);
    assert!(out.status.success(), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("(agree)") && !text.contains("DISAGREE"));
    assert!(text.contains("unfiltered T*"));

    let out = evac(&["gen-grid", "--side", "3", "--sink", "3,0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bench_table() {
    let out = evac(&["bench", "--sides", "2,3", "--sink", "corner", "--no-time"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "N\tn\tk\td\t|I|\t|A-hat|\tT*");
    assert!(lines[1].starts_with("2\t4\t3\t2\t"));
    assert!(lines[2].starts_with("3\t9\t8\t2\t"));
}

#[test]
fn invalid_instances_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{"nodes": 3, "edges": [[0, 2, 1], [1, 2, 1]], "capacity": 1,
            "sources": [0, 1], "sink": 2, "supply": {"0": 2, "1": 3, "2": -4}}"#,
    )
    .unwrap();
    let out = evac(&["horizon", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("do not sum to zero"));

    let unreachable = dir.path().join("unreachable.json");
    std::fs::write(
        &unreachable,
        r#"{"nodes": 3, "edges": [[0, 2, 1], [2, 1, 1]], "capacity": 1,
            "sources": [0, 1], "sink": 2, "supply": {"0": 2, "1": 3, "2": -5}}"#,
    )
    .unwrap();
    let out = evac(&["solve", unreachable.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    let out = evac(&["horizon", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn jobs_do_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("grid.json");
    evac(&["gen-grid", "--side", "4", "--sink", "1,2", "--output", path.to_str().unwrap()]);
    let one = evac(&["horizon", path.to_str().unwrap(), "--family", "--jobs", "1"]);
    let four = Command::new(env!("CARGO_BIN_EXE_evac"))
        .args(["horizon", path.to_str().unwrap(), "--family"])
        .env("EVAC_JOBS", "4")
        .output()
        .unwrap();
    assert_eq!(one.stdout, four.stdout);
}
