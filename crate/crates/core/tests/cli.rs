//! The `ssp` binary end to end.

use ssp_rl::harness::aggregate;
use ssp_rl::record::CsvTable;
use std::path::Path;
use std::process::{Command, Output};

fn ssp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ssp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn read(p: &Path) -> String {
    std::fs::read_to_string(p).unwrap()
}

#[test]
fn solve_prints_optimal_values() {
    let o = ssp(&["solve", "--env", "sarsa-chatter"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("state,value,action"));
    assert!(text.contains("\n0,-2,0\n"), "{text}");
    assert!(text.contains("\n2,-1,0\n"), "{text}");
    assert!(text.contains("# expected_start_value=-2"));
}

#[test]
fn export_then_validate_and_solve() {
    let dir = tempfile::tempdir().unwrap();
    let random = dir.path().join("random.mdp");
    let o = ssp(&[
        "export",
        "--env",
        "random",
        "--env.states",
        "6",
        "--output",
        random.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = ssp(&["validate", random.to_str().unwrap()]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(
        text.starts_with("ok: 6 states (5 non-terminal), 4 actions"),
        "{text}"
    );
    assert!(text.contains("contraction modulus"));

    let from_file = stdout(&ssp(&["solve", "--mdp", random.to_str().unwrap()]));
    let builtin = stdout(&ssp(&["solve", "--env", "random", "--env.states", "6"]));
    assert_eq!(from_file, builtin);

    let grid = dir.path().join("grid.mdp");
    let o = ssp(&[
        "export",
        "--env",
        "frozen-lake",
        "--output",
        grid.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let text = stdout(&ssp(&["validate", grid.to_str().unwrap()]));
    assert!(
        text.contains("warning: some policy can stay forever"),
        "{text}"
    );

    let chatter = stdout(&ssp(&["export", "--env", "sarsa-chatter"]));
    assert!(chatter.contains("state_features 2"));
    assert!(chatter.contains("action_features 3"));
}

#[test]
fn validate_reports_bad_files() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.mdp");
    std::fs::write(&bad, "mdp 2 1 1\nt 0 0 1 0.5 1\nh0 1 0\n").unwrap();
    let o = ssp(&["validate", bad.to_str().unwrap()]);
    assert!(!o.status.success());
    assert!(!o.stderr.is_empty());
}

#[test]
fn run_writes_seeds_and_aggregate_and_replays_byte_for_byte() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("runs");
    let args = [
        "run",
        "--env",
        "frozen-lake",
        "--algorithm",
        "ca-online",
        "--budget",
        "400",
        "--interval",
        "100",
        "--seeds",
        "1,2",
        "--output",
        out.to_str().unwrap(),
    ];
    let o = ssp(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let listed = stdout(&o);
    for name in ["seed_1.csv", "seed_2.csv", "aggregate.csv"] {
        assert!(out.join(name).exists(), "{name} missing");
        assert!(listed.contains(name));
    }
    let first = [read(&out.join("seed_1.csv")), read(&out.join("seed_2.csv"))];

    let seed1 = CsvTable::parse(&first[0]).unwrap();
    assert_eq!(seed1.header_value("algorithm"), Some("ca-online"));
    assert_eq!(seed1.header_value("seed"), Some("1"));
    assert_eq!(seed1.rows.len(), 5);

    let tables: Vec<CsvTable> = first.iter().map(|t| CsvTable::parse(t).unwrap()).collect();
    assert_eq!(
        read(&out.join("aggregate.csv")),
        aggregate(&tables).unwrap()
    );
    let merged = dir.path().join("merged.csv");
    let o = ssp(&[
        "aggregate",
        out.join("seed_1.csv").to_str().unwrap(),
        out.join("seed_2.csv").to_str().unwrap(),
        "-o",
        merged.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert_eq!(read(&merged), read(&out.join("aggregate.csv")));

    // The header of a result file is itself a config.
    let copy = dir.path().join("config.csv");
    std::fs::copy(out.join("seed_1.csv"), &copy).unwrap();
    let o = ssp(&["run", copy.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(read(&out.join("seed_1.csv")), first[0]);
    assert_eq!(read(&out.join("seed_2.csv")), first[1]);
}

#[test]
fn incompatible_config_fails_before_running() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("never");
    let o = ssp(&[
        "run",
        "--env",
        "random",
        "--algorithm",
        "q-lfa",
        "--output",
        out.to_str().unwrap(),
    ]);
    assert!(!o.status.success());
    assert!(!out.exists());
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("feature"), "{err}");

    let o = ssp(&["run", "--algorithm", "ac", "--no-such-key", "1"]);
    assert!(!o.status.success());
}
