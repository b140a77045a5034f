use std::path::PathBuf;
use std::process::{Command, Output};

use symvec::{EvalOptions, Formula, SymbolicVectorSet};
use symvec_cli::commands::{run_verify, verify_case, VerifyArgs};
use symvec_cli::pnml::read_pnml;
use symvec_cli::report::{CountValue, RunReport};

const MUTEX_EF: &str = "EF (fireable(t3) && fireable(t4))";

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn symvec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symvec")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn check_mutex_text() {
    let o = symvec(&["check", "--net", &fixture("mutex.pnml"), "--formula", MUTEX_EF, "--contains", "1,1,2,0,0", "--contains", "m0", "--stats"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("members  6"), "{out}");
    assert!(out.contains("contains 1,1,2,0,0  true"));
    assert!(out.contains("contains 1,1,1,0,0  false"));
    assert!(out.contains("iterations 3"));
}

#[test]
fn check_json_round_trips() {
    let o = symvec(&["check", "--net", &fixture("mutex.pnml"), "--formula", MUTEX_EF, "--capacity", "2", "--contains", "m0", "--count", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let report: RunReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report.dim, 5);
    assert_eq!(report.options.capacity, Some(2));
    assert_eq!(report.membership.get("1,1,1,0,0"), Some(&false));
    assert_eq!(report.count, Some(CountValue::Number(102)));
    let again: RunReport = serde_json::from_str(&report.to_json()).unwrap();
    assert_eq!(again, report);
    let set = SymbolicVectorSet::from_members(report.dim, report.result.iter().cloned()).unwrap();
    assert!(set.is_canonical());
}

#[test]
fn exit_codes() {
    let mutex = fixture("mutex.pnml");
    assert_eq!(symvec(&["check", "--net", &mutex, "--formula", "EF ("]).status.code(), Some(1));
    assert_eq!(symvec(&["check", "--net", &mutex, "--formula", "fireable(zz)"]).status.code(), Some(1));
    assert_eq!(symvec(&["check", "--net", "/nonexistent.pnml", "--formula", "true"]).status.code(), Some(1));
    assert_eq!(symvec(&["check", "--net", &mutex]).status.code(), Some(1));
    assert_eq!(symvec(&["--help"]).status.code(), Some(0));
    let stuck = symvec(&[
        "check", "--net", &fixture("two_place.pnml"), "--formula", "EG fireable(t0)",
        "--no-saturation", "--max-iterations", "20",
    ]);
    assert_eq!(stuck.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&stuck.stderr).contains("20 iterations"));
}

#[test]
fn capacity_below_initial_marking_is_rejected() {
    let o = symvec(&["check", "--net", &fixture("two_place.pnml"), "--formula", "true", "--capacity", "2"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn verify_subcommand() {
    let o = symvec(&["verify", "--net", &fixture("mutex.pnml"), "--formula", "AG !(fireable(t3) && fireable(t4))", "--capacity", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("1 cases, 0 mismatches"));
    let o = symvec(&["verify", "--random", "25", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("25 cases, 0 mismatches"));
    assert_eq!(symvec(&["verify", "--random", "3", "--formula", "true"]).status.code(), Some(0));
    assert_eq!(symvec(&["verify"]).status.code(), Some(1));
}

#[test]
fn verify_library_matches_binary() {
    let args = VerifyArgs {
        net: None,
        config: None,
        formula: None,
        capacity: None,
        seed: 7,
        random: Some(25),
        no_saturation: true,
        max_iterations: 10_000,
    };
    let out = run_verify(&args).unwrap();
    assert_eq!(out.cases, 25);
    assert!(out.failures.is_empty());
}

#[test]
fn tampered_result_is_caught() {
    let net = read_pnml(fixture("mutex.pnml").as_ref()).unwrap();
    let f = Formula::parse(MUTEX_EF).unwrap();
    let honest = verify_case(&net, &f, 2, EvalOptions::default(), &|s| s).unwrap();
    assert!(honest.is_none());
    let emptied = |s: SymbolicVectorSet| SymbolicVectorSet::empty(s.dim()).unwrap();
    let m = verify_case(&net, &f, 2, EvalOptions::default(), &emptied).unwrap().expect("mismatch");
    assert!(m.expected && !m.symbolic);
    // The lex-first satisfying marking.
    assert_eq!(m.marking.values(), &[0, 0, 0, 1, 1]);
}

#[test]
fn enumerate_subcommand() {
    let mutex = fixture("mutex.pnml");
    let o = symvec(&["enumerate", "--net", &mutex, "--formula", "fireable(t3) && fireable(t4)", "--capacity", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "0,0,0,1,1\n");
    let o = symvec(&["enumerate", "--net", &mutex, "--formula", "true", "--capacity", "2", "--limit", "10"]);
    assert_eq!(o.status.code(), Some(1));
    let o = symvec(&["enumerate", "--net", &mutex, "--formula", "true"]);
    assert_eq!(o.status.code(), Some(1));
    let o = symvec(&["enumerate", "--net", &mutex, "--formula", MUTEX_EF, "--capacity", "2"]);
    let lines: Vec<_> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(lines.len(), 102);
    let mut sorted = lines.clone();
    sorted.sort_by_key(|l| l.split(',').map(|v| v.parse::<u32>().unwrap()).collect::<Vec<_>>());
    assert_eq!(lines, sorted);
}

#[test]
fn sidecar_capacities_apply() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("caps.json");
    std::fs::write(&cfg, r#"{"capacities": {"p2": 1, "p3": 1, "p4": 1}}"#).unwrap();
    let cfg = cfg.to_string_lossy().into_owned();
    let o = symvec(&["check", "--net", &fixture("mutex.pnml"), "--config", &cfg, "--formula", "true", "--capacity", "1", "--count"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("count    32"), "{}", stdout(&o));
    std::fs::write(dir.path().join("bad.json"), r#"{"capacities": {"nope": 1}}"#).unwrap();
    let bad = dir.path().join("bad.json").to_string_lossy().into_owned();
    let o = symvec(&["check", "--net", &fixture("mutex.pnml"), "--config", &bad, "--formula", "true"]);
    assert_eq!(o.status.code(), Some(1));
}
