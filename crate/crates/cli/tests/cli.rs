use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn stabcert(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stabcert")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("stabcert-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn check_lcp_origin_is_false() {
    let f = fixture("example46_origin.json");
    let out = stabcert(&["check-lcp", f.to_str().unwrap(), "--quiet"]);
    assert_eq!(out.status.code(), Some(3));
    let cert: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(cert["verdict"], false);
    assert_eq!(cert["modulus"], "inf");
    assert!(cert["witness"].is_array());
}

#[test]
fn check_avi_on_q_is_true() {
    let f = fixture("example46_Q.json");
    let out = stabcert(&["check-avi", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("Lipschitz-like: yes"));
}

#[test]
fn check_lcp_refuses_explicit_q_set() {
    let f = fixture("example46_Q.json");
    let out = stabcert(&["check-lcp", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn solve_prints_four_solutions() {
    let f = fixture("example46_q21.json");
    let out = stabcert(&["solve", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for x in ["(0, 0)", "(2, 0)", "(0, 1)", "(1/2, 3/2)"] {
        assert!(text.contains(&format!("x = {x}")), "{text}");
    }
    assert!(text.contains("4 solution pieces"));
}

#[test]
fn classify_and_domain() {
    let f = fixture("example46_origin.json");
    let out = stabcert(&["classify", f.to_str().unwrap()]);
    assert_eq!(stdout(&out).trim(), "(I1={}, I2={}, I3={1,2})");
    let out = stabcert(&["domain", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("certified_yes_on_rays"));
}

#[test]
fn modulus_of_identity_is_one() {
    let f = fixture("identity_interior.json");
    let out = stabcert(&["modulus", f.to_str().unwrap(), "--out", scratch("m.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("modulus: 1"), "{}", stdout(&out));

    let f = fixture("example46_origin.json");
    let out = stabcert(&["modulus", f.to_str().unwrap(), "--quiet", "--out", scratch("m2.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("NotCertifiedError"));
}

fn without_timing(path: &PathBuf) -> serde_json::Value {
    let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    v.as_object_mut().unwrap().remove("timing_ms");
    v
}

#[test]
fn certificates_are_reproducible() {
    let f = fixture("pmatrix_origin.json");
    let (a, b) = (scratch("a.json"), scratch("b.json"));
    let run = |out: &PathBuf, threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_stabcert"))
            .args(["oracle", f.to_str().unwrap(), "--quiet", "--seed", "5", "--out", out.to_str().unwrap()])
            .env("STABCERT_THREADS", threads)
            .status()
            .unwrap()
    };
    assert_eq!(run(&a, "1").code(), Some(0));
    assert_eq!(run(&b, "4").code(), Some(0));
    assert_eq!(without_timing(&a), without_timing(&b));
    let cert = without_timing(&a);
    assert_eq!(cert["problem"]["options"]["seed"], 5);
    assert_eq!(cert["oracle"]["agrees_with_verdict"], true);
}

#[test]
fn input_errors_exit_one() {
    let bad = scratch("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let out = stabcert(&["check-lcp", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));

    let mismatch = scratch("mismatch.json");
    std::fs::write(&mismatch, r#"{"kind":"lcp","m":[["1","0"],["0","1"]],"q_bar":["1"],"x_bar":["0","0"]}"#).unwrap();
    let out = stabcert(&["check-lcp", mismatch.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("DimensionError"));

    let off_graph = scratch("off.json");
    std::fs::write(&off_graph, r#"{"kind":"lcp","m":[["1"]],"q_bar":["1"],"x_bar":["1"]}"#).unwrap();
    let out = stabcert(&["check-lcp", off_graph.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("MembershipError"));

    let not_q0 = scratch("notq0.json");
    std::fs::write(&not_q0, r#"{"kind":"lcp","m":[["0","1"],["1","0"]],"q_bar":["1","1"],"x_bar":["0","0"]}"#).unwrap();
    let out = stabcert(&["check-lcp", not_q0.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("NotQ0Error"));
}

#[test]
fn fixtures_command_regenerates_shipped_files() {
    let dir = scratch("fixtures");
    let out = stabcert(&["fixtures", "--out", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    for entry in std::fs::read_dir(&dir).unwrap() {
        let entry = entry.unwrap();
        let shipped = std::fs::read_to_string(fixture(entry.file_name().to_str().unwrap())).unwrap();
        assert_eq!(std::fs::read_to_string(entry.path()).unwrap(), shipped);
    }
}
