use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const INTRO: &str = r#"{"field": "F_2", "generators": [[0, 1, 1], [1, 0, 1]], "subset": [0, 1, 2]}"#;
const EVEN_ODD: &str = r#"{"field": "Q", "generators": [[1, 0, 1, 0, 1, 0, 1, 0], [0, 1, 0, 1, 0, 1, 0, 1]], "subset": [0, 2, 4, 6]}"#;
const RATIONAL: &str = r#"{"field": "Q", "generators": [[1, 0, 1, 1], [0, 1, 1, "1/2"]]}"#;
/// `y'' - y`, with even and odd truncated supports as candidates.
const TWO_STEP: &str = r#"{
    "field": "Q",
    "ode": [{"coeffs": [-1]}, {"coeffs": [0]}],
    "candidates": [
        [{"members": [0, 2, 4, 6, 8], "precision": 9}],
        [{"members": [1, 3, 5, 7, 9], "precision": 9}]
    ]
}"#;

fn tsup(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tsup")).args(args).output().expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stderr)))
}

#[test]
fn circuits_of_intro_instance() {
    let dir = TempDir::new().unwrap();
    let out = tsup(&["circuits", s(&write(&dir, "intro.json", INTRO))]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    let expected: Value = serde_json::from_str(r#"[["(0, (0))", "(0, (1))"], ["(0, (0))", "(0, (2))"], ["(0, (1))", "(0, (2))"]]"#).unwrap();
    assert_eq!(r["results"]["circuits"], expected);
    assert_eq!(r["status"], "PASS");
}

#[test]
fn counterexample_passes() {
    let out = tsup(&["counterexample", "--N", "40", "--samples", "50"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let r = report(&out);
    assert_eq!(r["results"]["beta"][0], "-2");
    assert_eq!(r["results"]["gap_table"].as_array().unwrap().len(), 50);
}

#[test]
fn seeded_counterexample_reports_fail() {
    let out = tsup(&["counterexample", "--order", "12", "--recurrence-seeds", "0,0", "--samples", "4"]);
    assert_eq!(out.status.code(), Some(4));
    let r = report(&out);
    assert_eq!(r["status"], "FAIL");
    assert_eq!(r["results"]["beta"][1], "2");
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let rational = write(&dir, "q.json", RATIONAL);
    assert_eq!(tsup(&["supports", s(&rational)]).status.code(), Some(3));
    assert_eq!(tsup(&["supports", s(&rational), "--strategy", "psi"]).status.code(), Some(0));

    let unknown = write(&dir, "bad.json", r#"{"field": "Q", "generators": [[1]], "extra": 0}"#);
    let out = tsup(&["circuits", s(&unknown)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("extra"));

    let bad_entry = write(&dir, "entry.json", r#"{"field": "Q", "generators": [[1, "x"]]}"#);
    let out = tsup(&["circuits", s(&bad_entry)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("generators[0][1]"));

    assert_eq!(tsup(&["circuits", "/nonexistent/instance.json"]).status.code(), Some(1));
    assert_eq!(tsup(&["circuits"]).status.code(), Some(1));
    assert_eq!(tsup(&["no-such-command"]).status.code(), Some(1));

    let collapsed = write(&dir, "rank.json", r#"{"field": "Q", "generators": [[1, 0, 0], [2, 0, 0]]}"#);
    assert_eq!(tsup(&["circuits", s(&collapsed)]).status.code(), Some(2));

    let big = write(&dir, "big.json", r#"{"field": "F_7", "generators": [[1,2,3,4,5,6,0,1], [0,1,2,3,4,5,6,1], [1,0,0,1,0,0,1,0]]}"#);
    assert_eq!(tsup(&["supports", s(&big), "--budget", "10"]).status.code(), Some(3));

    let not_solutions = write(&dir, "ns.json", r#"{"field": "Q", "ode": [{"coeffs": [-1]}, {"coeffs": [0]}], "candidates": [[{"members": [0, 1], "precision": 9}]]}"#);
    assert_eq!(tsup(&["semigroup-check", s(&not_solutions)]).status.code(), Some(2));
}

#[test]
fn support_queries() {
    let dir = TempDir::new().unwrap();
    let intro = write(&dir, "intro.json", INTRO);
    let r = report(&tsup(&["supports", s(&intro), "--strategy", "brute"]));
    assert_eq!(r["results"]["is_support"], false);
    let r = report(&tsup(&["scrawl-check", s(&intro)]));
    assert_eq!(r["results"]["is_scrawl"], true);
    let even_odd = write(&dir, "eo.json", EVEN_ODD);
    let r = report(&tsup(&["independent", s(&even_odd)]));
    assert_eq!(r["results"]["independent"], false);
}

#[test]
fn tropical_commands() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "ode.json", TWO_STEP);
    let r = report(&tsup(&["trop-check", s(&p)]));
    let solves: Vec<bool> = r["results"]["results"].as_array().unwrap().iter().map(|x| x["solves"][0].as_bool().unwrap()).collect();
    assert_eq!(solves, vec![true, true]);
    let out = tsup(&["semigroup-check", s(&p)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["status"], "PASS");
    let r = report(&tsup(&["tropicalize", s(&p)]));
    assert_eq!(r["results"]["tropical"][0]["terms"].as_array().unwrap().len(), 2);
    let out = tsup(&["ode-basis", s(&p), "--order", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["results"]["basis"][0]["terms"][1], serde_json::json!([[2], "1/2"]));
}

#[test]
fn every_command_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let intro = write(&dir, "intro.json", INTRO);
    let eo = write(&dir, "eo.json", EVEN_ODD);
    let ode = write(&dir, "ode.json", TWO_STEP);
    let runs: Vec<Vec<&str>> = vec![
        vec!["circuits", s(&eo)],
        vec!["cocircuits", s(&eo)],
        vec!["independent", s(&eo)],
        vec!["scrawl-check", s(&intro)],
        vec!["supports", s(&intro)],
        vec!["axioms", s(&eo)],
        vec!["dual-check", s(&eo)],
        vec!["ode-basis", s(&ode)],
        vec!["tropicalize", s(&ode)],
        vec!["trop-check", s(&ode)],
        vec!["semigroup-check", s(&ode)],
        vec!["counterexample", "--order", "20", "--samples", "20"],
    ];
    for args in runs {
        let (a, b) = (tsup(&args), tsup(&args));
        assert_eq!(a.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&a.stderr));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn echoed_instance_round_trips() {
    let dir = TempDir::new().unwrap();
    for (name, text, cmd) in [("eo.json", EVEN_ODD, "circuits"), ("ode.json", TWO_STEP, "trop-check"), ("q.json", RATIONAL, "cocircuits")] {
        let first = report(&tsup(&[cmd, s(&write(&dir, name, text))]));
        let echoed = serde_json::to_string(&first["instance"]).unwrap();
        let second = report(&tsup(&[cmd, s(&write(&dir, &format!("echo-{name}"), &echoed))]));
        assert_eq!(first["instance"], second["instance"]);
        assert_eq!(first["results"], second["results"]);
    }
}

#[test]
fn out_flag_writes_the_report() {
    let dir = TempDir::new().unwrap();
    let target = dir.path().join("report.json");
    let out = tsup(&["dual-check", s(&write(&dir, "intro.json", INTRO)), "--out", s(&target)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(target).unwrap()).unwrap();
    assert_eq!(r["status"], "PASS");
    assert!(r.get("timing_ms").is_none());
}
