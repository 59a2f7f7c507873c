use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .display()
        .to_string()
}

fn freesum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_freesum"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let o = freesum(&all);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn check<'a>(v: &'a Value, name: &str) -> &'a Value {
    v["verdict"]["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == name)
        .unwrap_or_else(|| panic!("no check {name}"))
}

#[test]
fn ehrhart_square_text() {
    let o = freesum(&["ehrhart", "--polytope", &fixture("square.json"), "--trunc", "5", "--rational"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("(1+T)/(1-T)^3"), "{out}");
    assert!(out.contains("1,4,9,16,25,36"), "{out}");
}

#[test]
fn ehrhart_rational_json() {
    let v = json(&["ehrhart", "--polytope", &fixture("half_segment.json"), "--trunc", "4", "--rational"]);
    assert_eq!(v["series"]["coeffs"], serde_json::json!([1, 1, 2, 2, 3]));
    assert_eq!(v["rational"]["q"], 2);
}

#[test]
fn free_sum_counterexample() {
    let v = json(&["free-sum", "--p", &fixture("pstar.json"), "--q", &fixture("qseg.json"), "--trunc", "10"]);
    assert_eq!(v["verdict"]["holds"], false);
    let w = &check(&v, "height_le_1")["witness"];
    assert_eq!((w["max_height_p"].as_i64(), w["max_height_q"].as_i64()), (Some(2), Some(2)));
    let lhs = v["series"]["lhs"].as_array().unwrap();
    let rhs = v["series"]["rhs"].as_array().unwrap();
    assert_eq!(lhs.len(), 11);
    assert_ne!(lhs, rhs);
}

#[test]
fn free_sum_of_segments_holds() {
    let v = json(&["free-sum", "--p", &fixture("seg.json"), "--q", &fixture("seg.json"), "--embed"]);
    assert_eq!(v["verdict"]["holds"], true);
    assert_eq!(check(&v, "info:series_identity")["ok"], true);
}

#[test]
fn prism_prime_and_normal() {
    let args = ["--monoid", &fixture("prism.json"), "--x", "0 1 1 1", "--y", "1 0 0 1"];
    let p = json(&[&["check-prime"][..], &args].concat());
    assert_eq!(p["verdict"]["holds"], true);
    let n = json(&[&["check-normal"][..], &args].concat());
    assert_eq!(n["verdict"]["holds"], true);
    let lit = json(&[&["check-normal"][..], &args, &["--strict-normal-pairing", "false"]].concat());
    assert_eq!(check(&lit, "info:pairing")["witness"], "literal");
    let asserted = json(&[&["check-prime"][..], &args, &["--assert-normal"]].concat());
    assert_eq!(check(&asserted, "info:normality_asserted")["ok"], true);
}

#[test]
fn multi_element_commands() {
    let cube = fixture("cube3_monoid.json");
    let xs = ["--x", "1 1 0 1", "--x", "0 0 1 1"];
    for cmd in ["check-prime-mult", "check-normal-mult", "gorenstein"] {
        let v = json(&[&[cmd, "--monoid", &cube][..], &xs].concat());
        assert_eq!(v["verdict"]["holds"], true, "{cmd}");
    }
}

#[test]
fn rational_sum_diag() {
    let v = json(&["rational-sum", "--p", &fixture("diag_p.json"), "--q", &fixture("diag_q.json")]);
    assert_eq!(v["verdict"]["holds"], true);
    assert_eq!(check(&v, "info:junction")["witness"]["point"], serde_json::json!([1, 1, 2]));
}

#[test]
fn oracle_modes() {
    let v = json(&["oracle", "ehrhart", "--polytope", &fixture("cube3.json"), "--trunc", "3"]);
    assert_eq!(v["oracle"], serde_json::json!([1, 8, 27, 64]));
    assert_eq!(v["agree"], true);
    let v = json(&["oracle", "normality", "--points", &fixture("pstar_qseg_points.json")]);
    assert_eq!((v["oracle"].as_bool(), v["agree"].as_bool()), (Some(false), Some(true)));
    let v = json(&["oracle", "random", "--count", "50"]);
    assert_eq!(v["agree"], true);
}

#[test]
fn exit_codes() {
    let prism = fixture("prism.json");
    let o = freesum(&["check-prime", "--monoid", &prism, "--x", "9 1 1 1", "--y", "1 0 0 1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = freesum(&["check-prime", "--monoid", &prism, "--x", "0 0 0 0", "--y", "1 0 0 1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = freesum(&["ehrhart", "--polytope", "/nonexistent/p.json"]);
    assert_eq!(o.status.code(), Some(2));
    let dir = std::env::temp_dir().join(format!("freesum-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{\n  \"vertices\": [[\"0\"],\n").unwrap();
    let o = freesum(&["ehrhart", "--polytope", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line"));
    // a non-normal monoid violates the precondition of the criteria
    let m = dir.join("m.json");
    std::fs::write(&m, r#"{"ambient": 2, "generators": [[3,0],[2,1],[0,3]]}"#).unwrap();
    let o = freesum(&["check-prime", "--monoid", m.to_str().unwrap(), "--x", "3 0", "--y", "0 3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn json_round_trips_and_is_deterministic() {
    let args = ["free-sum", "--p", &fixture("pstar.json"), "--q", &fixture("qseg.json"), "--format", "json"];
    let a = freesum(&args);
    let b = freesum(&args);
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    let again: Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
    assert_eq!(v, again);
    let verdict = freesum_core::io::parse_verdict(&v["verdict"].to_string()).unwrap();
    assert!(!verdict.holds);
}
