//! End-to-end tests of the binary: spec'd outputs, exit codes, and the
//! JSON automorphism workflows.

use std::io::Write;
use std::process::{Command, Output};

fn intdiff(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_intdiff"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(args: &[&str]) -> String {
    let out = intdiff(args);
    assert!(
        out.status.success(),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn temp_file(name: &str, contents: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join("intdiff-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    let mut f = std::fs::File::create(&path).unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    path
}

#[test]
fn index_of_derivative_powers() {
    assert_eq!(stdout_of(&["index", "D1^3"]).trim(), "3");
    assert_eq!(stdout_of(&["index", "I1^2"]).trim(), "-2");
    assert_eq!(stdout_of(&["index", "1"]).trim(), "0");
}

#[test]
fn index_domain_error() {
    let out = intdiff(&["index", "e1[0,0]"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not Fredholm"));
}

#[test]
fn usage_error_exits_2() {
    let out = intdiff(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(2));
    let out = intdiff(&["normalize"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn normalize_examples() {
    assert_eq!(stdout_of(&["normalize", "-n", "1", "I1*D1 + e1[0,0]"]).trim(), "1");
    assert_eq!(
        stdout_of(&["normalize", "-n", "1", "H1*(1 - I1*D1)"]).trim(),
        "1 * e[0,0]"
    );
    assert_eq!(stdout_of(&["normalize", "-n", "2", "0"]).trim(), "0");
}

#[test]
fn normalize_output_reparses_to_itself() {
    for expr in ["X1*X1 - H1^2", "D1*I1 + 2*e1[3,1]", "1/2*H1*I1*D1"] {
        let printed = stdout_of(&["normalize", "-n", "1", expr]);
        let again = stdout_of(&["normalize", "-n", "1", printed.trim()]);
        assert_eq!(printed, again);
    }
}

#[test]
fn mul_and_star() {
    assert_eq!(stdout_of(&["mul", "-n", "1", "D1", "I1"]).trim(), "1");
    let star = stdout_of(&["star", "-n", "1", "D1"]);
    assert_eq!(star.trim(), "1 * I^1");
}

#[test]
fn apply_acts_on_divided_powers() {
    assert_eq!(
        stdout_of(&["apply", "-n", "1", "H1", "x1^[5]"]).trim(),
        "6 * x1^[5]"
    );
    assert_eq!(stdout_of(&["apply", "-n", "1", "D1", "1"]).trim(), "0");
    assert_eq!(
        stdout_of(&["apply", "-n", "2", "D1*I2", "x1^[2]"]).trim(),
        "1 * x1^[1] x2^[1]"
    );
}

#[test]
fn enumerate_counts() {
    assert_eq!(stdout_of(&["ideals", "enumerate", "-n", "2", "--count-only"]).trim(), "6");
    let listing = stdout_of(&["ideals", "enumerate", "-n", "1"]);
    let lines: Vec<&str> = listing.lines().collect();
    assert_eq!(lines, vec!["0", "min{ {1} }", "1"]);
    let out = intdiff(&["ideals", "enumerate", "-n", "7"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn stabilizer_report() {
    let report = stdout_of(&["ideals", "stabilizer", "-n", "3", "min{ {1} }"]);
    assert!(report.contains("index 3"));
    assert!(report.contains("order 2"));
    let full = stdout_of(&["ideals", "stabilizer", "-n", "2", "min{ {1,2} }"]);
    assert!(full.contains("index 1"));
}

#[test]
fn invariant_listing() {
    let listing = stdout_of(&["ideals", "invariant", "-n", "2"]);
    let lines: Vec<&str> = listing.lines().collect();
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[0], "0");
    assert_eq!(lines[3], "1");
}

#[test]
fn recognize_torus() {
    let images = temp_file(
        "torus-images.json",
        r#"{ "n": 1, "d": ["1/2 * D^1"], "i": ["2 * I^1"], "h": ["H^1"] }"#,
    );
    let out = stdout_of(&["recognize", "--images", images.to_str().unwrap()]);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["n"], 1);
    assert_eq!(doc["perm"][0], 1);
    assert_eq!(doc["lambda"][0], "2");
    assert_eq!(doc["phi"], "1");
}

#[test]
fn recognize_inner_unit() {
    // conjugation by 1 + e[0,0]
    let images = temp_file(
        "inner-images.json",
        r#"{ "n": 1,
             "d": ["D^1 + e[0,1]"],
             "i": ["I^1 + -1/2 * e[1,0]"],
             "h": ["H^1"] }"#,
    );
    let out = stdout_of(&["recognize", "--images", images.to_str().unwrap()]);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["lambda"][0], "1");
    assert_eq!(doc["phi"], "1 + 1 * e[0,0]");
    assert_eq!(doc["phiInv"], "1 + -1/2 * e[0,0]");
}

#[test]
fn recognize_rejects_flipped_generators() {
    let images = temp_file(
        "flipped-images.json",
        r#"{ "n": 1, "d": ["I^1"], "i": ["D^1"], "h": ["H^1"] }"#,
    );
    let out = intdiff(&["recognize", "--images", images.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("residue"));
}

#[test]
fn invert_and_compose_roundtrip() {
    let aut = temp_file(
        "aut.json",
        r#"{ "n": 1,
             "perm": [1],
             "lambda": ["3"],
             "phi": "1 + 1 * e[0,0]",
             "phiInv": "1 + -1/2 * e[0,0]" }"#,
    );
    let path = aut.to_str().unwrap();
    let inverse = stdout_of(&["invert-aut", "--aut", path]);
    let doc: serde_json::Value = serde_json::from_str(&inverse).unwrap();
    assert_eq!(doc["lambda"][0], "1/3");
    let inv_path = temp_file("aut-inverse.json", &inverse);
    let round = stdout_of(&["compose-aut", path, inv_path.to_str().unwrap()]);
    let doc: serde_json::Value = serde_json::from_str(&round).unwrap();
    assert_eq!(doc["lambda"][0], "1");
    assert_eq!(doc["phi"], "1");
    assert_eq!(doc["perm"][0], 1);
}

#[test]
fn invert_rejects_bad_unit() {
    let aut = temp_file(
        "bad-aut.json",
        r#"{ "n": 1, "perm": [1], "lambda": ["1"], "phi": "1 + e[0,0]", "phiInv": "1" }"#,
    );
    let out = intdiff(&["invert-aut", "--aut", aut.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}
