use std::process::{Command, Output};

use kloos3::oracle::{val3, Oracle};
use kloos3::FieldSpec;
use serde_json::Value;

fn kloos3(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kloos3"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_lines(out: &Output) -> Vec<Value> {
    String::from_utf8(out.stdout.clone())
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).expect("valid json line"))
        .collect()
}

#[test]
fn ksum_example() {
    let out = kloos3(&["--m", "5", "--a", "p:31", "ksum"]);
    assert!(out.status.success());
    let rec = &json_lines(&out)[0];
    assert_eq!(rec["K"], 27);
    assert_eq!(rec["val3"], 3);
    assert_eq!(rec["a"], "p:31");
}

#[test]
fn ksum_zero_parameter_is_an_error() {
    let out = kloos3(&["--m", "5", "--a", "t:00000", "ksum"]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "ZeroParameter");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(kloos3(&["ksum"]).status.code(), Some(2));
    assert_eq!(kloos3(&["--m", "5", "ksum"]).status.code(), Some(2));
    assert_eq!(
        kloos3(&["--m", "5", "--bogus", "ksum"]).status.code(),
        Some(2)
    );
    assert_eq!(
        kloos3(&["--m", "5", "--a", "t:0x", "ksum"]).status.code(),
        Some(2)
    );
    assert_eq!(
        kloos3(&["--m", "2", "--modulus", "t:100", "ksum", "--a", "t:10"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        kloos3(&["--m", "5", "--workers", "0", "scan"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn f9_table_matches_direct_sum() {
    let f = FieldSpec::builtin(2).unwrap();
    for a in f.elements().skip(1) {
        let arg = a.to_string();
        let out = kloos3(&["--m", "2", "--a", &arg, "ksum"]);
        let rec = &json_lines(&out)[0];
        // trace as the sum of conjugates; w + w^2 = -1 and the nonzero
        // traces split evenly, so K = c0 - (q - c0) / 2
        let c0 = f
            .elements()
            .filter(|x| {
                let y = f.add(x, &f.mul(&a, &f.safe_inv(x)));
                f.trace_by_conjugates(&y).is_zero()
            })
            .count() as i64;
        assert_eq!(rec["K"], c0 - (9 - c0) / 2, "a = {a}");
    }
}

#[test]
fn kval_is_three_for_every_seed() {
    for seed in ["0", "1", "17", "123456789"] {
        let out = kloos3(&["--m", "5", "--a", "p:31", "--seed", seed, "kval"]);
        let rec = &json_lines(&out)[0];
        assert_eq!(rec["k"], 3);
        assert_eq!(rec["seed"].to_string(), seed);
        let trail = rec["trail"].as_array().unwrap().len();
        let r = rec["r"].as_u64().unwrap_or(0) as usize;
        assert!(trail <= 5 + r + 1);
    }
    let a = kloos3(&["--m", "5", "--a", "p:31", "--seed", "9", "kval"]);
    let b = kloos3(&["--m", "5", "--a", "p:31", "--seed", "9", "kval"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn scan_agrees_with_oracle_and_trace_count() {
    let out = kloos3(&["--m", "4", "--full", "--workers", "3", "scan"]);
    assert!(out.status.success());
    let recs = json_lines(&out);
    let f = FieldSpec::builtin(4).unwrap();
    let o = Oracle::new(&f).unwrap();
    assert_eq!(recs.len(), 81);
    for rec in &recs[..80] {
        let a = f.parse_element(rec["a"].as_str().unwrap()).unwrap();
        let k = o.kloosterman_sum(&a).unwrap().value;
        assert_eq!(rec["K"], k);
        assert_eq!(rec["k"], val3(k, 4));
    }
    let summary = &recs[80];
    assert_eq!(summary["summary"], true);
    let ones = summary["histogram"]
        .as_array()
        .unwrap()
        .iter()
        .find(|h| h["k"] == 1)
        .unwrap();
    assert_eq!(ones["count"], 2 * 27);
}

#[test]
fn scan_zero_list_m7_matches_oracle() {
    let out = kloos3(&["--m", "7", "--workers", "4", "scan"]);
    let recs = json_lines(&out);
    let summary = recs.last().unwrap();
    let f = FieldSpec::builtin(7).unwrap();
    let o = Oracle::new(&f).unwrap();
    let mut zeros: Vec<_> = summary["zeros"]
        .as_array()
        .unwrap()
        .iter()
        .map(|z| f.parse_element(z.as_str().unwrap()).unwrap())
        .collect();
    zeros.sort();
    let mut expect: Vec<_> = f
        .elements()
        .skip(1)
        .filter(|a| o.kloosterman_sum(a).unwrap().value == 0)
        .collect();
    expect.sort();
    assert_eq!(zeros, expect);
}

#[test]
fn scan_records_round_trip() {
    let f = FieldSpec::builtin(3).unwrap();
    let out = kloos3(&["--m", "3", "scan"]);
    let recs = json_lines(&out);
    for (i, rec) in recs[..26].iter().enumerate() {
        let a = f.parse_element(rec["a"].as_str().unwrap()).unwrap();
        assert_eq!(a.index(), i as u64 + 1);
    }
    let table = kloos3(&["--m", "3", "--output", "table", "scan"]);
    assert!(String::from_utf8(table.stdout)
        .unwrap()
        .contains("# zeros:"));
}

fn dot_statements(dot: &str) -> Vec<&str> {
    let body = dot
        .trim()
        .strip_prefix("digraph descent {")
        .and_then(|s| s.strip_suffix('}'))
        .expect("digraph wrapper");
    body.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .collect()
}

#[test]
fn descent_full_graph() {
    let out = kloos3(&["--m", "5", "--a", "p:31", "descent", "--full"]);
    let dot = String::from_utf8(out.stdout).unwrap();
    let stmts = dot_statements(&dot);
    assert!(stmts.iter().all(|s| s.ends_with(';')));
    let nodes = stmts.iter().filter(|s| s.contains("[label=")).count();
    let edges = stmts.iter().filter(|s| s.contains(" -> ")).count();
    assert_eq!((nodes, edges), (13, 12));
    assert!(dot.contains("label=\"α^91\", level=0"));
    for s in &stmts {
        assert_eq!(s.matches('"').count() % 2, 0);
    }
}

#[test]
fn descent_with_nonzero_trace_is_one_node() {
    let f = FieldSpec::builtin(5).unwrap();
    let a = f.elements().find(|x| f.trace(x) != 0).unwrap().to_string();
    let out = kloos3(&["--m", "5", "--a", &a, "descent"]);
    let dot = String::from_utf8(out.stdout).unwrap();
    let stmts = dot_statements(&dot);
    assert_eq!(stmts.len(), 1);
    let json = kloos3(&["--m", "5", "--a", &a, "--output", "json", "descent"]);
    assert_eq!(json_lines(&json)[0]["t"], 1);
}

#[test]
fn tower_all_consistent() {
    let out = kloos3(&["--m", "2", "tower", "--n", "3", "--all"]);
    assert!(out.status.success());
    let recs = json_lines(&out);
    for rec in &recs[..8] {
        assert_eq!(rec["H_n"].as_u64(), rec["H"].as_u64().map(|h| h + 1));
        assert_eq!(rec["consistent"], true);
    }
    assert_eq!(recs[8]["all_consistent"], true);
    assert_eq!(
        kloos3(&["--m", "2", "tower", "--all"]).status.code(),
        Some(2)
    );
}

#[test]
fn verify_reports_winner() {
    let out = kloos3(&["--m", "5", "verify"]);
    assert_eq!(out.status.code(), Some(0));
    let recs = json_lines(&out);
    assert!(recs
        .iter()
        .any(|r| r["check"] == "worked_example" && r["passed"] == true));
    let summary = recs.last().unwrap();
    assert_eq!(summary["passed"], true);
    assert_eq!(summary["k3_winner"], "centered");
}

#[test]
fn moduli_match_table() {
    let out = kloos3(&["moduli"]);
    assert!(out.status.success());
    let recs = json_lines(&out);
    assert_eq!(recs.len(), 11);
    assert!(recs.iter().all(|r| r["matches_builtin"] == true));
    assert_eq!(recs[3]["modulus"], "101011");
}
