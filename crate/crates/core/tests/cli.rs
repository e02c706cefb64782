use std::process::Command;

use rookmonoid::cli::{run, EXIT_INTERNAL, EXIT_OK, EXIT_USAGE, EXIT_VERIFICATION_FAILED};

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("rookmonoid").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn enumerate_lists_elements_with_lengths() {
    let (code, out, _) = call(&["enumerate", "rook:1"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "(0)\t0\n(1)\t1\n");
    let (_, out, _) = call(&["enumerate", "rook:3"]);
    assert_eq!(out.lines().count(), 34);
    assert_eq!(out.lines().last().unwrap(), "(3,2,1)\t9");
    let (_, csv, _) = call(&["enumerate", "rook:2", "--format", "csv"]);
    assert_eq!(csv.lines().next().unwrap(), "index,element,rank,length,matrix_rank");
}

#[test]
fn worked_example_interval() {
    let (code, out, _) = call(&["interval", "rook:3", "--from", "0,1,0", "--to", "3,1,2", "--lex-first"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("labels: (0,1),(0,2),(0,2),(0,3),(1,2),(2,3)\n"), "{out}");
    let (_, json, _) = call(&[
        "interval", "rook:3", "--from", "0,1,0", "--to", "3,1,2", "--lex-first", "--count", "--format", "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["lex_first"]["vertices"].as_array().unwrap().len(), 7);
    assert_eq!(v["increasing_chains"], "1");
}

#[test]
fn hasse_dot_and_json() {
    let (code, dot, _) = call(&["hasse", "rook:3", "--format", "dot"]);
    assert_eq!(code, EXIT_OK);
    assert!(dot.contains("rankdir=BT"));
    assert_eq!(dot.matches(" -> ").count(), 79);
    let (_, json, _) = call(&["hasse", "rook:2", "--format", "json"]);
    let p = rookmonoid::export::from_json(&json).unwrap();
    assert_eq!(p.len(), 7);
}

#[test]
fn mobius_outputs() {
    let (code, csv, _) = call(&["mobius", "rook:2", "--all-pairs"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(csv.lines().next().unwrap(), "bottom,top,length,mu");
    // 7 diagonal pairs plus 19 strict ones.
    assert_eq!(csv.lines().count(), 1 + 7 + 19);
    let (_, one, _) = call(&["mobius", "rook:1", "--from", "0", "--to", "1"]);
    assert_eq!(one, "-1\n");
    let (_, euler, _) = call(&["mobius", "rook:1", "--euler"]);
    assert_eq!(euler, "reduced euler characteristic: -1\n");
}

#[test]
fn chain_filters() {
    let all = call(&["chain", "rook:2", "--from", "0,0", "--to", "2,1"]).1;
    let inc = call(&["chain", "rook:2", "--from", "0,0", "--to", "2,1", "--filter", "increasing"]).1;
    assert_eq!(inc.lines().count(), 1);
    assert!(all.lines().count() > 1);
    assert!(all.contains(inc.trim()));
    let (code, _, err) = call(&["chain", "rook:3", "--from", "0,0,0", "--to", "3,2,1", "--cutoff", "5"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("more than 5"));
}

#[test]
fn verify_exit_codes() {
    let (code, json, _) = call(&["verify", "rook:3", "--checks", "el,length2,mobius-range", "--threads", "2"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["passed"], true);
    let (code, _, err) = call(&["verify", "rook:3", "--checks", "order", "--mutate", "delete-cover:0"]);
    assert_eq!(code, EXIT_VERIFICATION_FAILED);
    assert!(err.contains("verification failed"));
    let (code, _, err) = call(&["verify", "rook:4", "--max-intervals", "10"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("budget"));
}

#[test]
fn output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r2.txt");
    let (code, out, _) = call(&["verify", "rook:2", "--format", "text", "-o", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert!(out.is_empty());
    assert!(std::fs::read_to_string(&path).unwrap().contains("PASSED"));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["bogus"],
        vec!["enumerate", "rook:x"],
        vec!["enumerate", "rook:7"],
        vec!["hasse", "rook:2", "--format", "yaml"],
        vec!["interval", "rook:2", "--from", "0,0", "--to", "9,9"],
        vec!["interval", "rook:2", "--from", "2,1", "--to", "0,0"],
        vec!["verify", "rook:2", "--scope", "sample:0"],
        vec!["mobius", "rook:2", "--from", "0,0"],
    ] {
        assert_eq!(call(&args).0, EXIT_USAGE, "{args:?}");
    }
    let (code, out, _) = call(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("verify"));
}

#[test]
fn unsafe_large_n_warns() {
    let (code, _, err) = call(&["--unsafe-large-n", "enumerate", "rook:2"]);
    assert_eq!(code, EXIT_OK);
    assert!(err.contains("warning"));
    let (code, _, _) = call(&["--unsafe-large-n", "enumerate", "rook:9"]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn binary_reports_exit_status() {
    let bin = env!("CARGO_BIN_EXE_rookmonoid");
    let ok = Command::new(bin).args(["enumerate", "rook:1"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(EXIT_OK));
    assert_eq!(String::from_utf8(ok.stdout).unwrap().lines().count(), 2);
    let bad = Command::new(bin).args(["enumerate", "nope"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(EXIT_USAGE));
    let failed = Command::new(bin)
        .args(["verify", "sym:3", "--mutate", "perturb-rank:1", "--checks", "lengths"])
        .output()
        .unwrap();
    assert_eq!(failed.status.code(), Some(EXIT_VERIFICATION_FAILED));
    assert_ne!(EXIT_INTERNAL, EXIT_USAGE);
}
