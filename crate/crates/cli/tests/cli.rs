use std::process::{Command, Output};

use serde_json::Value;

fn misere(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_misere"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn text(args: &[&str]) -> (String, i32) {
    let out = misere(args);
    (
        String::from_utf8(out.stdout).unwrap(),
        out.status.code().unwrap(),
    )
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = misere(&all);
    (
        serde_json::from_slice(&out.stdout).expect("valid JSON"),
        out.status.code().unwrap(),
    )
}

#[test]
fn outcome_of_a_sum() {
    let (out, code) = text(&["outcome", "*+*+~1"]);
    assert_eq!(code, 0);
    assert!(out.contains("o^L = R"), "{out}");
    assert!(out.contains("o^R = L"), "{out}");
}

#[test]
fn compare_in_dicot() {
    let (out, code) = text(&["compare", "D", "*+*", "0"]);
    assert_eq!(code, 0);
    assert!(out.contains("relation: ≡ (proven)"), "{out}");
    let (v, code) = json(&["compare", "E", "*", "0"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"]["relation"], "incomparable");
    assert!(v["witness"].is_array());
}

#[test]
fn json_reports_carry_the_common_keys() {
    let (v, _) = json(&["simplify", "M", "{#|0}"]);
    for key in [
        "command",
        "universe",
        "verdict",
        "mode",
        "budget_used",
        "wall_ms",
    ] {
        assert!(v.get(key).is_some(), "missing {key} in {v}");
    }
    assert_eq!(v["verdict"]["simplest"], "{.|0}");
    assert_eq!(v["trace"][0]["kind"], "drop-tombstone");
}

#[test]
fn jtable_matches_its_formula() {
    let (v, code) = json(&["jtable", "--n", "3", "--m", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"]["matches_formula"], true);
    let grid = v["verdict"]["grid"].as_array().unwrap();
    assert_eq!(grid.len(), 4);
    assert_eq!(grid[2][1], "L");
    assert_eq!(grid[1][1], "N");
}

#[test]
fn probe_of_the_weak_closure() {
    let (out, code) = text(&["probe", "cl({.|2})"]);
    assert_eq!(code, 0);
    assert!(out.contains("weak: yes (weakening end {.|2})"), "{out}");
    assert!(out.contains("reduced: yes"), "{out}");
}

#[test]
fn invertibility_verdicts() {
    let (v, _) = json(&["invertible", "D", "*"]);
    assert_eq!(v["verdict"], "invertible");
    let (v, _) = json(&["invertible", "E", "*"]);
    assert_eq!(v["verdict"], "not-invertible");
    assert_eq!(v["witness"]["end"], "{.|0}");
    let (v, _) = json(&["invertible", "E", "{#,0|.}", "--assert-uhat", "{#,0|.}"]);
    assert_eq!(v["verdict"], "invertible");
    assert_eq!(v["witness"]["inverse"], "{.|0,#}");
    assert!(v["assumptions"]["in_uhat"].is_array());
}

#[test]
fn predicates_and_census() {
    let (v, _) = json(&["predicates", "{.|{*|1}}"]);
    assert_eq!(v["verdict"]["super_starkiller"], true);
    let (v, _) = json(&["predicates", "{.|0}"]);
    assert_eq!(v["verdict"]["starkiller"], true);
    assert!(v["universe"].is_null());
    assert_eq!(v["verdict"]["disintegrator"], false);
    let (v, code) = json(&["census"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"]["classes"].as_array().unwrap().len(), 6);
}

#[test]
fn bounded_results_exit_with_two() {
    let (out, code) = text(&["probe", "E"]);
    assert_eq!(code, 2, "{out}");
    assert!(out.contains("mode: bounded(3)"));
    let (v, code) = json(&["oracle-compare", "mon(~1;{.|2})", "1+~1", "0"]);
    assert_eq!(code, 2);
    assert_eq!(v["verdict"]["relation"], "≤");
}

#[test]
fn errors_have_their_own_exit_codes() {
    let out = misere(&["compare", "M", "1", "(("]);
    assert_eq!(out.status.code(), Some(64));
    assert!(String::from_utf8_lossy(&out.stderr).contains("position"));
    assert_eq!(
        misere(&["compare", "M", "1", "0", "--budget", "1"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(misere(&["frobnicate"]).status.code(), Some(64));
    let (v, code) = json(&["outcome", "{#,#|0}"]);
    assert_eq!(code, 64);
    assert!(v["error"].is_string());
}

#[test]
fn cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().to_str().unwrap();
    let (first, code) = json(&["--cache-dir", path, "compare", "M", "{#,0|0}+{0|0,#}", "0"]);
    assert_eq!(code, 0);
    let files: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(files.len(), 1);
    let (second, _) = json(&["--cache-dir", path, "compare", "M", "{#,0|0}+{0|0,#}", "0"]);
    assert_eq!(first["verdict"], second["verdict"]);
    assert!(
        second["budget_used"].as_u64() < first["budget_used"].as_u64(),
        "{first} {second}"
    );
}

#[test]
fn selftest_passes() {
    let (out, code) = text(&["selftest", "--samples", "20", "--seed", "7"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("all checks passed"));
}
