use std::path::PathBuf;
use std::process::{Command, Output};

use monocurve::curve::derive_curve_data;
use monocurve::multiplier::curve_lct;
use monocurve::poly::Weight;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_monocurve"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn golden(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "golden", name]
        .iter()
        .collect();
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn check_golden(args: &[&str], name: &str, code: i32) {
    let out = run(args);
    assert_eq!(out.status.code(), Some(code), "{args:?}");
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        golden(name),
        "{args:?}"
    );
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn no_floats(v: &Value) -> bool {
    match v {
        Value::Number(n) => n.is_i64() || n.is_u64(),
        Value::Array(xs) => xs.iter().all(no_floats),
        Value::Object(m) => m.values().all(no_floats),
        _ => true,
    }
}

#[test]
fn golden_outputs() {
    let cases: &[(&[&str], &str, i32)] = &[
        (&["curve", "lct", "3", "4", "5"], "curve_lct_3_4_5.json", 0),
        (
            &["curve", "analyze", "4", "6", "9", "--json"],
            "curve_analyze_4_6_9.json",
            0,
        ),
        (
            &[
                "curve",
                "multiplier",
                "3",
                "4",
                "5",
                "--lambda",
                "2",
                "--degree-bound",
                "3",
            ],
            "curve_multiplier_3_4_5.json",
            0,
        ),
        (
            &["curve", "jumps", "3", "4", "5", "--max-lambda", "2"],
            "curve_jumps_3_4_5.json",
            0,
        ),
        (
            &[
                "curve",
                "member",
                "3",
                "4",
                "5",
                "--lambda",
                "2",
                "--poly",
                "x^2-y*z",
                "--both-branches",
            ],
            "curve_member_3_4_5.json",
            0,
        ),
        (
            &["monomial", "multiplier", "x^2, y^3", "--lambda", "1"],
            "monomial_multiplier.json",
            0,
        ),
        (
            &[
                "binomial",
                "multiplier",
                "x^2 - y^3",
                "--lambda",
                "5/6",
                "--poly",
                "x",
            ],
            "binomial_multiplier.json",
            0,
        ),
        (
            &["curve", "analyze", "6", "10", "15"],
            "curve_analyze_tie.json",
            1,
        ),
        (
            &["check", "appendix", "3", "4", "5"],
            "check_appendix_3_4_5.json",
            0,
        ),
    ];
    for (args, name, code) in cases {
        check_golden(args, name, *code);
        assert!(no_floats(&json(args)), "{args:?}");
    }
}

#[test]
fn lct_matches_library() {
    for n in [[3, 4, 5], [4, 6, 9], [3, 5, 7], [5, 6, 7]] {
        let args: Vec<String> = ["curve", "lct"]
            .iter()
            .map(|s| s.to_string())
            .chain(n.iter().map(|k| k.to_string()))
            .collect();
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let v = json(&args);
        let c = derive_curve_data(&Weight::new(n.to_vec()).unwrap()).unwrap();
        let lct = curve_lct(&c).unwrap().lct;
        assert_eq!(v["result"]["lct"]["num"], lct.numer().to_string());
        assert_eq!(v["result"]["lct"]["den"], lct.denom().to_string());
        assert!(!v["result"]["attained_by"].as_array().unwrap().is_empty());
    }
}

#[test]
fn analyze_reports_complete_intersection() {
    let v = json(&["curve", "analyze", "4", "6", "9"]);
    assert_eq!(v["result"]["is_ci"], true);
    assert_eq!(v["schema_version"], "1");
}

#[test]
fn usage_errors_exit_two_without_envelope() {
    for args in [
        &["curve", "lct", "3", "4"][..],
        &["curve", "multiplier", "3", "4", "5", "--lambda", "0.5"],
        &[
            "curve", "member", "3", "4", "5", "--lambda", "1", "--poly", "x^^2",
        ],
        &["check", "appendix", "3", "4"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn domain_errors_exit_one_with_envelope() {
    for args in [
        &["curve", "lct", "2", "4", "6"][..],
        &["curve", "lct", "3", "3", "5"],
        &["curve", "lct", "3", "4", "5", "--both-branches", "--json"],
        &["curve", "multiplier", "3", "4", "5", "--lambda=-1"],
        &["binomial", "multiplier", "x^2 + y^3", "--lambda", "1"],
    ] {
        let out = run(args);
        let v: Value = serde_json::from_slice(&out.stdout).unwrap();
        if args.contains(&"--both-branches") {
            // (3,4,5) is an equality curve, so this one succeeds.
            assert_eq!(out.status.code(), Some(0));
            assert_eq!(v["result"]["agree"], true);
            continue;
        }
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(v["error"]["message"].is_string(), "{args:?}");
        assert!(v["result"].is_null());
    }
}

#[test]
fn both_branches_rejected_off_equality() {
    let out = run(&["curve", "lct", "4", "5", "11", "--both-branches"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    if v["error"].is_null() {
        panic!("(4,5,11) unexpectedly accepted: {v}");
    }
    assert_eq!(out.status.code(), Some(1));
}
