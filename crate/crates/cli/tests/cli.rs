use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn spec(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../specs").join(name);
    p.to_str().unwrap().to_owned()
}

fn cantor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cantor")).args(args).env_remove("CANTOR_MAX_BITS").output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn error_code(out: &Output) -> String {
    json(out)["error"]["code"].as_str().unwrap().to_owned()
}

#[test]
fn geometric_expansion_is_all_ones() {
    let out = cantor(&["expand", "--spec", &spec("geometric.json"), "--N", "16", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "m,num,den");
    assert_eq!(lines.len(), 17);
    for (m, line) in lines[1..].iter().enumerate() {
        assert_eq!(*line, format!("{m},1,1"));
    }
}

#[test]
fn factorial_spec_inequalities_all_hold() {
    let out = cantor(&[
        "check-thm21",
        "--spec",
        &spec("factorial.json"),
        "--b",
        "4",
        "--epsilon",
        "1/100",
        "--variant",
        "second",
        "--range",
        "1..8",
    ]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["verdict"]["summary"], "ALL_HOLD");
    assert_eq!(v["evidence"]["epsilon"], "1/100");
    assert_eq!(v["evidence"]["rows"].as_array().unwrap().len(), 8);
    let cor = json(&cantor(&["cor22", "--b", "4", "--epsilon", "1/100", "--range", "1..8"]));
    assert_eq!(cor["verdict"]["summary"], "ALL_HOLD");
}

#[test]
fn coefficient_dumps_by_domain() {
    let csv = |args: &[&str]| String::from_utf8(cantor(args).stdout).unwrap();
    let signs = csv(&["expand", "--spec", &spec("signs.json"), "--N", "4", "--format", "csv"]);
    assert_eq!(signs, "m,num,den\n0,1,1\n1,-1,1\n2,-1,1\n3,1,1\n");
    let words = csv(&["tm-to-product", "--spec", &spec("thue_morse_word.json")]);
    let dir = TempDir::new().unwrap();
    let product = dir.path().join("tm.json");
    let v: Value = serde_json::from_str(&words).unwrap();
    fs::write(&product, v["verdict"].to_string()).unwrap();
    let roots = csv(&["expand", "--spec", product.to_str().unwrap(), "--N", "4", "--format", "csv"]);
    assert_eq!(roots, "m,residue\n0,0\n1,1\n2,1\n3,0\n");
    let tail = csv(&["tail-expand", "--spec", &spec("factorial.json"), "--n", "1", "--N", "2", "--format", "csv"]);
    assert_eq!(tail, "m,num,den\n0,1,1\n1,1,4\n");
}

#[test]
fn failing_checks_still_succeed() {
    let out = cantor(&["cor22", "--b", "2", "--epsilon", "1/100", "--range", "1..8"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["verdict"]["summary"], "FIRST_FAILURE(1)");
}

#[test]
fn malformed_and_unknown_keys_are_parse_errors() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{not json").unwrap();
    let out = cantor(&["expand", "--spec", bad.to_str().unwrap(), "--N", "4"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(error_code(&out), "SPEC_PARSE");

    let extra = dir.path().join("extra.json");
    fs::write(
        &extra,
        r#"{"radix": {"kind": "constant", "q": 2}, "domain": "rational",
        "coeffs": {"kind": "constant", "values": ["1"]}, "colour": "blue"}"#,
    )
    .unwrap();
    let out = cantor(&["expand", "--spec", extra.to_str().unwrap(), "--N", "4"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(error_code(&out), "SPEC_PARSE");

    let out = cantor(&["expand", "--spec", "/nonexistent/spec.json", "--N", "4"]);
    assert_eq!(error_code(&out), "IO");
}

#[test]
fn usage_errors_exit_one() {
    let out = cantor(&["expand", "--N", "4"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(error_code(&out), "USAGE");
    let out =
        cantor(&["check-thm21", "--spec", &spec("factorial.json"), "--b", "4", "--epsilon", "x", "--range", "1..2"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(error_code(&out), "INVALID_ARGUMENT");
    assert!(cantor(&["--help"]).status.success());
}

#[test]
fn hypothesis_failures_exit_two() {
    let dir = TempDir::new().unwrap();
    let trivial = dir.path().join("trivial.json");
    fs::write(
        &trivial,
        r#"{"radix": {"kind": "constant", "q": 2}, "domain": "rational",
        "coeffs": {"kind": "constant", "values": ["0"]}}"#,
    )
    .unwrap();
    let out = cantor(&["witness", "--spec", trivial.to_str().unwrap(), "--n", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_code(&out), "NO_WITNESS");

    let pair = dir.path().join("pair.json");
    fs::write(&pair, r#"{"f": {"kind": "constant", "value": 9}, "F": {"kind": "constant", "value": 4}}"#).unwrap();
    let out = cantor(&[
        "check-prop23",
        "--spec",
        pair.to_str().unwrap(),
        "--b",
        "3",
        "--c",
        "2",
        "--epsilon",
        "1/2",
        "--range",
        "0..2",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_code(&out), "HYPOTHESIS_VIOLATED");
}

#[test]
fn reports_are_byte_identical_and_metadata_is_separate() {
    let dir = TempDir::new().unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        let status = cantor(&[
            "schmidt-report",
            "--spec",
            &spec("signs.json"),
            "--b",
            "3",
            "--range",
            "1..5",
            "--out",
            out.to_str().unwrap(),
        ])
        .status;
        assert!(status.success());
        (fs::read(&out).unwrap(), dir.path().join(format!("{name}.meta.json")))
    };
    let (a, meta_a) = run("a.json");
    let (b, _) = run("b.json");
    assert_eq!(a, b);
    let meta: Value = serde_json::from_slice(&fs::read(meta_a).unwrap()).unwrap();
    assert_eq!(meta["command"], "schmidt-report");
    assert_eq!(meta["exit_code"], 0);
    let body: Value = serde_json::from_slice(&a).unwrap();
    assert!(body.get("started_unix").is_none());
}

#[test]
fn bit_cap_comes_from_the_environment() {
    let run = |cap: &str| {
        Command::new(env!("CARGO_BIN_EXE_cantor"))
            .args(["schmidt-report", "--spec", &spec("factorial.json"), "--b", "4", "--range", "6..6"])
            .env("CANTOR_MAX_BITS", cap)
            .output()
            .unwrap()
    };
    let out = run("16");
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(error_code(&out), "CAP_EXCEEDED");
    assert!(run("100000").status.success());
    assert_eq!(error_code(&run("lots")), "INVALID_ARGUMENT");
}

#[test]
fn csv_needs_a_table() {
    let out = cantor(&["tm-period", "--spec", &spec("thue_morse_word.json"), "--format", "csv"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(error_code(&out), "INVALID_ARGUMENT");
}

#[test]
fn every_command_runs() {
    let geo = spec("geometric.json");
    let fact = spec("factorial.json");
    let tm = spec("thue_morse_word.json");
    let periodic = spec("periodic_word.json");
    let pair = spec("prop23.json");
    let signs = spec("signs.json");
    let geo35 = spec("geometric_3_5.json");
    let cases: Vec<Vec<&str>> = vec![
        vec!["digits", "--n", "123456789012345678901234567890"],
        vec!["digits", "--spec", &geo, "--n", "10"],
        vec!["sparse-multiple", "--l", "7", "--t", "3"],
        vec!["expand", "--spec", &geo, "--N", "8"],
        vec!["tail-expand", "--spec", &fact, "--n", "2", "--N", "8"],
        vec!["copy-structure", "--spec", &signs, "--n", "2", "--blocks", "4"],
        vec!["evaluate", "--spec", &geo35, "--b", "7"],
        vec!["bounded-report", "--spec", &fact, "--n-max", "3", "--m-max", "64"],
        vec!["witness", "--spec", &fact, "--n", "2"],
        vec!["approximant", "--spec", &fact, "--n", "2"],
        vec!["check-thm21", "--spec", &geo, "--b", "3", "--epsilon", "1/10", "--range", "1..4"],
        vec!["check-prop23", "--spec", &pair, "--b", "2", "--c", "2", "--epsilon", "1/10", "--range", "0..4"],
        vec!["cor22", "--b", "4", "--epsilon", "1/100", "--range", "1..3"],
        vec!["schmidt-report", "--spec", &fact, "--b", "4", "--range", "1..3"],
        vec!["tm-build", "--spec", &tm, "--n", "4"],
        vec!["tm-letter", "--spec", &tm, "--m", "1000000000000000000000"],
        vec!["tm-period", "--spec", &periodic],
        vec!["tm-subseq-value", "--spec", &tm, "--b", "2"],
        vec!["tm-subseq-value", "--spec", &tm, "--b", "10", "--values", "0,1"],
        vec!["tm-subseq-scan", "--spec", &tm, "--max-period", "8", "--horizon", "256"],
        vec!["tm-to-product", "--spec", &tm],
    ];
    for args in cases {
        let out = cantor(&args);
        assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stdout));
        let v = json(&out);
        assert_eq!(v["command"], args[0]);
        assert!(v.get("verdict").is_some() && v.get("evidence").is_some());
    }
}

#[test]
fn word_commands_agree() {
    let tm = spec("thue_morse_word.json");
    let word = json(&cantor(&["tm-build", "--spec", &tm, "--n", "4"]));
    assert_eq!(word["verdict"]["letters"], serde_json::json!([0, 1, 1, 0, 1, 0, 0, 1, 1, 0, 0, 1, 0, 1, 1, 0]));
    let letter = json(&cantor(&["tm-letter", "--spec", &tm, "--m", "13"]));
    assert_eq!(letter["verdict"]["letter"], 1);
    let periodic = json(&cantor(&["tm-period", "--spec", &spec("periodic_word.json")]));
    assert_eq!(periodic["verdict"], "FOUND(0)");
    let scan = json(&cantor(&["tm-subseq-scan", "--spec", &tm]));
    assert_eq!(scan["verdict"], "NO_PERIOD_UP_TO(64, 8192)");
}
