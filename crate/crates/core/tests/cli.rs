mod common;

use std::process::Command;

use common::*;
use tracecode::GeneratorMatrix;

#[test]
fn reports_validate_against_schema() {
    let cases: [(&str, &[&str]); 10] = [
        ("spectrum", &["spectrum", "-p", "3", "-m", "1"]),
        (
            "spectrum",
            &["spectrum", "-p", "5", "-m", "2", "--no-timing"],
        ),
        ("verify", &["verify", "-p", "3", "-m", "2"]),
        ("verify", &["verify", "-p", "5", "-m", "1"]),
        ("bounds", &["bounds", "-p", "3", "-m", "1"]),
        ("bounds", &["bounds", "-p", "5", "-m", "4"]),
        ("dual", &["dual", "-p", "3", "-m", "1"]),
        ("minimal", &["minimal", "-p", "3", "-m", "1"]),
        ("sss", &["sss", "-p", "3", "-m", "2"]),
        ("gauss", &["gauss", "-p", "11", "-m", "2"]),
    ];
    for (kind, args) in cases {
        let out = run(args);
        let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        if let Err(errors) = validate(kind, &v) {
            panic!("{args:?} does not match the {kind} schema: {errors:#?}");
        }
    }
}

#[test]
fn schema_rejects_malformed_reports() {
    let mut v = run_json(&["spectrum", "-p", "3", "-m", "1"]);
    v["N"] = serde_json::json!(108);
    assert!(validate("spectrum", &v).is_err());
    let mut v = run_json(&["gauss", "-p", "3", "-m", "1"]);
    v["closed_form"] = serde_json::json!("i*sqrt(3)");
    assert!(validate("gauss", &v).is_err());
}

#[test]
fn spectrum_csv_layout() {
    let out = run(&["spectrum", "-p", "7", "-m", "1", "--format", "csv"]);
    assert!(out.status.success());
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "weight,frequency\n0,1\n3528,2394\n4116,6\n"
    );
}

#[test]
fn by_class_spectrum_beyond_exhaustive_budget() {
    let v = run_json(&["spectrum", "-p", "5", "-m", "2"]);
    assert_eq!(v["mode"], "by_class");
    assert_eq!(v["regime"], "three_weight");
    assert_eq!(v["prediction_matches"], true);
    let total: u64 = weights_of(&v).values().sum();
    assert_eq!(total, 5u64.pow(8));
}

#[test]
fn forced_exhaustive_over_budget_is_an_error() {
    let out = run(&["spectrum", "-p", "5", "-m", "2", "--mode", "exhaustive"]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("budget"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn parameter_errors_exit_nonzero() {
    for args in [
        &["spectrum", "-p", "9", "-m", "1"][..],
        &["spectrum", "-p", "2", "-m", "1"],
        &["spectrum", "-p", "3", "-m", "0"],
        &["gauss", "-p", "3", "-m", "2", "--modulus", "1,0,1,0"],
        &["gauss", "-p", "3", "-m", "2", "--modulus", "2,0,1"],
    ] {
        let out = run(args);
        assert!(!out.status.success(), "{args:?} should fail");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn custom_modulus_gives_same_spectrum() {
    // t^2 + 2t + 2 is irreducible over F_3.
    let a = run_json(&[
        "spectrum",
        "-p",
        "3",
        "-m",
        "2",
        "--modulus",
        "2,2,1",
        "--no-timing",
    ]);
    let b = run_json(&["spectrum", "-p", "3", "-m", "2", "--no-timing"]);
    assert_eq!(a["modulus"], serde_json::json!([2, 2, 1]));
    assert_eq!(b["modulus"], serde_json::json!([1, 0, 1]));
    assert_eq!(a["weights"], b["weights"]);
}

#[test]
fn verify_exit_code_follows_claims() {
    let ok = run(&["verify", "-p", "3", "-m", "2"]);
    assert!(ok.status.success());
    let v: serde_json::Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(v["all_passed"], true);
    let claims = v["claims"].as_array().unwrap();
    let verdict = |id: &str| {
        claims.iter().find(|c| c["id"] == id).unwrap()["verdict"]
            .as_str()
            .unwrap()
            .to_string()
    };
    assert_eq!(verdict("griesmer_optimal"), "N/A");
    assert_eq!(verdict("spectrum"), "PASS");

    // At m = 1 the uv multiples have full support, so not every codeword
    // is minimal and verify reports that claim as failed.
    let bad = run(&["verify", "-p", "3", "-m", "1"]);
    assert_eq!(bad.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&bad.stdout).unwrap();
    assert_eq!(v["all_passed"], false);
    let failed: Vec<&str> = v["claims"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["verdict"] == "FAIL")
        .map(|c| c["id"].as_str().unwrap())
        .collect();
    assert_eq!(failed, ["minimality"]);
}

#[test]
fn verify_unsupported_regime() {
    let out = run(&["verify", "-p", "5", "-m", "1", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("claim,predicted,observed,verdict\n"));
    assert!(text.contains("spectrum,unsupported regime,-,N/A"));
    let v = run_json(&["verify", "-p", "5", "-m", "1"]);
    assert_eq!(v["regime"], "unsupported");
    assert_eq!(weights_of(&v).get(&800), Some(&620));
}

#[test]
fn out_flag_and_genmatrix_format() {
    let dir = std::env::temp_dir().join(format!("tracecode-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("g.txt");
    let out = run(&[
        "genmatrix",
        "-p",
        "3",
        "-m",
        "2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 8);
    assert!(lines
        .iter()
        .all(|l| l.len() == 11664 && l.bytes().all(|b| b"012".contains(&b))));
    let g = GeneratorMatrix::from_text(3, &text).unwrap();
    assert_eq!(g.rank(), 8);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn workers_env_var_and_seed() {
    let with_env = Command::new(tracecode_bin())
        .args(["verify", "-p", "7", "-m", "1", "--seed", "9"])
        .env("TRACECODE_WORKERS", "3")
        .output()
        .unwrap();
    let with_flag = run(&[
        "verify",
        "-p",
        "7",
        "-m",
        "1",
        "--seed",
        "9",
        "--workers",
        "1",
    ]);
    assert_eq!(with_env.stdout, with_flag.stdout);
    let bad = Command::new(tracecode_bin())
        .args(["gauss", "-p", "3", "-m", "1"])
        .env("TRACECODE_WORKERS", "many")
        .output()
        .unwrap();
    assert!(!bad.status.success());
}

#[test]
fn cli_examples() {
    let b = run_json(&["bounds", "-p", "3", "-m", "1"]);
    assert_eq!(b["griesmer_sum_d"], "107");
    assert_eq!(b["griesmer_sum_d_plus_1"], "110");
    assert_eq!(b["optimal"], true);
    let d = run_json(&["dual", "-p", "3", "-m", "1"]);
    assert_eq!(d["gray_class"], 2);
    assert_eq!(d["ring_witness_weight"], 2);
    let g = run_json(&["gauss", "-p", "3", "-m", "2"]);
    assert_eq!(g["closed_form"], "3+0i");
    assert_eq!(g["numeric"], "3+0i");
    assert_eq!(g["match"], true);
    let s = run_json(&["sss", "-p", "3", "-m", "2"]);
    assert_eq!(s["verdict"], "dictatorial");
}

#[test]
fn table_format_is_plain_text() {
    let out = run(&["verify", "-p", "3", "-m", "2", "--format", "table"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("all applicable claims pass"));
    assert!(serde_json::from_str::<serde_json::Value>(&text).is_err());
}
