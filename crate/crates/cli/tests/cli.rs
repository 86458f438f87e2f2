use std::process::{Command, Output};

use clap::Parser;
use hb_cli::{run, Cli, EXIT_OK, EXIT_PARAMS, EXIT_VERIFY};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_higgsbetti"))
        .args(args)
        .env_remove("HIGGSBETTI_DEFAULT_ORDER")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn lib(args: &[&str]) -> hb_cli::Outcome {
    let mut full = vec!["higgsbetti"];
    full.extend_from_slice(args);
    run(&Cli::try_parse_from(full).unwrap()).unwrap()
}

#[test]
fn maximal_csv_rows() {
    let o = bin(&[
        "compute",
        "--group",
        "u21",
        "--genus",
        "2",
        "--d1",
        "2",
        "--d2",
        "1",
        "--provider",
        "maximal",
        "--order",
        "20",
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(EXIT_OK));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[..6],
        ["degree,betti", "0,1", "1,8", "2,30", "3,72", "4,129"]
    );
    assert_eq!(lines.len(), 22);
}

#[test]
fn relative_json_lists_unknown_coefficients() {
    let o = bin(&[
        "compute",
        "--group",
        "pu21",
        "--genus",
        "2",
        "--d1",
        "0",
        "--d2",
        "0",
        "--provider",
        "relative",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(EXIT_OK));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["mode"], "relative");
    assert_eq!(v["order"], 40);
    let a = v["unknown_coefficients"]["pairs_equivariant"]
        .as_array()
        .unwrap();
    assert_eq!(a.len(), 41);
    assert!(a.iter().any(|c| c != "0"));
}

#[test]
fn relative_csv_has_three_columns() {
    let out = lib(&[
        "--format", "csv", "compute", "--genus", "2", "--d1", "0", "--d2", "0", "--order", "8",
    ]);
    let first = out.output.lines().next().unwrap();
    assert_eq!(first, "degree,known,pairs_equivariant,moduli_min");
    assert_eq!(out.output.lines().count(), 10);
}

#[test]
fn invalid_parameters_exit_two() {
    let o = bin(&[
        "compute", "--group", "su21", "--genus", "2", "--d1", "3", "--d2", "0",
    ]);
    assert_eq!(o.status.code(), Some(EXIT_PARAMS));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("0 <= tau <= 2g - 2 = 2"), "{err}");
}

#[test]
fn maximal_provider_needs_maximal_tau() {
    let o = bin(&[
        "compute",
        "--genus",
        "2",
        "--d1",
        "0",
        "--d2",
        "0",
        "--provider",
        "maximal",
    ]);
    assert_eq!(o.status.code(), Some(EXIT_PARAMS));
    let o = bin(&[
        "compute",
        "--genus",
        "2",
        "--d1",
        "0",
        "--d2",
        "0",
        "--provider",
        "oracle",
    ]);
    assert_eq!(o.status.code(), Some(EXIT_PARAMS));
}

#[test]
fn zero_order_is_rejected() {
    let o = bin(&[
        "compute", "--genus", "2", "--d1", "0", "--d2", "0", "--order", "0",
    ]);
    assert_eq!(o.status.code(), Some(EXIT_PARAMS));
}

#[test]
fn order_comes_from_the_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_higgsbetti"))
        .args([
            "--format", "json", "compute", "--genus", "2", "--d1", "0", "--d2", "0",
        ])
        .env("HIGGSBETTI_DEFAULT_ORDER", "12")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["order"], 12);
}

#[test]
fn strata_table_has_nine_rows() {
    let out = lib(&[
        "strata", "--genus", "2", "--d1", "2", "--d2", "1", "--lmax", "4",
    ]);
    let rows: Vec<&str> = out.output.lines().skip(1).collect();
    assert_eq!(rows.len(), 9);
    let heads: Vec<&str> = rows
        .iter()
        .map(|r| r.split_whitespace().next().unwrap())
        .collect();
    assert_eq!(
        heads,
        ["A@1/2", "B1@1", "C2@1", "B2@2", "B3@3", "C3@3", "B3@4", "C3@4", "C1:"]
    );
    assert!(out.output.contains("C1: none in range"));
}

#[test]
fn strata_json_is_parseable_and_stable() {
    let args = [
        "--format", "json", "strata", "--genus", "2", "--d1", "2", "--d2", "1", "--lmax", "4",
    ];
    let a = lib(&args).output;
    assert_eq!(a, lib(&args).output);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 8);
    assert_eq!(v["empty"], serde_json::json!(["C1"]));
    assert_eq!(v["rows"][0]["ell"], "1/2");
    let again: serde_json::Value =
        serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
    assert_eq!(v, again);
}

#[test]
fn verify_hard_suites_report_pass() {
    for suite in ["maximal", "gothen"] {
        let o = bin(&["verify", "--suite", suite, "--grid", "g=2..3"]);
        assert_eq!(o.status.code(), Some(EXIT_OK), "{suite}");
        assert!(stdout(&o).contains("PASS"));
    }
}

#[test]
fn verify_failure_exits_one_with_counterexample() {
    let out = lib(&["verify", "--suite", "route-u21", "--grid", "g=2"]);
    assert_eq!(out.code, EXIT_VERIFY);
    assert!(out
        .output
        .contains("first counterexample: u21 (g=2, d1=0, d2=0)"));
    assert!(out.output.contains("degree 2, expected 0, got 1"));
}

#[test]
fn diagnostic_suite_never_fails() {
    let out = lib(&["verify", "--suite", "route-su21", "--grid", "g=2"]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.output.contains("[diagnostic]"));
    assert!(out.output.contains("(g=2, d1=2, d2=1) as-printed"));
    let o = bin(&["verify", "--suite", "nope"]);
    assert_eq!(o.status.code(), Some(EXIT_PARAMS));
}

#[test]
fn ingredients_list_the_jacobian() {
    let out = lib(&[
        "--format",
        "csv",
        "ingredients",
        "--genus",
        "2",
        "--order",
        "4",
    ]);
    assert!(out
        .output
        .starts_with("name,degree,coefficient\n\"jacobian\",0,1\n\"jacobian\",1,4\n"));
    assert!(out.output.contains("\"sym(4)\",4,"));
}

#[test]
fn export_provider_round_trips_through_file_provider() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("maximal.json");
    let p = path.to_str().unwrap();
    let o = bin(&[
        "export",
        "--what",
        "provider",
        "--genus",
        "2",
        "--d1",
        "2",
        "--d2",
        "1",
        "--provider",
        "maximal",
        "--order",
        "20",
        "--out",
        p,
    ]);
    assert_eq!(o.status.code(), Some(EXIT_OK));
    let source = format!("file:{p}");
    let via_file = lib(&[
        "--format",
        "csv",
        "compute",
        "--genus",
        "2",
        "--d1",
        "2",
        "--d2",
        "1",
        "--provider",
        &source,
        "--order",
        "20",
    ]);
    let direct = lib(&[
        "--format",
        "csv",
        "compute",
        "--genus",
        "2",
        "--d1",
        "2",
        "--d2",
        "1",
        "--provider",
        "maximal",
        "--order",
        "20",
    ]);
    assert_eq!(via_file.output, direct.output);
    let o = bin(&[
        "export", "--what", "provider", "--genus", "2", "--d1", "0", "--d2", "0",
    ]);
    assert_eq!(o.status.code(), Some(EXIT_PARAMS));
}

#[test]
fn export_result_matches_json_compute() {
    let a = lib(&[
        "export", "--what", "result", "--genus", "2", "--d1", "1", "--d2", "0", "--order", "10",
    ]);
    let b = lib(&[
        "--format", "json", "compute", "--genus", "2", "--d1", "1", "--d2", "0", "--order", "10",
    ]);
    assert_eq!(a.output, b.output);
}

#[test]
fn moduli_flag_rejects_non_coprime() {
    let o = bin(&[
        "compute", "--moduli", "--genus", "2", "--d1", "0", "--d2", "0",
    ]);
    assert_eq!(o.status.code(), Some(EXIT_PARAMS));
    let out = lib(&[
        "compute", "--moduli", "--genus", "2", "--d1", "1", "--d2", "0",
    ]);
    assert!(out.output.contains("route moduli"));
}

#[test]
fn c1_rows_carry_the_exponent_note() {
    let out = lib(&["strata", "--genus", "2", "--d1", "0", "--d2", "0", "--lmax", "2"]);
    assert!(out.output.contains("C1@1") && out.output.contains("C1@2"));
    assert!(out.output.contains("B1: none in range") && out.output.contains("C2: none in range"));
    assert!(out.output.contains("note: C1 series use S^(d2-l-d1+2g-2)X"));
}
