use std::process::Command;

use serde_json::Value;
use whitney_cli::run;
use whitney_core::BivarPoly;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("whitney").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn call_json(args: &[&str]) -> (i32, Value) {
    let (code, out, err) = call(args);
    assert!(err.is_empty(), "unexpected stderr: {err}");
    (code, serde_json::from_str(&out).unwrap())
}

fn assert_error_line(err: &str, kind: &str) {
    assert_eq!(err.lines().count(), 1, "{err}");
    let v: Value = serde_json::from_str(err).unwrap();
    assert_eq!(v["error"], kind);
}

#[test]
fn compare_figure_graphs_in_tutte_order() {
    let (code, v) = call_json(&[
        "compare",
        "--g",
        "fixture:figure1_G",
        "--h",
        "fixture:figure1_H",
        "--order",
        "tutte",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "NegativeQuotient");
    let q: BivarPoly = serde_json::from_value(v["quotient"].clone()).unwrap();
    let expected = BivarPoly::parse(
        "4xy^5 + x^3y^2 + 4x^2y^3 + 12xy^4 + 2x^3y + 13x^2y^2 + 24xy^3 - x^3 + x^2y + 9xy^2 \
         - 8y^3 - 4x^2 - 12xy - 19y^2 - 7x - 15y - 4",
    )
    .unwrap();
    assert_eq!(q, expected);
    assert_eq!(v["witness"]["kind"], "negative_coefficient");
}

#[test]
fn compare_exit_code_reflects_expectation() {
    let args = [
        "compare",
        "--g",
        "fixture:figure1_G",
        "--h",
        "fixture:figure1_H",
        "--order",
    ];
    let (code, _, _) = call(&[&args[..], &["whitney", "--expect-dominates"]].concat());
    assert_eq!(code, 0);
    let (code, _, _) = call(&[&args[..], &["tutte", "--expect-dominates"]].concat());
    assert_eq!(code, 1);
}

#[test]
fn reliability_of_triangle() {
    let (code, v) = call_json(&[
        "rel",
        "--graph",
        "fixture:cycle:3",
        "--k",
        "1",
        "--p",
        "1/2",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["reliability"], "1/2");
    let (code, v) = call_json(&[
        "rel",
        "--graph",
        "g6:Bw",
        "--k",
        "1",
        "--p",
        "1/3",
        "--via-tutte",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["reliability"], v["via_tutte"]);
    assert_eq!(v["reliability"], "7/27");
}

#[test]
fn scan_four_four() {
    let (code, v) = call_json(&["scan", "--n", "4", "--m", "4"]);
    assert_eq!(code, 0);
    assert_eq!(v["members"].as_array().unwrap().len(), 2);
    assert_eq!(v["summary"]["whitney_max"], 1);
    assert_eq!(v["theorem2_check"], true);
    let csv = v["csv"].as_str().unwrap();
    assert!(
        csv.starts_with("graph6,strong,zero_element,whitney_max,tutte_max,t_optimal,t1,lambda1\n")
    );
    assert_eq!(csv.lines().count(), 3);
}

#[test]
fn scan_output_is_byte_identical_across_runs_and_workers() {
    let (_, a, _) = call(&["scan", "--n", "6", "--m", "8", "--workers", "1"]);
    let (_, b, _) = call(&["scan", "--n", "6", "--m", "8", "--workers", "4"]);
    let (_, c, _) = call(&["scan", "--n", "6", "--m", "8"]);
    assert_eq!(a, b);
    assert_eq!(a, c);
}

#[test]
fn scan_limit_marks_partial_and_writes_files() {
    let dir = std::env::temp_dir().join(format!("whitney-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let json_path = dir.join("report.json");
    let csv_path = dir.join("report.csv");
    let (code, out, _) = call(&[
        "scan",
        "--n",
        "5",
        "--m",
        "6",
        "--limit",
        "2",
        "--output",
        json_path.to_str().unwrap(),
        "--csv",
        csv_path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    assert_eq!(v["partial"], true);
    assert_eq!(
        std::fs::read_to_string(&csv_path).unwrap().lines().count(),
        3
    );
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn poly_methods_agree() {
    let (_, dc) = call_json(&[
        "poly",
        "--graph",
        "fixture:complete_bipartite:3:3",
        "--method",
        "dc",
    ]);
    let (_, ex) = call_json(&[
        "poly",
        "--graph",
        "fixture:complete_bipartite:3:3",
        "--method",
        "expansion",
    ]);
    assert_eq!(dc["terms"], ex["terms"]);
    let (_, w) = call_json(&["poly", "--graph", "g6:C~", "--whitney"]);
    assert_eq!(w["polynomial"], "whitney");
    assert_eq!(w["text"], "x^3 + y^3 + 6x^2 + 4xy + 6y^2 + 15x + 15y + 16");
}

#[test]
fn counts_report_invariants() {
    let (code, v) = call_json(&["counts", "--graph", "fixture:cycle:4"]);
    assert_eq!(code, 0);
    assert_eq!(v["lambda"], serde_json::json!([2, 3, 4, null]));
    assert_eq!(v["t"], serde_json::json!(["4", "6", "4", "1"]));
    assert_eq!(v["mu"], serde_json::json!(["1", "4", "6", "0", "0"]));
}

#[test]
fn certify_exit_codes() {
    let base = [
        "certify",
        "--n",
        "4",
        "--m",
        "4",
        "--order",
        "whitney",
        "--expect-maximum",
        "--graph",
    ];
    let (code, out, _) = call(&[&base[..], &["fixture:cycle:4"]].concat());
    assert_eq!(code, 0, "{out}");
    let (code, out, _) = call(&[&base[..], &["g6:CN"]].concat());
    assert_eq!(code, 1);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["maximum"], false);
    let (code, _, err) = call(&[&base[..], &["fixture:cycle:5"]].concat());
    assert_eq!(code, 2);
    assert_error_line(&err, "usage");
}

#[test]
fn mc_cross_check() {
    let args = [
        "mc",
        "--graph",
        "fixture:cycle:4",
        "--k",
        "1",
        "--p",
        "2/3",
        "--trials",
        "20000",
        "--seed",
        "5",
    ];
    let (code, v) = call_json(&[&args[..], &["--cross-check"]].concat());
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["exact"], "16/27");
    let (_, plain) = call_json(&args);
    assert_eq!(plain["verdict"], Value::Null);
    assert_eq!(plain["mean"], v["mean"]);
}

#[test]
fn error_contract() {
    let (code, _, err) = call(&[
        "poly",
        "--graph",
        "fixture:complete:9",
        "--method",
        "expansion",
    ]);
    assert_eq!(code, 3);
    assert_error_line(&err, "budget");
    let (code, _, err) = call(&["poly", "--graph", "g6:Z"]);
    assert_eq!(code, 2);
    assert_error_line(&err, "parse");
    let (code, _, err) = call(&["nonsense"]);
    assert_eq!(code, 2);
    assert_error_line(&err, "usage");
    let (code, _, err) = call(&[
        "rel",
        "--graph",
        "fixture:cycle:3",
        "--k",
        "1",
        "--p",
        "3/2",
    ]);
    assert_eq!(code, 2);
    assert_error_line(&err, "invalid_input");
    let (code, _, err) = call(&["scan", "--n", "10", "--m", "12"]);
    assert_eq!(code, 3);
    assert_error_line(&err, "budget");
    let (code, _, err) = call(&[
        "compare",
        "--g",
        "fixture:cycle:4",
        "--h",
        "fixture:cycle:5",
        "--order",
        "whitney",
    ]);
    assert_eq!(code, 2);
    assert_error_line(&err, "dimension_mismatch");
    let (code, out, _) = call(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("scan"));
}

#[test]
fn graph_sources() {
    let dir = std::env::temp_dir().join(format!("whitney-src-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let edges = dir.join("c4.txt");
    std::fs::write(&edges, "# four-cycle\n4 4\n0 1\n1 2\n2 3\n3 0\n").unwrap();
    let g6 = dir.join("c4.g6");
    std::fs::write(&g6, "Cl\n").unwrap();
    let mut seen = Vec::new();
    for src in [
        format!("file:{}", edges.display()),
        edges.display().to_string(),
        format!("file:{}", g6.display()),
        "fixture:cycle:4".to_string(),
    ] {
        let (code, v) = call_json(&["counts", "--graph", &src]);
        assert_eq!(code, 0, "{src}");
        seen.push(v["digest"].clone());
    }
    assert!(seen.windows(2).all(|w| w[0] == w[1]));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn binary_honours_exit_codes_and_worker_env() {
    let bin = env!("CARGO_BIN_EXE_whitney");
    let out = Command::new(bin)
        .args([
            "mc",
            "--graph",
            "fixture:cycle:3",
            "--k",
            "1",
            "--p",
            "1/2",
            "--trials",
            "5000",
        ])
        .env("WHITNEY_WORKERS", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let out = Command::new(bin)
        .args(["scan", "--n", "4"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    let out = Command::new(bin)
        .args(["mc", "--graph", "fixture:cycle:3", "--k", "1", "--p", "1/2"])
        .env("WHITNEY_WORKERS", "many")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
