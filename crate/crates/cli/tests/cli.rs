use std::process::{Command, Output};

use cubkit::cubature::near_minimal_rule;
use cubkit::{Sigma, WeightSpec};
use proptest::prelude::*;
use serde_json::Value;

fn cubkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cubkit"))
        .args(args)
        .env_remove("CUBKIT_ORACLE_ORDER")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .skip(1)
        .take_while(|l| !l.is_empty())
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn json(o: &Output) -> Value {
    serde_json::from_str(&stdout(o)).expect("valid JSON")
}

#[test]
fn trivial_rule_as_csv() {
    let o = cubkit(&[
        "rule",
        "--alpha",
        "-0.5",
        "--beta",
        "-0.5",
        "--sigma",
        "-0.5",
        "--m",
        "0",
        "--kind",
        "near-minimal",
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("x,y,weight,j,k,orbit\n"));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 2);
    let parse = |r: &Vec<String>| -> (f64, f64, f64) {
        (
            r[0].parse().unwrap(),
            r[1].parse().unwrap(),
            r[2].parse().unwrap(),
        )
    };
    assert_eq!(parse(&rows[0]), (1.0, 1.0, 0.5));
    assert_eq!(parse(&rows[1]), (-1.0, -1.0, 0.5));
}

#[test]
fn verified_rule_reports_its_degree() {
    let o = cubkit(&[
        "rule",
        "--alpha",
        "0.5",
        "--beta",
        "-0.5",
        "--m",
        "3",
        "--kind",
        "near-minimal",
        "--verify-degree",
        "13",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let doc = json(&o);
    assert!(doc["degree_verified"].as_u64().unwrap() >= 13);
    assert_eq!(doc["degree_claimed"], 13);
    assert_eq!(doc["metadata"]["oracle_order"], 96);
    assert_eq!(doc["schema_version"], "1");
}

#[test]
fn shortfall_exits_with_two() {
    let o = cubkit(&[
        "rule",
        "--alpha",
        "0.5",
        "--beta",
        "0.5",
        "--m",
        "3",
        "--verify-degree",
        "14",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(json(&o)["degree_verified"], 13);
    assert!(stderr(&o).contains("exact through degree 13"));
}

#[test]
fn minimal_rule_has_seven_nodes_at_m_one() {
    let o = cubkit(&[
        "rule", "--alpha", "-0.5", "--beta", "-0.5", "--m", "1", "--kind", "minimal",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let doc = json(&o);
    let nodes = doc["nodes"].as_array().unwrap();
    assert_eq!(nodes.len(), 7);
    assert_eq!(nodes.iter().filter(|n| n["orbit"] == 0).count(), 3);
    assert!(doc["metadata"]["solve_residual"].as_f64().unwrap() < 1e-9);
}

#[test]
fn usage_errors_exit_with_one() {
    let cases: [&[&str]; 5] = [
        &[
            "rule", "--alpha", "0", "--beta", "0", "--sigma", "0.5", "--m", "2", "--kind",
            "minimal",
        ],
        &[
            "rule", "--alpha", "0", "--beta", "0", "--sigma", "0.25", "--m", "2",
        ],
        &["rule", "--alpha", "-1", "--beta", "0", "--m", "2"],
        &["rule", "--alpha", "0"],
        &[
            "interpolate",
            "--alpha",
            "0",
            "--beta",
            "0",
            "--m",
            "2",
            "--function",
            "sinc",
        ],
    ];
    for args in cases {
        let o = cubkit(args);
        assert_eq!(o.status.code(), Some(1), "{args:?}: {}", stderr(&o));
        assert!(o.stdout.is_empty());
    }
    assert_eq!(cubkit(&["--help"]).status.code(), Some(0));
}

#[test]
fn output_is_deterministic() {
    let args = [
        "rule",
        "--alpha",
        "0.3",
        "--beta",
        "1.5",
        "--m",
        "5",
        "--verify-degree",
        "21",
    ];
    let a = cubkit(&args);
    let b = cubkit(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(json(&a)["metadata"].get("generated_at_unix").is_none());
    let mut stamped = args.to_vec();
    stamped.push("--timestamp");
    let c = cubkit(&stamped);
    assert!(json(&c)["metadata"]["generated_at_unix"].as_u64().unwrap() > 1_600_000_000);
}

#[test]
fn json_numbers_are_lossless() {
    let o = cubkit(&["rule", "--alpha", "0.3", "--beta", "-0.7", "--m", "4"]);
    let doc = json(&o);
    let rule = near_minimal_rule(WeightSpec::new(0.3, -0.7, Sigma::MinusHalf).unwrap(), 4).unwrap();
    let nodes = doc["nodes"].as_array().unwrap();
    assert_eq!(nodes.len(), rule.len());
    for (n, r) in nodes.iter().zip(&rule.nodes) {
        assert_eq!(n["x"].as_f64().unwrap().to_bits(), r.x.to_bits());
        assert_eq!(n["y"].as_f64().unwrap().to_bits(), r.y.to_bits());
        assert_eq!(n["weight"].as_f64().unwrap().to_bits(), r.weight.to_bits());
    }
    let csv = cubkit(&[
        "rule", "--alpha", "0.3", "--beta", "-0.7", "--m", "4", "--format", "csv",
    ]);
    for (row, r) in csv_rows(&stdout(&csv)).iter().zip(&rule.nodes) {
        assert_eq!(row[2].parse::<f64>().unwrap().to_bits(), r.weight.to_bits());
    }
}

#[test]
fn out_flag_writes_a_file() {
    let dir = std::env::temp_dir().join(format!("cubkit-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("rule.json");
    let o = cubkit(&[
        "rule",
        "--alpha",
        "0",
        "--beta",
        "0",
        "--m",
        "2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["nodes"].as_array().unwrap().len(), 18);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn oracle_order_from_environment() {
    let run = |flag: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_cubkit"));
        cmd.args([
            "rule",
            "--alpha",
            "0",
            "--beta",
            "0",
            "--m",
            "1",
            "--verify-degree",
            "5",
        ]);
        if let Some(f) = flag {
            cmd.args(["--oracle-order", f]);
        }
        cmd.env("CUBKIT_ORACLE_ORDER", "40").output().unwrap()
    };
    assert_eq!(json(&run(None))["metadata"]["oracle_order"], 40);
    assert_eq!(json(&run(Some("48")))["metadata"]["oracle_order"], 48);
    let bad = Command::new(env!("CARGO_BIN_EXE_cubkit"))
        .args([
            "rule",
            "--alpha",
            "0",
            "--beta",
            "0",
            "--m",
            "1",
            "--verify-degree",
            "5",
        ])
        .env("CUBKIT_ORACLE_ORDER", "many")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
}

fn max_error(o: &Output) -> f64 {
    csv_rows(&stdout(o))
        .iter()
        .map(|r| r[4].parse::<f64>().unwrap().abs())
        .fold(0.0, f64::max)
}

#[test]
fn polynomials_of_degree_2m_are_reproduced() {
    let o = cubkit(&[
        "interpolate",
        "--alpha",
        "0.5",
        "--beta",
        "-0.5",
        "--m",
        "3",
        "--grid",
        "31",
        "--error",
        "--function",
        "poly:1.5@6,0;-2@3,3;0.25@0,5;-1@1,1;3@0,0",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(csv_rows(&stdout(&o)).len() == 31 * 31);
    assert!(max_error(&o) <= 1e-9);
    assert!(stderr(&o).starts_with("max_error="));
}

#[test]
fn constant_function_interpolates_to_one() {
    let o = cubkit(&[
        "interpolate",
        "--alpha",
        "0",
        "--beta",
        "1.5",
        "--m",
        "4",
        "--grid",
        "25",
        "--function",
        "poly:1@0,0",
    ]);
    assert_eq!(o.status.code(), Some(0));
    for r in csv_rows(&stdout(&o)) {
        assert_eq!(r.len(), 3);
        assert!((r[2].parse::<f64>().unwrap() - 1.0).abs() <= 1e-10);
    }
}

#[test]
fn runge_error_decreases_with_m() {
    let err = |m: &str| {
        max_error(&cubkit(&[
            "interpolate",
            "--alpha",
            "-0.5",
            "--beta",
            "-0.5",
            "--m",
            m,
            "--grid",
            "41",
            "--error",
            "--function",
            "runge2d",
        ]))
    };
    let (e4, e8) = (err("4"), err("8"));
    assert!(e8 < e4, "m=4: {e4}, m=8: {e8}");
}

fn fit_value(text: &str, key: &str) -> String {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key},")))
        .unwrap_or_else(|| panic!("no {key} in output"))
        .to_string()
}

#[test]
fn lebesgue_fits() {
    let cheb = cubkit(&[
        "lebesgue", "--alpha", "-0.5", "--beta", "-0.5", "--m-list", "2,4,8,16", "--fit",
    ]);
    assert_eq!(cheb.status.code(), Some(0));
    let text = stdout(&cheb);
    assert_eq!(fit_value(&text, "regime"), "log-squared");
    let lam: Vec<f64> = csv_rows(&text)
        .iter()
        .map(|r| r[2].parse().unwrap())
        .collect();
    assert_eq!(lam.len(), 4);
    assert!(lam.windows(2).all(|w| w[0] < w[1]));

    let half = cubkit(&["lebesgue", "--alpha", "0.5", "--beta", "0.5", "--fit"]);
    let text = stdout(&half);
    assert_eq!(fit_value(&text, "regime"), "power");
    let e: f64 = fit_value(&text, "fitted_exponent").parse().unwrap();
    assert!((e - 2.0).abs() <= 0.4, "exponent {e}");
    let lam: Vec<f64> = csv_rows(&text)
        .iter()
        .map(|r| r[2].parse().unwrap())
        .collect();
    assert!(lam.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn lebesgue_rejects_coarse_grids() {
    let o = cubkit(&["lebesgue", "--alpha", "0", "--beta", "0", "--grid", "16"]);
    assert_eq!(o.status.code(), Some(1));
}

fn region_rows(m: &str, samples: &str) -> Vec<Vec<String>> {
    let o = cubkit(&[
        "region",
        "--alpha",
        "-0.5",
        "--beta",
        "0.5",
        "--m",
        m,
        "--samples",
        samples,
    ]);
    assert_eq!(o.status.code(), Some(0));
    csv_rows(&stdout(&o))
}

#[test]
fn region_export() {
    let rows = region_rows("4", "50");
    assert_eq!(rows.iter().filter(|r| r[0] == "curve").count(), 200);
    let nodes: Vec<_> = rows.iter().filter(|r| r[0] == "node").collect();
    assert_eq!(nodes.len(), 50);
    assert!(nodes.iter().all(|r| r[4] == "inside" || r[4] == "diagonal"));
    let theta1 = |rows: &[Vec<String>]| -> f64 {
        rows.iter().find(|r| r[1] == "theta_1").unwrap()[2]
            .parse()
            .unwrap()
    };
    let t4 = theta1(&rows);
    let t16 = theta1(&region_rows("16", "10"));
    assert!(t16 < t4);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn csv_row_count_matches_node_count(m in 0usize..6, a in -0.9f64..2.0, b in -0.9f64..2.0) {
        let (ms, as_, bs) = (m.to_string(), a.to_string(), b.to_string());
        let o = cubkit(&["rule", "--alpha", &as_, "--beta", &bs, "--m", &ms, "--format", "csv"]);
        prop_assert_eq!(o.status.code(), Some(0));
        prop_assert_eq!(csv_rows(&stdout(&o)).len(), 2 * (m + 1) * (m + 1));
    }
}
