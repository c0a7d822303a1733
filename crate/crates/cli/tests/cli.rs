use std::path::PathBuf;
use std::process::{Command, Output};

fn root() -> PathBuf {
    PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/../.."))
}

fn data(name: &str) -> String {
    format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cuspcover"))
        .current_dir(root())
        .env_remove("CUSPCOVER_BUDGET")
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn sections_of_the_bitangent_quartic() {
    let o = cli(&["sections", "fixtures/quartic-e6-bitangent.json", "--range", "0..5"]);
    assert_eq!(code(&o), 0);
    let dims: Vec<String> = stdout(&o).lines().skip(1).map(|l| l.split('\t').nth(1).unwrap().to_string()).collect();
    assert_eq!(dims, ["1", "0", "1", "1", "3", "3"]);
}

#[test]
fn sections_as_json() {
    let o = cli(&["--format", "json", "sections", "fixtures/quartic-e6-bitangent.json", "--range", "0..2"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let dims: Vec<u64> = v["rows"].as_array().unwrap().iter().map(|r| r["dim"].as_u64().unwrap()).collect();
    assert_eq!(dims, [1, 0, 1]);
}

#[test]
fn pg_as_tsv() {
    let o = cli(&["--format", "tsv", "pg", "fixtures/quartic-e6-bitangent.json"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).lines().any(|l| l == "pg\t6"));
}

#[test]
fn graph_summary() {
    let o = cli(&["graph", "fixtures/graph-cuspprop.json"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.lines().any(|l| l == "determinant 1"));
    assert!(out.lines().any(|l| l == "b2 10"));
}

#[test]
fn ideal_commands() {
    let gb = cli(&["gb", &data("cusp-terms.json")]);
    assert_eq!(code(&gb), 0);
    assert_eq!(stdout(&gb).lines().collect::<Vec<_>>(), ["x*y", "x^3 - y^2", "y^3"]);

    let nf = cli(&["nf", &data("cusp-terms.json"), "--poly", "x^4"]);
    assert_eq!(stdout(&nf).lines().collect::<Vec<_>>(), ["0", "member true"]);

    let sat = cli(&["saturate", &data("cusp-terms.json"), "--by", "x"]);
    assert_eq!(stdout(&sat).trim(), "1");

    let el = cli(&["eliminate", &data("e6-param.json"), "--vars", "s,t"]);
    assert_eq!(stdout(&el).trim(), "x^4 - 2*x^2*y^2 + y^4 - y^3*z");
}

#[test]
fn verify_all_passes() {
    let o = cli(&["verify-all", "--fixture-dir", "fixtures"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
}

#[test]
fn usage_and_input_errors_exit_2() {
    assert_eq!(code(&cli(&["sections", "no-such-fixture.json"])), 2);
    assert_eq!(code(&cli(&["sections"])), 2);
    let bad = std::env::temp_dir().join("cuspcover-bad-ideal.json");
    std::fs::write(&bad, "{\"vars\":[").unwrap();
    let o = cli(&["gb", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("vars"));
}

#[test]
fn budget_exhaustion_exits_3() {
    assert_eq!(code(&cli(&["--budget", "1", "gb", &data("cusp-terms.json")])), 3);
    let o = Command::new(env!("CARGO_BIN_EXE_cuspcover"))
        .env("CUSPCOVER_BUDGET", "1")
        .args(["gb", &data("cusp-terms.json")])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
}
