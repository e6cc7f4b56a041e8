use std::process::{Command, Output};

use darcais_core::export::table_from_json;
use darcais_core::{ArithmeticFunction, CoeffTable};

fn darcais(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_darcais"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn coeff_example() {
    let o = darcais(&["coeff", "--g", "sigma:1", "--h", "id", "--n", "2", "--m", "1", "--method", "main-theorem"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "3\n");
}

#[test]
fn all_methods_agree_on_a_coefficient() {
    // A^{sigma,id}_{6,3} = 6! [x^3] P_6; every route must print the same integer.
    let mut seen = Vec::new();
    for method in ["recursion", "lemma", "main-theorem", "thm2", "composition", "series", "hook"] {
        let o = darcais(&["coeff", "--g", "sigma:1", "--h", "id", "--n", "6", "--m", "3", "--method", method]);
        assert_eq!(o.status.code(), Some(0), "{method}");
        seen.push(stdout(&o));
    }
    assert!(seen.windows(2).all(|w| w[0] == w[1]), "{seen:?}");
    let t = CoeffTable::build(&ArithmeticFunction::sigma(1), &ArithmeticFunction::id(), 6).unwrap();
    assert_eq!(seen[0], format!("{}\n", t.a(6, 3).unwrap()));
}

#[test]
fn thm1_route_for_h_one() {
    let a = darcais(&["coeff", "--g", "sigma:3", "--h", "one", "--n", "9", "--m", "4", "--method", "thm1"]);
    let b = darcais(&["coeff", "--g", "sigma:3", "--h", "one", "--n", "9", "--m", "4", "--method", "recursion"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn poly_eval_matches_tau() {
    // P_n^{sigma,id}(-24) is the coefficient of q^n in prod (1-q^k)^24, i.e. tau(n+1).
    let o = darcais(&["poly", "--g", "sigma:1", "--h", "id", "--n", "10", "--eval-at", "-24"]);
    assert_eq!(stdout(&o), "534612\n");
}

#[test]
fn verify_no_formula_passes() {
    let o = darcais(&["verify", "--suite", "no-formula", "--max-n", "10"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).starts_with("no-formula: PASS"));
}

#[test]
fn verify_all_small() {
    let o = darcais(&["verify", "--suite", "all", "--max-n", "5", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 6);
}

#[test]
fn lehmer_json_has_nonzero_values() {
    let o = darcais(&["scan", "--check", "lehmer", "--max-n", "50", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Vec<String> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v.len(), 50);
    assert!(v.iter().all(|s| s != "0"));
    assert_eq!(&v[..3], ["-24", "252", "-1472"]);
}

#[test]
fn export_json_round_trips() {
    let o = darcais(&["export", "--g", "sigma:1", "--h", "sigma:1", "--max-n", "12", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let back = table_from_json(&stdout(&o)).unwrap();
    let direct = CoeffTable::build(&ArithmeticFunction::sigma(1), &ArithmeticFunction::sigma(1), 12).unwrap();
    assert_eq!(back, direct);
}

#[test]
fn export_csv_layout() {
    let o = darcais(&["export", "--g", "sigma:1", "--h", "id", "--max-n", "2", "--format", "csv"]);
    assert_eq!(stdout(&o), "n,0,1,2\n0,1,,\n1,0,1,\n2,0,3,1\n");
}

#[test]
fn output_is_deterministic() {
    let args = ["scan", "--check", "no-logconcave", "--max-n", "40", "--format", "json"];
    let one = Command::new(env!("CARGO_BIN_EXE_darcais"))
        .args(args)
        .env("DARCAIS_THREADS", "1")
        .output()
        .unwrap();
    let many = Command::new(env!("CARGO_BIN_EXE_darcais"))
        .args(args)
        .env("DARCAIS_THREADS", "4")
        .output()
        .unwrap();
    assert_eq!(one.stdout, many.stdout);
    let a = darcais(&["poly", "--g", "sigma:5", "--h", "sigma:1", "--n", "12", "--format", "json"]);
    let b = darcais(&["poly", "--g", "sigma:5", "--h", "sigma:1", "--n", "12", "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn table_descriptor() {
    let path = std::env::temp_dir().join(format!("darcais-cli-table-{}.json", std::process::id()));
    std::fs::write(&path, r#"[1, "1/2", 3, 4]"#).unwrap();
    let desc = format!("table:{}", path.display());
    let o = darcais(&["coeff", "--g", &desc, "--h", "one", "--n", "2", "--m", "1"]);
    let too_far = darcais(&["coeff", "--g", &desc, "--h", "one", "--n", "6", "--m", "1"]);
    std::fs::remove_file(&path).unwrap();
    // A^{g,1}_{2,1} = g(2)
    assert_eq!(stdout(&o), "1/2\n");
    assert_eq!(too_far.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_2() {
    let cases: [&[&str]; 6] = [
        &["coeff", "--g", "bogus", "--h", "id", "--n", "2", "--m", "1"],
        &["coeff", "--g", "sigma", "--h", "id", "--n", "2", "--m", "1"],
        &["coeff", "--g", "one", "--h", "id", "--n", "3", "--m", "1", "--method", "thm1"],
        &["coeff", "--g", "one", "--h", "one", "--n", "3", "--m", "1", "--method", "thm2"],
        &["coeff", "--g", "one", "--h", "id", "--n", "2", "--m", "3"],
        &["coeff", "--g", "one", "--h", "id"],
    ];
    for args in cases {
        let o = darcais(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(o.stdout.is_empty());
    }
    let bad_threads = Command::new(env!("CARGO_BIN_EXE_darcais"))
        .args(["verify", "--suite", "oracles", "--max-n", "3"])
        .env("DARCAIS_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(bad_threads.status.code(), Some(2));
    assert_eq!(darcais(&["verify", "--suite", "nonsense"]).status.code(), Some(2));
}

#[test]
fn failed_check_exits_1_with_report() {
    // delta(2) = A_{2,1}^2 > 0 always, so no counterexample exists below n = 3.
    let o = darcais(&["scan", "--check", "counterexample", "--h", "one", "--max-n", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("none found"));
    let found = darcais(&["scan", "--check", "counterexample", "--h", "one", "--max-n", "50", "--format", "json"]);
    assert_eq!(found.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&found)).unwrap();
    assert_eq!(v["spike"], "8");
    assert_eq!(v["n"], 3);
    assert_eq!(v["delta"], "-4");
}

#[test]
fn delta_scan_for_sigma() {
    let o = darcais(&["scan", "--check", "delta", "--g", "sigma:1", "--h", "id", "--max-n", "30", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let rows: Vec<serde_json::Value> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(rows.len(), 29);
    assert!(rows.iter().all(|r| !r["delta"].as_str().unwrap().starts_with('-')));
}
