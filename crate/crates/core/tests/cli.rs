use std::process::{Command, Output};

fn squeezesense(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_squeezesense"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn sweep_writes_identical_csv_files() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        let out = squeezesense(&[
            "sweep", "--scheme", "B", "--n", "10", "--twist", "4", "--t-points", "201", "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("scheme,n_spins,twist_times_tau,t_over_tau,sensitivity,method,engine"));
    assert_eq!(lines.next(), Some("B,10,4,0,0,qfi,spin"));
    assert_eq!(text.lines().last(), Some("B,10,4,1,1,qfi,spin"));
    assert_eq!(text.lines().count(), 202);
}

#[test]
fn infinite_n_defaults_to_closed_form() {
    let out = squeezesense(&["sweep", "--scheme", "B", "--n", "inf", "--twist", "1", "--t-points", "3"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\nB,inf,1,0.5,1.35914091423,closed_form,closed_form\n"), "{text}");
}

#[test]
fn json_sweep_output() {
    let out = squeezesense(&["sweep", "--scheme", "Cprime", "--n", "inf", "--twist", "8", "--t-points", "3", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 3);
    assert_eq!(v[1]["sensitivity"], 1.5);
    assert_eq!(v[1]["n_spins"], "inf");
}

#[test]
fn oracle_and_optimize_emit_json() {
    let out = squeezesense(&["oracle", "--scheme", "C", "--twist", "1", "--optimum"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["value"].as_f64().unwrap() - 3.19453).abs() < 1e-5);
    assert_eq!(v["t_opt"], 0.0);

    let out = squeezesense(&["oracle", "--twist", "5", "--ratio"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["ratio"].as_f64().unwrap() - std::f64::consts::E).abs() < 0.01);

    let out = squeezesense(&["oracle", "--moment", "--n", "6", "--phase", "0.3"]);
    assert!(out.status.success());

    let out = squeezesense(&["optimize", "--scheme", "B", "--n", "inf", "--twist", "0.3,2"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["optima"][0]["boundary"], "right_edge");
    assert_eq!(v["optima"][1]["t_opt"], 0.25);

    let out = squeezesense(&["optimize", "--scheme", "B", "--n", "inf", "--twist", "2", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("scheme,n_spins,twist_times_tau,best_sensitivity,t_opt,boundary,engine\n"));
}

#[test]
fn threshold_reports_break_even() {
    let out = squeezesense(&["threshold", "--scheme", "Bprime", "--n", "10", "--lo", "2", "--hi", "30"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["threshold"].as_f64().unwrap() - 11.5).abs() < 0.5);
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| squeezesense(args).status.code().unwrap();
    assert_eq!(code(&["frobnicate"]), 2);
    assert_eq!(code(&["sweep", "--scheme", "Q", "--n", "4", "--twist", "1"]), 2);
    assert_eq!(code(&["sweep", "--scheme", "B", "--n", "4", "--twist", "1", "--engine", "warp"]), 2);
    assert_eq!(code(&["sweep", "--scheme", "B", "--n", "4", "--twist", "1", "--engine", "fock"]), 2);
    assert_eq!(code(&["sweep", "--scheme", "B", "--n", "inf", "--twist", "1", "--engine", "spin"]), 2);
    assert_eq!(code(&["sweep", "--scheme", "B", "--n", "4", "--twist", "-1"]), 2);
    assert_eq!(code(&["threshold", "--scheme", "Cprime", "--n", "inf", "--lo", "5", "--hi", "9"]), 1);
    // Fock truncation overflow is a computation error
    assert_eq!(
        code(&["sweep", "--scheme", "B", "--n", "inf", "--engine", "fock", "--truncation", "20", "--twist", "4", "--t-points", "3"]),
        1
    );
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("missing").join("x.csv");
    assert_eq!(
        code(&["sweep", "--scheme", "A", "--n", "2", "--twist", "0", "--t-points", "3", "--out", bad.to_str().unwrap()]),
        1
    );
    assert_eq!(code(&["--version"]), 0);
}

#[test]
fn validate_passes() {
    let out = squeezesense(&["validate"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(out.status.success(), "{text}");
    assert!(text.lines().filter(|l| l.starts_with("PASS")).count() >= 20);
    assert!(!text.contains("FAIL"));
}
