use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn deltalin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_deltalin"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

const SL_SOLVE: &[&str] = &[
    "solve", "--p", "5", "--m", "1", "--prec", "12", "--n", "2", "--kind", "sl", "--alpha", "random",
    "--u0", "random-sl", "--seed", "1",
];

#[test]
fn sl_solve_has_unit_determinant() {
    let out = deltalin(SL_SOLVE);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r["residual_valuation"], "inf");
    assert_eq!(r["iterations"], 12);
    let det = &r["prime_integrals"][0];
    assert_eq!(det["name"], "det");
    let mut one = vec![0u64; 12];
    one[0] = 1;
    assert_eq!(det["value"][0], serde_json::json!([one]));
    assert_eq!(det["vanishes"], true);
}

#[test]
fn reports_are_deterministic() {
    let a = deltalin(SL_SOLVE);
    let b = deltalin(SL_SOLVE);
    assert_eq!(a.stdout, b.stdout);
    let mut other = SL_SOLVE.to_vec();
    *other.last_mut().unwrap() = "2";
    assert_ne!(deltalin(&other).stdout, a.stdout);

    let g = ["galois", "--p", "7", "--n", "2", "--kind", "so", "--variant", "so_even", "--u0", "random-so", "--seed", "9"];
    let first = deltalin(&g);
    assert_eq!(code(&first), 0);
    assert_eq!(first.stdout, deltalin(&g).stdout);
    let single = Command::new(env!("CARGO_BIN_EXE_deltalin"))
        .args(g)
        .env("DELTA_LIN_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(first.stdout, single.stdout);
}

fn solve_to(dir: &Path, args: &[&str]) -> std::path::PathBuf {
    let path = dir.join("report.json");
    let mut full = args.to_vec();
    full.extend(["--output", path.to_str().unwrap()]);
    assert_eq!(code(&deltalin(&full)), 0);
    path
}

#[test]
fn solve_then_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        SL_SOLVE.to_vec(),
        vec!["solve", "--p", "7", "--m", "2", "--prec", "8", "--n", "3", "--kind", "so", "--variant", "so_odd", "--u0", "random-so", "--seed", "4"],
        vec!["solve", "--p", "3", "--m", "2", "--n", "2", "--kind", "gl", "--u0", "random", "--seed", "5"],
    ] {
        let path = solve_to(dir.path(), &args);
        let out = deltalin(&["verify", "--input", path.to_str().unwrap()]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
        assert_eq!(report(&out)["residual_valuation"], "inf");
    }

    // separate spec and solution files
    let saved: Value = serde_json::from_str(&std::fs::read_to_string(solve_to(dir.path(), SL_SOLVE)).unwrap()).unwrap();
    let spec = dir.path().join("spec.json");
    let sol = dir.path().join("sol.json");
    std::fs::write(&spec, saved["spec"].to_string()).unwrap();
    std::fs::write(&sol, saved["solution"].to_string()).unwrap();
    let out = deltalin(&["verify", "--spec", spec.to_str().unwrap(), "--solution", sol.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
}

#[test]
fn tampered_solution_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let path = solve_to(dir.path(), SL_SOLVE);
    let mut r: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    // flip a higher digit, keeping the residue class mod p
    let d = &mut r["solution"]["entries"][1][0][4];
    *d = Value::from((d.as_u64().unwrap() + 1) % 5);
    std::fs::write(&path, r.to_string()).unwrap();
    let out = deltalin(&["verify", "--input", path.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let v = report(&out);
    assert_eq!(v["passed"], false);
    assert_ne!(v["residual_valuation"], "inf");
}

#[test]
fn order_two_example_for_both_cube_roots() {
    for zeta in ["2", "4"] {
        let out = deltalin(&["example-3-9", "--p", "7", "--prec", "16", "--zeta", zeta]);
        assert_eq!(code(&out), 0);
        let r = report(&out);
        assert_eq!(r["order"], 2);
        assert_eq!(r["in_Gu"], true);
        assert_eq!(r["in_N_delta"], false);
        assert!(r["notes"].as_array().unwrap().iter().all(|n| n["passed"] == true));
    }
    assert_eq!(code(&deltalin(&["example-3-9", "--p", "13"])), 0);
    assert_eq!(code(&deltalin(&["example-3-9", "--p", "7", "--zeta", "3"])), 2);
}

#[test]
fn bad_parameters_are_usage_errors() {
    for args in [
        vec!["example-3-9", "--p", "5"],
        vec!["solve", "--p", "5", "--n", "5", "--kind", "sl"],
        vec!["solve", "--p", "9"],
        vec!["solve", "--p", "2"],
        vec!["solve", "--kind", "so", "--n", "3", "--variant", "sp"],
        vec!["solve", "--kind", "so", "--n", "2"],
        vec!["solve", "--u0", "random-so"],
        vec!["galois", "--p", "13", "--n", "4", "--cap", "1000"],
        vec!["solve", "--bogus"],
        vec!["verify"],
    ] {
        let out = deltalin(&args);
        assert_eq!(code(&out), 2, "{args:?}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(!err.trim().is_empty() && out.stdout.is_empty(), "{args:?}");
    }
    let out = deltalin(&["solve", "--p", "5", "--n", "5", "--kind", "sl"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("p must not divide n"));
}

#[test]
fn selftest_is_byte_identical_across_runs() {
    let a = deltalin(&["selftest", "--seed", "42"]);
    assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stdout));
    let b = deltalin(&["selftest", "--seed", "42"]);
    assert_eq!(a.stdout, b.stdout);
    let r = report(&a);
    assert_eq!(r["criteria"].as_array().unwrap().len(), 12);
    assert_eq!(r["passed"], true);
}
