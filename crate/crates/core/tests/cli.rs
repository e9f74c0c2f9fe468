use std::process::Command;

use maxwell_bloch::cli::{csv, run, EXIT_FAILURE, EXIT_OK, EXIT_USAGE};
use maxwell_bloch::system::{conserved, State5};
use serde_json::Value;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["maxwell-bloch"];
    argv.extend_from_slice(args);
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn last_json(stdout: &str) -> Value {
    serde_json::from_str(stdout.lines().last().unwrap()).unwrap()
}

#[test]
fn simulate_equilibrium_gives_constant_rows() {
    let (code, out, _) = call(&["simulate", "--x1", "0", "--y1", "0", "--x2", "0", "--y2", "0", "--z", "-1", "--t-end", "10"]);
    assert_eq!(code, EXIT_OK);
    let rows = csv::parse(&out).unwrap();
    assert!(rows.len() > 1);
    let first = rows[0].state;
    assert!(rows.iter().all(|r| r.state == first));
    assert_eq!(rows.last().unwrap().t, 10.0);
    let drift = last_json(&out);
    for key in ["max_abs_dH", "max_abs_dI", "max_abs_dC"] {
        assert_eq!(drift[key].as_f64(), Some(0.0), "{key}");
    }
}

#[test]
fn simulate_homoclinic_start_has_small_drift() {
    let (code, out, _) = call(&[
        "simulate", "--x1", "2", "--y1", "0", "--x2", "0", "--y2", "0", "--z", "-1", "--method", "rk45", "--tol", "1e-10",
        "--t-end", "3",
    ]);
    assert_eq!(code, EXIT_OK);
    let drift = last_json(&out);
    for key in ["max_abs_dH", "max_abs_dI", "max_abs_dC"] {
        assert!(drift[key].as_f64().unwrap() < 1e-9, "{key}: {}", drift[key]);
    }
}

#[test]
fn simulate_csv_file_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("traj.csv");
    let (code, out, _) = call(&[
        "simulate", "--x1", "0.3", "--y1", "-0.7", "--x2", "1.1", "--y2", "0.2", "--z", "0.5", "--method", "rk4", "--dt", "0.01",
        "--t-end", "1", "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK);
    // Only the drift report goes to stdout when --out is given.
    assert_eq!(out.lines().count(), 1);
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("t,x1,y1,x2,y2,z,H,I,C\n"));
    let rows = csv::parse(&text).unwrap();
    assert_eq!(rows.len(), 101);
    assert_eq!(rows[0].state, State5::new(0.3, -0.7, 1.1, 0.2, 0.5));
    for r in &rows {
        let q = conserved(&r.state);
        assert_eq!([q.h, q.i, q.c], r.hic);
    }
    // Re-emitting the parsed rows reproduces the file byte for byte.
    let mut again = Vec::new();
    csv::write_header(&mut again).unwrap();
    for r in &rows {
        csv::write_row(&mut again, r.t, &r.state).unwrap();
    }
    assert_eq!(String::from_utf8(again).unwrap(), text);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["simulate", "--x1", "0", "--y1", "0", "--x2", "0", "--y2", "0", "--z", "0", "--dt=-1"],
        vec!["simulate", "--x1", "0", "--y1", "0", "--x2", "0", "--y2", "0", "--z", "0", "--bogus", "1"],
        vec!["simulate", "--x1", "nan", "--y1", "0", "--x2", "0", "--y2", "0", "--z", "0"],
        vec!["classify"],
        vec!["classify", "--c", "inf"],
        vec!["homoclinic", "--c", "-1"],
        vec!["homoclinic", "--c", "1", "--sign", "x"],
        vec!["homoclinic", "--c", "1", "--t-min", "1", "--t-max", "0"],
        vec!["periodic", "--x1", "1", "--y1", "0", "--x2", "1"],
        vec!["periodic", "--x1", "1", "--y1", "1", "--x2", "0"],
        vec!["rank", "--point", "1,2,3"],
        vec!["invariant-probe", "--m1", "1,1,0"],
        vec!["verify", "--level", "medium"],
        vec!["no-such-command"],
    ] {
        let (code, _, err) = call(&args);
        assert_eq!(code, EXIT_USAGE, "{args:?}: {err}");
        assert!(!err.is_empty());
    }
}

#[test]
fn help_exits_0() {
    let (code, out, _) = call(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("simulate"));
}

#[test]
fn classify_reports_all_three_regimes() {
    for (c, kind, stable) in [("1", "focus-focus", "unstable"), ("-1", "center-center", "stable"), ("0", "degenerate", "stable")] {
        let (code, out, _) = call(&["classify", "--c", c]);
        assert_eq!(code, EXIT_OK);
        let v = last_json(&out);
        assert_eq!(v["kind"], kind);
        assert_eq!(v["stable"], stable);
        assert_eq!(v["roots"].as_array().unwrap().len(), 4);
        assert_eq!(v.get("certificate").is_some(), c == "0");
    }
    let (_, out, _) = call(&["classify", "--c", "0"]);
    assert_eq!(last_json(&out)["certificate"]["unique_solution"], true);
}

#[test]
fn classify_key_order_is_stable() {
    let (_, out, _) = call(&["classify", "--c", "1"]);
    let keys: Vec<&str> = ["\"c\"", "\"kind\"", "\"alpha\"", "\"roots\"", "\"A\"", "\"B\"", "\"discriminant\"", "\"stable\""]
        .into_iter()
        .collect();
    let positions: Vec<usize> = keys.iter().map(|k| out.find(k).unwrap()).collect();
    assert!(positions.windows(2).all(|w| w[0] < w[1]), "{out}");
}

#[test]
fn homoclinic_orbit_passes_its_residual_check() {
    let (code, out, _) = call(&["homoclinic", "--c", "1", "--theta0", "0", "--sign", "+"]);
    assert_eq!(code, EXIT_OK);
    let rows = csv::parse(&out).unwrap();
    assert_eq!(rows[0].t, -10.0);
    let summary = last_json(&out);
    assert_eq!(summary["passed"], true);
    assert_eq!(summary["samples"].as_u64().unwrap() as usize, rows.len());

    let (code, out, _) = call(&["homoclinic", "--c", "2", "--theta0", "1", "--sign", "-", "--t-min", "-1", "--t-max", "1", "--dt", "0.5"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(csv::parse(&out).unwrap().len(), 5);
}

#[test]
fn periodic_orbit_has_constant_z() {
    let (code, out, _) = call(&["periodic", "--x1", "1", "--y1", "1", "--x2", "1"]);
    assert_eq!(code, EXIT_OK);
    let rows = csv::parse(&out).unwrap();
    assert!(rows.iter().all(|r| r.state.z == -1.0));
    assert_eq!(last_json(&out)["passed"], true);
}

#[test]
fn rank_examples() {
    let (code, out, _) = call(&["rank", "--point", "1,1,1,-1,-1"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(last_json(&out)["rank"], 2);
    let (_, out, _) = call(&["rank", "--point", "1,2,3,4,5"]);
    assert_eq!(last_json(&out)["rank"], 3);
}

#[test]
fn probe_counts_six_punctures() {
    for name in ["invariant-probe", "probe"] {
        let (code, out, _) = call(&[name, "--m1", "0,1,1", "--t-end", "20"]);
        assert_eq!(code, EXIT_OK);
        let v = last_json(&out);
        assert_eq!(v["puncture_count"], 6);
        assert_eq!(v["predicted_punctures"], 6);
        assert!(v["max_distance_to_union"].as_f64().unwrap() < 1e-6);
    }
}

#[test]
fn verify_is_deterministic_and_passes() {
    let (code, a, _) = call(&["verify", "--seed", "42", "--level", "quick"]);
    assert_eq!(code, EXIT_OK);
    let (_, b, _) = call(&["verify", "--seed", "42", "--level", "quick"]);
    assert_eq!(a, b);
    let v = last_json(&a);
    assert_eq!(v["passed"], true);
    let names: Vec<&str> = v["suites"].as_array().unwrap().iter().map(|s| s["name"].as_str().unwrap()).collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
}

#[test]
fn integration_failure_exits_1_with_partial_output() {
    // x1·z overflows f64 on the first stage from here.
    let (code, out, err) = call(&[
        "simulate", "--x1", "1e200", "--y1", "1e200", "--x2", "0", "--y2", "0", "--z", "1e200", "--t-end", "10",
    ]);
    assert_eq!(code, EXIT_FAILURE, "{out}\n{err}");
    let record = last_json(&out);
    assert!(record["error"].is_string());
    assert!(!csv::parse(&out).unwrap().is_empty());
}

#[test]
fn binary_matches_library_entry_point() {
    let output = Command::new(env!("CARGO_BIN_EXE_maxwell-bloch"))
        .args(["rank", "--point", "1,2,3,4,5"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0));
    let (_, lib_out, _) = call(&["rank", "--point", "1,2,3,4,5"]);
    assert_eq!(String::from_utf8(output.stdout).unwrap(), lib_out);

    let output = Command::new(env!("CARGO_BIN_EXE_maxwell-bloch")).args(["homoclinic", "--c", "-1"]).output().unwrap();
    assert_eq!(output.status.code(), Some(2));
}
