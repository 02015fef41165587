//! End-to-end runs of the binary: catalog fixtures through the certificate
//! pipeline, exit-code contract, and report determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_shimcert")
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(bin())
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(output: &Output) -> Value {
    serde_json::from_slice(&output.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&output.stdout)
        )
    })
}

fn tempdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("shimcert-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write(dir: &Path, name: &str, contents: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn catalog(dir: &Path, name: &str, degree: u32, extra: &[&str]) -> String {
    let file = format!("{name}.json");
    let mut args = vec!["catalog", name, "--degree"];
    let degree_s = degree.to_string();
    args.push(&degree_s);
    args.extend_from_slice(extra);
    args.push("--out");
    args.push(&file);
    let out = run_in(dir, &args);
    assert!(
        out.status.success(),
        "catalog {name}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    file
}

#[test]
fn mastercert_of_bergman_is_2x() {
    let dir = tempdir("mastercert");
    let bergman = catalog(&dir, "bergman", 10, &[]);
    let out = run_in(&dir, &["mastercert", &bergman, "--degree", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    let coeffs = report["result"]["theta"]["coefficients"]
        .as_array()
        .unwrap();
    assert_eq!(coeffs.len(), 1);
    assert_eq!(coeffs[0]["index"], serde_json::json!([1]));
    assert_eq!(coeffs[0]["value"], "2/1");
    assert_eq!(report["tolerances"]["coefficient_recursion"], "exact");
}

#[test]
fn mastercert_of_prop65_has_cubic_term() {
    let dir = tempdir("prop65");
    let prop = catalog(&dir, "prop65", 6, &[]);
    let out = run_in(&dir, &["mastercert", &prop, "--degree", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    let coeffs = report["result"]["theta"]["coefficients"]
        .as_array()
        .unwrap();
    let find = |n: u64| {
        coeffs
            .iter()
            .find(|c| c["index"][0].as_u64() == Some(n))
            .map(|c| c["value"].as_str().unwrap().to_string())
    };
    assert_eq!(find(1).as_deref(), Some("2/1"));
    assert_eq!(find(2), None, "quadratic term vanishes");
    assert_eq!(find(3).as_deref(), Some("10/1"));
}

#[test]
fn mastercert_at_degree_zero_is_zero() {
    let dir = tempdir("deg0");
    let bergman = catalog(&dir, "bergman", 4, &[]);
    let out = run_in(&dir, &["mastercert", &bergman, "--degree", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert!(report["result"]["theta"]["coefficients"]
        .as_array()
        .unwrap()
        .is_empty());
}

#[test]
fn certify_exit_codes_and_failure_witness() {
    let dir = tempdir("certify");
    let bergman = catalog(&dir, "bergman", 10, &[]);
    let geo2 = catalog(&dir, "geometric", 10, &["--rate", "2/1"]);
    let out = run_in(&dir, &["certify", &bergman, &geo2, "--degree", "10"]);
    assert_eq!(out.status.code(), Some(0), "certified pair exits 0");

    let prop = catalog(&dir, "prop65", 8, &[]);
    let geo3 = catalog(&dir, "geometric", 8, &["--rate", "3/1"]);
    let out = run_in(&dir, &["certify", &prop, &geo3, "--degree", "8"]);
    assert_eq!(out.status.code(), Some(1), "refuted pair exits 1");
    let report = stdout_json(&out);
    assert_eq!(report["verdict"], "fail");
    assert_eq!(
        report["result"]["first_failure"]["index"],
        serde_json::json!([3])
    );
    assert_eq!(report["result"]["first_failure"]["value"], "-1/1");

    let szego = catalog(&dir, "szego", 8, &[]);
    let out = run_in(&dir, &["certify", &szego, &szego, "--degree", "8"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "kernel certifies against itself"
    );
}

#[test]
fn certify_usage_errors_exit_2() {
    let dir = tempdir("usage");
    let bergman = catalog(&dir, "bergman", 4, &[]);
    let out = run_in(
        &dir,
        &["certify", &bergman, "missing.json", "--degree", "4"],
    );
    assert_eq!(out.status.code(), Some(2));
    // Degree above the stored truncation is a validation error.
    let geo2 = catalog(&dir, "geometric", 4, &["--rate", "2/1"]);
    let out = run_in(&dir, &["certify", &bergman, &geo2, "--degree", "9"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn psd_rejects_displayed_matrix_with_minor_witness() {
    let dir = tempdir("psd");
    let hmat = write(
        &dir,
        "m.json",
        r#"{"format":"hmat/1","n":4,"entries":[
            {"i":0,"j":0,"re":"1/1","im":"0/1"},
            {"i":1,"j":1,"re":"1/1","im":"0/1"},
            {"i":1,"j":2,"re":"-2/1","im":"0/1"},
            {"i":2,"j":2,"re":"5/1","im":"0/1"},
            {"i":2,"j":3,"re":"-8/1","im":"0/1"},
            {"i":3,"j":3,"re":"33/1","im":"0/1"}]}"#,
    );
    let out = run_in(&dir, &["psd", hmat.file_name().unwrap().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let report = stdout_json(&out);
    assert_eq!(report["result"]["is_psd"], Value::Bool(false));
    assert_eq!(report["result"]["witness_minor_det"], "-31/1");
    assert_eq!(
        report["result"]["witness_minor_indices"],
        serde_json::json!([1, 2, 3])
    );

    let id = write(
        &dir,
        "id.json",
        r#"{"format":"hmat/1","n":2,"entries":[
            {"i":0,"j":0,"re":"1/1","im":"0/1"},
            {"i":1,"j":1,"re":"1/1","im":"0/1"}]}"#,
    );
    let out = run_in(&dir, &["psd", id.file_name().unwrap().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn parrott_forced_case_returns_zero_block() {
    let dir = tempdir("parrott");
    let blocks = write(
        &dir,
        "blocks.json",
        r#"{"a":{"rows":1,"cols":1,"entries":[[1.0,0.0]]},
            "c":{"rows":1,"cols":1,"entries":[[0.0,0.0]]},
            "d":{"rows":1,"cols":1,"entries":[[0.0,0.0]]}}"#,
    );
    let out = run_in(
        &dir,
        &["parrott", blocks.file_name().unwrap().to_str().unwrap()],
    );
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    let b = report["result"]["b"]["entries"][0].as_array().unwrap();
    assert!(b[0].as_f64().unwrap().abs() < 1e-12);
    assert!(report["result"]["completed_norm"].as_f64().unwrap() <= 1.0 + 1e-8);
}

#[test]
fn radius_of_quadratic_certificate() {
    let dir = tempdir("radius");
    let theta = write(
        &dir,
        "theta.json",
        r#"{"format":"kernelspec/1","variables":1,"truncation_degree":6,"kind":"diagonal",
            "coefficients":[{"index":[1],"value":"2/1"}]}"#,
    );
    let out = run_in(
        &dir,
        &["radius", theta.file_name().unwrap().to_str().unwrap()],
    );
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    let r = report["result"]["radius"].as_f64().unwrap();
    assert!((r - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-9);
}

#[test]
fn chain_verdicts_and_suppression() {
    let dir = tempdir("chain");
    let bergman = catalog(&dir, "bergman", 10, &[]);
    let geo2 = catalog(&dir, "geometric", 10, &["--rate", "2/1"]);
    let out = run_in(&dir, &["chain", &geo2, &bergman, "--indices", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["verdict"], "pass");

    let out = run_in(&dir, &["chain", &geo2, &bergman, "--indices", "2,0"]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["verdict"], "suppressed");
    assert!(report["result"]["stages"][1]["quotient_nonnegative"].is_null());

    let out = run_in(&dir, &["chain", &geo2, &bergman, "--indices", "1,1"]);
    assert_eq!(
        out.status.code(),
        Some(2),
        "repeated index is a validation error"
    );
}

#[test]
fn cc_extend_classical_data_central_solution() {
    let dir = tempdir("ccext");
    let szego = catalog(&dir, "szego", 6, &[]);
    let data = write(
        &dir,
        "data.json",
        r#"{"format":"ccdata/1","variables":1,"block_size":1,
            "index_set":[[0],[1]],
            "coefficients":[{"index":[1],"matrix":[[{"re":"1/1","im":"0/1"}]]}]}"#,
    );
    let out = run_in(
        &dir,
        &[
            "cc-extend",
            data.file_name().unwrap().to_str().unwrap(),
            &szego,
            &szego,
            "--index",
            "2",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["verdict"], "extended");
    let c2 = report["result"]["c_d_float"]["entries"][0]
        .as_array()
        .unwrap();
    assert!(
        c2[0].as_f64().unwrap().abs() < 1e-9,
        "central continuation is zero"
    );
    assert_eq!(report["result"]["exact_psd"], Value::Bool(true));

    // Infeasible data: coefficient 1 at index 0 for (Bergman, Szego).
    let bergman = catalog(&dir, "bergman", 6, &[]);
    let bad = write(
        &dir,
        "bad.json",
        r#"{"format":"ccdata/1","variables":1,"block_size":1,
            "index_set":[[0],[1]],
            "coefficients":[{"index":[0],"matrix":[[{"re":"1/1","im":"0/1"}]]}]}"#,
    );
    let out = run_in(
        &dir,
        &[
            "cc-extend",
            bad.file_name().unwrap().to_str().unwrap(),
            &bergman,
            &szego,
            "--index",
            "2",
        ],
    );
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_json(&out)["verdict"], "infeasible");
}

#[test]
fn pick_feasibility_and_extension() {
    let dir = tempdir("pick");
    let problem = write(
        &dir,
        "problem.json",
        r#"{"points": [[[0.1, 0.05]], [[-0.15, 0.12]]],
            "targets": [{"rows":1,"cols":1,"entries":[[0.35,0.1]]},
                        {"rows":1,"cols":1,"entries":[[0.35,0.1]]}],
            "kernel_k": {"catalog":"bergman"},
            "kernel_l": {"catalog":"geometric","rate":"2/1"}}"#,
    );
    let name = problem.file_name().unwrap().to_str().unwrap().to_string();
    let out = run_in(&dir, &["pick", &name]);
    assert_eq!(out.status.code(), Some(0));
    let out = run_in(&dir, &["pick", &name, "--extend", "0.2,-0.1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout_json(&out)["result"]["extension_feasible"],
        Value::Bool(true)
    );

    // Oversized targets make the same extension infeasible.
    let infeasible = write(
        &dir,
        "infeasible.json",
        r#"{"points": [[[0.1, 0.05]], [[-0.15, 0.12]]],
            "targets": [{"rows":1,"cols":1,"entries":[[2.5,0.0]]},
                        {"rows":1,"cols":1,"entries":[[2.5,0.0]]}],
            "kernel_k": {"catalog":"bergman"},
            "kernel_l": {"catalog":"geometric","rate":"2/1"}}"#,
    );
    let out = run_in(
        &dir,
        &[
            "pick",
            infeasible.file_name().unwrap().to_str().unwrap(),
            "--extend",
            "0.2,-0.1",
        ],
    );
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn sample_check_catalog_and_seeded_grid() {
    let dir = tempdir("sample");
    let out = run_in(
        &dir,
        &[
            "sample-check",
            "--kernel",
            "szego",
            "--seed",
            "7",
            "--count",
            "25",
            "--radius",
            "0.5",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["seed"], 7);
    assert_eq!(report["verdict"], "psd");

    let out = run_in(
        &dir,
        &[
            "sample-check",
            "--kernel",
            "h_lambda",
            "--lambda",
            "0.2,0.0",
            "--seed",
            "11",
            "--count",
            "40",
            "--radius",
            "0.33",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn reports_are_deterministic_modulo_wall_time() {
    let dir = tempdir("determinism");
    let prop = catalog(&dir, "prop65", 8, &[]);
    let geo3 = catalog(&dir, "geometric", 8, &["--rate", "3/1"]);
    let strip_wall = |out: &Output| -> String {
        String::from_utf8_lossy(&out.stdout)
            .lines()
            .filter(|line| !line.contains("wall_ms"))
            .collect::<Vec<_>>()
            .join("\n")
    };
    let first = run_in(&dir, &["certify", &prop, &geo3, "--degree", "8"]);
    let second = run_in(&dir, &["certify", &prop, &geo3, "--degree", "8"]);
    assert_eq!(strip_wall(&first), strip_wall(&second));

    let a = run_in(
        &dir,
        &[
            "sample-check",
            "--kernel",
            "bergman",
            "--seed",
            "3",
            "--count",
            "20",
            "--radius",
            "0.4",
        ],
    );
    let b = run_in(
        &dir,
        &[
            "sample-check",
            "--kernel",
            "bergman",
            "--seed",
            "3",
            "--count",
            "20",
            "--radius",
            "0.4",
        ],
    );
    assert_eq!(strip_wall(&a), strip_wall(&b));
}

#[test]
fn catalog_validates_parameters() {
    let dir = tempdir("catalog-errors");
    let out = run_in(&dir, &["catalog", "geometric", "--degree", "4"]);
    assert_eq!(out.status.code(), Some(2), "missing rate");
    let out = run_in(&dir, &["catalog", "nonsense", "--degree", "4"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run_in(
        &dir,
        &[
            "catalog", "s_lambda", "--lambda", "0.2,0.0", "--degree", "4",
        ],
    );
    assert_eq!(
        out.status.code(),
        Some(2),
        "float-only kernels have no series form"
    );
    // Bad format flag.
    let out = run_in(
        &dir,
        &["--format", "yaml", "catalog", "bergman", "--degree", "4"],
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn catalog_polydisc_and_ball_specs() {
    let dir = tempdir("catalog-multi");
    let poly = catalog(&dir, "polydisc", 4, &["--weights", "1,2"]);
    let text = std::fs::read_to_string(dir.join(poly)).unwrap();
    let spec: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(spec["variables"], 2);
    assert_eq!(spec["kind"], "diagonal");

    let ball = catalog(&dir, "ball_power", 4, &["--alpha", "3", "--vars", "2"]);
    let text = std::fs::read_to_string(dir.join(ball)).unwrap();
    let spec: Value = serde_json::from_str(&text).unwrap();
    // Coefficient at (1, 0) is alpha.
    let coeffs = spec["coefficients"].as_array().unwrap();
    let c10 = coeffs
        .iter()
        .find(|c| c["index"] == serde_json::json!([1, 0]))
        .expect("linear coefficient present");
    assert_eq!(c10["value"], "3/1");
}
