//! End-to-end tests of the `worldtube` binary: the documented examples,
//! exit codes, config layering, determinism, and schema round-trips of
//! every emitted file format.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_worldtube"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf8 stderr")
}

fn scratch_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("worldtube-cli-{}-{name}", std::process::id()));
    fs::create_dir_all(&dir).expect("scratch dir");
    dir
}

/// Parse a CSV payload against its documented header; returns rows of
/// string fields.
fn parse_csv(text: &str, header: &str) -> Vec<Vec<String>> {
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(header), "CSV header mismatch");
    let cols = header.split(',').count();
    let mut rows = Vec::new();
    for line in lines {
        let fields: Vec<String> = line.split(',').map(str::to_string).collect();
        assert_eq!(fields.len(), cols, "row width mismatch: {line}");
        rows.push(fields);
    }
    assert!(!rows.is_empty(), "CSV has no data rows");
    rows
}

/// Parse a JSON report against the versioned schema; returns the value.
fn parse_report(text: &str) -> serde_json::Value {
    let v: serde_json::Value = serde_json::from_str(text).expect("valid JSON report");
    assert_eq!(v["schema_version"], 1);
    assert!(v["config"]["command"].is_string());
    assert!(v["config"]["keys"].is_object());
    for check in v["checks"].as_array().expect("checks array") {
        assert!(check["name"].is_string());
        assert!(check["pass"].is_boolean());
        assert!(check["value"].is_number());
        assert!(check["tolerance"].is_number());
    }
    assert!(v["results"].is_object());
    v
}

fn all_pass(report: &serde_json::Value) -> bool {
    report["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true)
}

#[test]
fn angular_check_example_reports_sphere_mass_pass() {
    let out = run(&["angular-check", "--dim", "6", "--degree", "12"]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let report = parse_report(&stdout(&out));
    assert!(all_pass(&report));
    // 6D solid angle 8π²/3 appears as the sphere mass of both cases
    let omega = 8.0 * std::f64::consts::PI.powi(2) / 3.0;
    assert!((report["results"]["sphere_area"].as_f64().unwrap() - omega).abs() < 1e-12 * omega);
    for case in report["results"]["cases"].as_array().unwrap() {
        let mass = case["sphere_mass"].as_f64().unwrap();
        assert!((mass - omega).abs() < 1e-12 * omega);
    }
    let names: Vec<&str> = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(names.contains(&"mass-rest") && names.contains(&"moment4-boosted"));
}

#[test]
fn flux_example_rest_radiative_payload_is_zero() {
    let out = run(&[
        "flux", "--dim", "6", "--worldline", "rest", "--part", "rad", "--r", "1", "--window",
        "0,1", "--format", "csv",
    ]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let rows = parse_csv(&stdout(&out), "u,component,value,est_error");
    assert_eq!(rows.len(), 8 * 6); // default samples × components
    for row in &rows {
        let value: f64 = row[2].parse().unwrap();
        assert_eq!(value, 0.0, "radiative flux of a static charge must vanish");
    }
}

#[test]
fn evolve_example_emits_monotone_trajectory() {
    let out = run(&[
        "evolve", "--dim", "4", "--method", "reduced", "--force", "const:f1=0.1", "--span",
        "0,10", "--format", "csv",
    ]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let rows = parse_csv(&stdout(&out), "tau,z0,z1,z2,z3,u0,u1,u2,u3,a0,a1,a2,a3,flags");
    let mut prev = f64::NEG_INFINITY;
    for row in &rows {
        let tau: f64 = row[0].parse().unwrap();
        assert!(tau > prev, "τ not strictly increasing");
        prev = tau;
        assert_eq!(row[13], "", "no runaway flag expected");
        for field in &row[1..13] {
            let _: f64 = field.parse().expect("numeric trajectory field");
        }
    }
    assert!((prev - 10.0).abs() < 1e-12, "span end reached");
}

#[test]
fn identical_configs_produce_bitwise_identical_payloads() {
    let args = [
        "flux", "--dim", "4", "--worldline", "circular:omega=1.0,R=0.2", "--part", "rad",
        "--r", "0.4", "--window", "0,0.5", "--samples", "3", "--degree", "8",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout, "JSON payload must be byte-identical");

    let csv_args = [
        "evolve", "--dim", "6", "--worldline", "rest", "--e", "0", "--mu", "0", "--span",
        "0,1", "--step", "0.05", "--format", "csv",
    ];
    let a = run(&csv_args);
    let b = run(&csv_args);
    assert!(a.status.success(), "stderr: {}", stderr(&a));
    assert_eq!(a.stdout, b.stdout, "CSV payload must be byte-identical");
}

#[test]
fn reports_reproduce_from_their_config_echo() {
    let out = run(&[
        "flux", "--dim", "4", "--worldline", "hyperbolic:g=0.5", "--part", "bnd", "--r",
        "0.3", "--window", "0,0.4", "--samples", "2", "--degree", "8",
    ]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let first = stdout(&out);
    let report = parse_report(&first);
    // feeding the echoed keys back as flags must reproduce the payload
    let mut args = vec!["flux".to_string()];
    for (key, value) in report["config"]["keys"].as_object().unwrap() {
        args.push(format!("--{key}"));
        args.push(value.as_str().unwrap().to_string());
    }
    let again = run(&args.iter().map(String::as_str).collect::<Vec<_>>());
    assert!(again.status.success());
    assert_eq!(first, stdout(&again), "echo round-trip changed the payload");
}

#[test]
fn exit_codes_follow_the_documented_contract() {
    // 0: all checks pass
    let out = run(&["angular-check", "--dim", "4"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    // 1: a check fails (zero force cannot close the balance off rest)
    let out = run(&[
        "balance", "--dim", "4", "--worldline", "hyperbolic:g=0.2", "--span", "0,0.5",
        "--step", "0.1", "--force", "zero",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let report = parse_report(&stdout(&out));
    assert!(!all_pass(&report), "payload must record the failing check");
    // 2: usage errors name the offending key
    for (args, key) in [
        (vec!["flux", "--dim", "6", "--worldline", "rest"], "`r`"),
        (vec!["flux", "--dim", "5", "--worldline", "rest", "--r", "1", "--window", "0,1"], "`dim`"),
        (vec!["balance", "--dim", "4", "--worldline", "nope", "--span", "0,1"], "`worldline`"),
        (vec!["balance", "--dim", "4", "--worldline", "rest", "--span", "0,1", "--format", "csv"], "`format`"),
        (vec!["evolve", "--dim", "6", "--method", "direct", "--span", "0,1"], "`method`"),
        (vec!["fit-bound", "--dim", "4", "--worldline", "rest", "--radii", "1,2,3"], "`radii`"),
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "args: {args:?}");
        assert!(stderr(&out).contains(key), "error must name {key}: {}", stderr(&out));
    }
    // 3: numeric failure (field point on the worldline)
    let out = run(&["field-eval", "--dim", "4", "--worldline", "rest", "--point", "0,0,0,0"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("numeric failure"));
}

#[test]
fn config_file_layers_sections_and_rejects_unknown_keys() {
    let dir = scratch_dir("config");
    let path = dir.join("experiment.conf");
    fs::write(
        &path,
        "# shared\ndim = 4\ne = 1.5\n[flux]\nworldline = rest\nr = 0.7\nwindow = 0,0.2\n\
         samples = 1\ndegree = 6\n[evolve]\nspan = 0,1\n",
    )
    .unwrap();
    let out = run(&["flux", "--config", path.to_str().unwrap(), "--samples", "2"]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let report = parse_report(&stdout(&out));
    let keys = report["config"]["keys"].as_object().unwrap();
    assert_eq!(keys["dim"], "4"); // shared block
    assert_eq!(keys["r"], "0.7"); // [flux] section
    assert_eq!(keys["samples"], "2"); // flag wins over section
    // a typo inside the command's own section is fatal
    fs::write(&path, "[flux]\nworldline = rest\nr = 0.7\nwindw = 0,1\n").unwrap();
    let out = run(&["flux", "--dim", "4", "--config", path.to_str().unwrap(), "--window", "0,0.2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("windw"));
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn emitted_files_round_trip_and_leave_no_temp_behind() {
    let dir = scratch_dir("files");

    // field-eval CSV
    let csv_path = dir.join("field.csv");
    let out = run(&[
        "field-eval", "--dim", "6", "--worldline", "hyperbolic:g=0.3", "--point",
        "2,0.5,0.1,0,0,0", "--format", "csv", "--out", csv_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let rows = parse_csv(&fs::read_to_string(&csv_path).unwrap(), "quantity,component,value");
    assert!(rows.iter().any(|r| r[0] == "stress_rad"));
    assert!(rows.iter().any(|r| r[0] == "potential"));

    // fit-bound CSV: u column carries the power of r
    let fit_path = dir.join("fit.csv");
    let out = run(&[
        "fit-bound", "--dim", "4", "--worldline", "circular:omega=1.0,R=0.2", "--radii",
        "0.02,0.05,0.1,0.2", "--degree", "8", "--format", "csv", "--out",
        fit_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let rows = parse_csv(&fs::read_to_string(&fit_path).unwrap(), "u,component,value,est_error");
    assert!(rows.iter().all(|r| r[0] == "-1"), "4D bound content is a pure 1/r law");

    // balance JSON report written to disk parses against the schema
    let json_path = dir.join("balance.json");
    let out = run(&[
        "balance", "--dim", "6", "--worldline", "hyperbolic:g=0.2", "--mu", "0.1", "--span",
        "0,1", "--step", "0.25", "--out", json_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let report = parse_report(&fs::read_to_string(&json_path).unwrap());
    assert!(all_pass(&report), "closing force must close the balance");
    assert_eq!(report["results"]["samples"].as_array().unwrap().len(), 5);

    // atomic writes leave no .tmp siblings
    for entry in fs::read_dir(&dir).unwrap() {
        let name = entry.unwrap().file_name();
        assert!(
            !name.to_string_lossy().ends_with(".tmp"),
            "temp file left behind: {name:?}"
        );
    }
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn evolve_runaway_truncation_flags_last_row_and_fails_check() {
    // direct 4D with a seeded acceleration and no force: the self-force
    // runaway grows until truncation (z⁰ = τ, z¹ = 5e-7 τ² seeds
    // u = (1,0,0,0), a = (0,1e-6,0,0))
    let out = run(&[
        "evolve", "--dim", "4", "--worldline", "polynomial-test:c1_0=1,c2_1=0.0000005",
        "--method", "direct", "--span", "0,25", "--step", "0.01", "--format", "csv",
    ]);
    assert_eq!(out.status.code(), Some(1), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    let rows = parse_csv(&text, "tau,z0,z1,z2,z3,u0,u1,u2,u3,a0,a1,a2,a3,flags");
    assert_eq!(rows.last().unwrap()[13], "runaway");
    assert!(stderr(&out).contains("completed-span"));
    let last_tau: f64 = rows.last().unwrap()[0].parse().unwrap();
    assert!(last_tau < 25.0, "runaway must truncate before the span end");
}

#[test]
fn flux_json_rows_match_documented_fields() {
    let out = run(&[
        "flux", "--dim", "4", "--worldline", "rest", "--part", "total", "--quantity",
        "angular", "--r", "0.5", "--window", "0,0.2", "--samples", "2", "--degree", "6",
    ]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let report = parse_report(&stdout(&out));
    let rows = report["results"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2 * 6); // samples × bivector components in 4D
    for row in rows {
        assert!(row["u"].is_number());
        let comp = row["component"].as_str().unwrap();
        assert!(comp.starts_with('m') && comp.len() == 3);
        assert!(row["value"].is_number());
        assert!(row["est_error"].is_number());
    }
}

#[test]
fn out_path_without_file_name_is_rejected() {
    let out = bin().args(["angular-check", "--dim", "4", "--out", "/"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(Path::new("/.tmp").exists() == false);
}
