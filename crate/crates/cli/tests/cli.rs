use std::f64::consts::PI;
use std::process::{Command, Output};

use halfline::Complex64;
use serde_json::Value;

fn halfline(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_halfline"))
        .args(args)
        .env_remove("HALFLINE_QUAD_TOL")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn json(args: &[&str]) -> Value {
    let out = halfline(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_str(&stdout(&out)).expect("valid JSON")
}

/// Data rows of a CSV output, parsed as floats.
fn csv_rows(args: &[&str], header: &str) -> Vec<Vec<f64>> {
    let out = halfline(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(header));
    lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect()
}

fn complex(v: &Value) -> Complex64 {
    Complex64::new(v["re"].as_f64().unwrap(), v["im"].as_f64().unwrap())
}

fn eigenvalues(record: &Value) -> Vec<Complex64> {
    record["results"]["eigenvalues"].as_array().unwrap().iter().map(|e| complex(&e["z"])).collect()
}

#[test]
fn eigenvalue_of_the_attractive_half_order() {
    let record = json(&["eig", "--family", "kappa", "--m", "0.5,0", "--kappa", "-1,0"]);
    let z = eigenvalues(&record);
    assert_eq!(z.len(), 1);
    assert!((z[0] + 1.0).norm() < 1e-12, "{}", z[0]);
    assert_eq!(record["results"]["classification"]["self_adjoint"], Value::Bool(true));
}

#[test]
fn nu_at_euler_constant() {
    let z = eigenvalues(&json(&["eig", "--family", "nu", "--nu", "euler,0"]));
    assert_eq!(z.len(), 1);
    assert!((z[0] + 4.0).norm() < 1e-14, "{}", z[0]);
}

#[test]
fn spiral_eigenvalues() {
    let m = Complex64::new(0.1, 0.5);
    let record = json(&["eig", "--family", "kappa", "--m", "0.1,0.5", "--kappa", "1,0", "--max", "50"]);
    assert!(eigenvalues(&record).len() <= 50);

    let rows = csv_rows(
        &["spiral", "--family", "kappa", "--m", "0.1,0.5", "--kappa", "1,0", "--max", "50"],
        "j,w_re,w_im,z_re,z_im",
    );
    assert!(rows.len() >= 2);
    let ratio = (Complex64::new(0.0, -2.0 * PI) / m).exp();
    assert!(ratio.norm() < 1.0);
    for pair in rows.windows(2) {
        assert_eq!(pair[1][0], pair[0][0] + 1.0);
        let (a, b) = (Complex64::new(pair[0][3], pair[0][4]), Complex64::new(pair[1][3], pair[1][4]));
        assert!(b.norm() < a.norm());
        assert!((b / a - ratio).norm() <= 1e-12 * ratio.norm());
    }
}

#[test]
fn dirichlet_density_is_a_product_of_sines() {
    let k = 1.3;
    let rows = csv_rows(
        &["density", "--m", "0.5", "--k", "1.3", "--x", "0.2:4:5", "--y", "0.2:4:5"],
        "x,y,re,im",
    );
    assert_eq!(rows.len(), 25);
    for r in &rows {
        let want = (k * r[0]).sin() * (k * r[1]).sin() / (PI * k);
        assert!((r[2] - want).abs() < 1e-13 && r[3].abs() < 1e-13, "{r:?}");
        let mirror = rows.iter().find(|s| s[0] == r[1] && s[1] == r[0]).unwrap();
        assert_eq!(mirror[2], r[2]);
        assert_eq!(mirror[3], r[3]);
    }
}

#[test]
fn kappa_zero_matches_the_homogeneous_operator_byte_for_byte() {
    let plain = halfline(&["kernel", "--m", "0.3,0.1", "--k", "1,0.5"]);
    let kappa = halfline(&["kernel", "--family", "kappa", "--m", "0.3,0.1", "--kappa", "0", "--k", "1,0.5"]);
    assert!(plain.status.success() && kappa.status.success());
    assert_eq!(plain.stdout, kappa.stdout);

    let plain = halfline(&["density", "--m", "0.3", "--k", "0.8"]);
    let kappa = halfline(&["density", "--family", "kappa", "--m", "0.3", "--kappa", "0,0", "--k", "0.8"]);
    assert_eq!(plain.stdout, kappa.stdout);
}

#[test]
fn kernel_grid_is_symmetric() {
    let rows = csv_rows(
        &["kernel", "--family", "kappa", "--m", "0.3", "--kappa", "2", "--k", "0.7,0.2", "--x", "0.5:2:4", "--y", "0.5:2:4"],
        "x,y,re,im",
    );
    for r in &rows {
        let mirror = rows.iter().find(|s| s[0] == r[1] && s[1] == r[0]).unwrap();
        assert!((mirror[2] - r[2]).abs() < 1e-14 && (mirror[3] - r[3]).abs() < 1e-14, "{r:?} {mirror:?}");
    }
}

#[test]
fn neumann_dirichlet_wave_operator_samples() {
    let rows = csv_rows(
        &["scatter", "--kind", "wave", "--m", "-0.5", "--m-prime", "0.5", "--t", "-3:3:13"],
        "t,re,im",
    );
    assert_eq!(rows.len(), 13);
    for r in rows {
        let t = r[0];
        assert!((r[1] - (PI * t).tanh()).abs() < 1e-12, "{r:?}");
        assert!((r[2] + 1.0 / (PI * t).cosh()).abs() < 1e-12, "{r:?}");
    }
}

#[test]
fn self_adjoint_scattering_multiplier_is_unimodular() {
    let rows = csv_rows(
        &["scatter", "--family", "kappa", "--m", "0.3", "--kappa", "1.7", "--x", "0.05:20:60"],
        "x,re,im",
    );
    for r in rows {
        assert!((r[1].hypot(r[2]) - 1.0).abs() < 1e-12, "{r:?}");
    }
}

#[test]
fn transform_keeps_its_fixed_point() {
    let rows = csv_rows(&["transform", "--m", "0.5", "--power", "1", "--x", "0.1:5:11"], "x,re,im");
    for r in rows {
        let want = r[0] * (-r[0] * r[0] / 2.0).exp();
        assert!((r[1] - want).abs() < 1e-8 && r[2].abs() < 1e-8, "{r:?}");
    }
}

#[test]
fn check_subset_and_tolerance() {
    let record = json(&["check", "--only", "wronskian"]);
    let checks = record["results"]["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    assert!(checks.iter().all(|c| c["suite"] == "wronskian" && c["passed"] == true));

    let out = halfline(&["check", "--only", "wronskian,xi", "--tol", "1e-3"]);
    assert!(out.status.success());
    let record: Value = serde_json::from_str(&stdout(&out)).unwrap();
    for c in record["results"]["checks"].as_array().unwrap() {
        assert_eq!(c["threshold"].as_f64(), Some(1e-3));
    }

    let out = halfline(&["check", "--only", "wronskian", "--tol", "1e-30"]);
    assert_eq!(out.status.code(), Some(1));
    let record: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(record["results"]["passed"], Value::Bool(false));
}

#[test]
fn default_check_passes() {
    let out = halfline(&["check"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let record: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let suites: Vec<&str> = record["params"]["suites"].as_array().unwrap().iter().map(|s| s.as_str().unwrap()).collect();
    assert_eq!(suites, ["wronskian", "integrals", "xi", "biorthogonality", "oracle"]);
}

#[test]
fn exit_codes() {
    assert_eq!(halfline(&["eig", "--family", "kappa", "--m", "0.5"]).status.code(), Some(2));
    assert_eq!(halfline(&["eig", "--family", "kappa", "--m", "1.5", "--kappa", "1"]).status.code(), Some(2));
    assert_eq!(halfline(&["eig", "--m", "abc"]).status.code(), Some(2));
    assert_eq!(halfline(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(halfline(&["check", "--only", "nothing"]).status.code(), Some(2));
    // Im ν = π/2 is exceptional
    let nu = format!("0.2,{}", PI / 2.0);
    let out = halfline(&["transform", "--family", "nu", "--nu", &nu, "--x", "1"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(out.stdout.is_empty());

    let out = Command::new(env!("CARGO_BIN_EXE_halfline"))
        .args(["transform", "--m", "0.5", "--x", "1"])
        .env("HALFLINE_QUAD_TOL", "-1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn records_round_trip_and_are_stable() {
    let args = ["eig", "--family", "kappa", "--m", "0.3,0.2", "--kappa", "-1,0.5", "--modulus", "1e-3,1e3"];
    let first = halfline(&args);
    let second = halfline(&args);
    assert_eq!(first.stdout, second.stdout);
    let record: Value = serde_json::from_slice(&first.stdout).unwrap();
    assert_eq!(record["schema_version"], "1");
    assert_eq!(record["command"], "eig");
    let params = &record["params"];
    assert_eq!(params["family"], "kappa");
    assert_eq!(complex(&params["m"]), Complex64::new(0.3, 0.2));
    assert_eq!(complex(&params["kappa"]), Complex64::new(-1.0, 0.5));
    assert_eq!(params["modulus"][0].as_f64(), Some(1e-3));
    // re-serializing the parsed record reproduces the keys in the same order
    let keys: Vec<&String> = record.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["command", "params", "results", "schema_version"]);
    for z in eigenvalues(&record) {
        assert!(z.re.is_finite() && z.im.is_finite());
    }
}

#[test]
fn infinite_parameters_are_recorded_symbolically() {
    let record = json(&["eig", "--family", "kappa", "--m", "0.6", "--kappa", "inf"]);
    assert_eq!(record["params"]["kappa"], "inf");
    assert!(eigenvalues(&record).is_empty());
}

#[test]
fn json_tables() {
    let record = json(&["scatter", "--kind", "wave", "--m", "-0.5", "--m-prime", "0.5", "--t", "0", "--json"]);
    assert_eq!(record["results"]["columns"], serde_json::json!(["t", "re", "im"]));
    let row = &record["results"]["rows"][0];
    assert_eq!(row[2].as_f64(), Some(-1.0));
}
