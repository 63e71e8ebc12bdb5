use std::process::Command;

use accel_entanglement_cli::{run, EXIT_NUMERIC, EXIT_OK, EXIT_USAGE};

struct Output {
    code: i32,
    stdout: String,
    stderr: String,
}

fn accel_ent(args: &[&str]) -> Output {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("accel-ent").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    Output {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

/// Column names and rows of a CSV table, skipping `#` metadata lines.
fn parse_csv(s: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = s.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(|c| c.parse::<f64>().unwrap()).collect())
        .collect();
    (header, rows)
}

fn cell(csv: &str, column: &str, row: usize) -> f64 {
    let (header, rows) = parse_csv(csv);
    let i = header.iter().position(|h| h == column).unwrap_or_else(|| panic!("no column {column}"));
    rows[row][i]
}

#[test]
fn fermion_ln_at_zero() {
    let o = accel_ent(&["fermion-ln", "--rf", "0", "--scenario", "one"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    assert_eq!(cell(&o.stdout, "LN_total", 0), 1.0);
    assert!((cell(&o.stdout, "LN_sp", 0) - 1.0).abs() < 1e-15);
    assert!(cell(&o.stdout, "LN_sa", 0).abs() < 1e-15);
}

#[test]
fn restricted_scalar_spot_value() {
    let o = accel_ent(&["scalar-ln", "--r", "0.88137", "--pairs", "1", "--scenario", "one"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    assert!((cell(&o.stdout, "LN_sa", 0) - 0.415037).abs() < 1e-5);
}

#[test]
fn json_agrees_with_csv() {
    let args = ["scalar-ln", "--grid", "--points", "7", "--pairs", "2"];
    let csv = accel_ent(&args);
    let mut json_args = args.to_vec();
    json_args.extend(["--format", "json"]);
    let json = accel_ent(&json_args);
    assert_eq!(csv.code, EXIT_OK);
    assert_eq!(json.code, EXIT_OK);
    let (header, rows) = parse_csv(&csv.stdout);
    let v: serde_json::Value = serde_json::from_str(&json.stdout).unwrap();
    let cols: Vec<String> = serde_json::from_value(v["columns"].clone()).unwrap();
    assert_eq!(cols, header);
    let jrows = v["rows"].as_array().unwrap();
    assert_eq!(jrows.len(), rows.len());
    for (jr, cr) in jrows.iter().zip(&rows) {
        for (j, c) in jr.as_array().unwrap().iter().zip(cr) {
            let j = j.as_f64().unwrap();
            assert!((j - c).abs() <= 1e-15 * c.abs().max(1.0), "{j} vs {c}");
        }
    }
}

#[test]
fn output_is_deterministic() {
    let a = accel_ent(&["fermion-ln", "--grid", "--points", "11"]);
    let b = accel_ent(&["fermion-ln", "--grid", "--points", "11"]);
    assert_eq!(a.code, EXIT_OK);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(accel_ent(&["no-such-command"]).code, EXIT_USAGE);
    let o = accel_ent(&["scalar-ln", "--r", "1.5"]);
    assert_eq!(o.code, EXIT_USAGE);
    assert!(o.stderr.contains("error"));
    assert_eq!(accel_ent(&["fermion-ln", "--rf", "-0.1"]).code, EXIT_USAGE);
    assert_eq!(accel_ent(&["figures", "nope"]).code, EXIT_USAGE);
    assert_eq!(accel_ent(&["pairs-scan", "--max-m", "0"]).code, EXIT_USAGE);
}

#[test]
fn numeric_failure_exits_three() {
    let o = accel_ent(&["scalar-ln", "--r", "0.88137", "--eps", "1e-60", "--scenario", "both"]);
    assert_eq!(o.code, EXIT_NUMERIC);
    assert!(o.stderr.contains("exceeds"));
}

#[test]
fn direct_value_wins_over_acceleration_with_warning() {
    let o = accel_ent(&["fermion-ln", "--rf", "0.5", "--mass", "1", "--accel", "2", "--scenario", "one"]);
    assert_eq!(o.code, EXIT_OK);
    assert!(o.stderr.contains("warning"));
    assert_eq!(cell(&o.stdout, "r_f", 0), 0.5);
}

#[test]
fn acceleration_maps_to_squeezing() {
    let o = accel_ent(&["bogoliubov", "--mass", "1", "--accel", "2", "--stats", "scalar"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    let expected = (-std::f64::consts::PI / 4.0).exp().asinh();
    assert!((cell(&o.stdout, "r", 0) - expected).abs() < 1e-15);
}

#[test]
fn spectrum_prints_functional_forms() {
    let o = accel_ent(&["spectrum", "--accel", "1"]);
    assert_eq!(o.code, EXIT_OK);
    assert!(o.stdout.contains("exp(-pi m / a)"));
    assert!(o.stdout.contains("1 / (exp(2 pi omega / a) - 1)"));
}

#[test]
fn figures_writes_the_nine_tables() {
    let dir = tempfile::tempdir().unwrap();
    let o = accel_ent(&["figures", "all", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    let mut names: Vec<String> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    let mut expected: Vec<String> = accel_entanglement::curves::FIGURE_IDS.iter().map(|id| format!("{id}.csv")).collect();
    expected.sort();
    assert_eq!(names, expected);
    for n in &names {
        let text = std::fs::read_to_string(dir.path().join(n)).unwrap();
        let (_, rows) = parse_csv(&text);
        assert!(!rows.is_empty(), "{n} is empty");
    }
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_accel-ent");
    let ok = Command::new(bin).args(["fermion-ln", "--rf", "0.3"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(EXIT_OK));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("LN_sp"));
    let bad = Command::new(bin).args(["schmidt"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(EXIT_USAGE));
}
