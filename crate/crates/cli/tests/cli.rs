use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn curvaspec() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_curvaspec"));
    c.env_remove("CURVASPEC_CONFIG");
    c
}

fn run(args: &[&str]) -> Output {
    curvaspec().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Data rows of a CSV output as string fields, header first.
fn csv_rows(o: &Output) -> Vec<Vec<String>> {
    stdout(o)
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn column(rows: &[Vec<String>], name: &str) -> Vec<String> {
    let idx = rows[0].iter().position(|c| c == name).unwrap();
    rows[1..].iter().map(|r| r[idx].clone()).collect()
}

fn floats(col: Vec<String>) -> Vec<f64> {
    col.iter().map(|s| s.parse().unwrap()).collect()
}

#[test]
fn flat_spectrum_lists_degenerate_levels() {
    let o = run(&["spectrum", "--kappa", "0", "--levels", "3"]);
    assert!(o.status.success());
    let rows = csv_rows(&o);
    assert_eq!(floats(column(&rows, "E_bar")), [1.0, 2.0, 2.0, 3.0, 3.0, 3.0]);
    assert_eq!(column(&rows, "degeneracy"), ["1", "2", "2", "3", "3", "3"]);
    assert!(!stdout(&o).contains('\r'));
}

#[test]
fn hyperbolic_spectrum_is_complete_and_flagged() {
    let o = run(&["spectrum", "--kappa", "-0.5", "--levels", "10"]);
    assert_eq!(o.status.code(), Some(0));
    let mut energies = floats(column(&csv_rows(&o), "E_bar"));
    energies.dedup();
    assert_eq!(energies.len(), 2);
    assert!(stdout(&o).contains("# notice:"));
    let none = run(&["spectrum", "--kappa", "-2", "--levels", "3"]);
    assert_eq!(none.status.code(), Some(0));
    assert_eq!(csv_rows(&none).len(), 1);
}

#[test]
fn json_schema() {
    let o = run(&["spectrum", "--kappa", "1", "--levels", "1", "--format", "json"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["inputs"].is_object());
    assert_eq!(v["meta"]["version"], env!("CARGO_PKG_VERSION"));
    assert!(v["meta"]["tolerances"].is_object());
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert!((rows[0]["E_bar"].as_f64().unwrap() - 1.6180340).abs() < 1e-7);
}

#[test]
fn physical_units_add_a_column() {
    // hbar = m = 1, omega = 2: energies double, curvature is measured in units of omega
    let o = run(&["spectrum", "--kappa", "0", "--levels", "2", "--physical", "1,1,2"]);
    let rows = csv_rows(&o);
    assert_eq!(floats(column(&rows, "E_physical")), [2.0, 4.0, 4.0]);
    assert_eq!(run(&["spectrum", "--physical", "1,0,2"]).status.code(), Some(2));
}

#[test]
fn csv_and_json_carry_the_same_numbers() {
    let args = ["oracle", "--kappa", "0.5", "--beta", "1", "--count", "2"];
    let csv = run(&args);
    let mut json_args = args.to_vec();
    json_args.extend(["--format", "json"]);
    let json: Value = serde_json::from_slice(&run(&json_args).stdout).unwrap();
    let rows = csv_rows(&csv);
    for name in ["E_closed", "E_oracle_h2", "rel_err"] {
        let from_csv = floats(column(&rows, name));
        let from_json: Vec<f64> = json["rows"].as_array().unwrap().iter().map(|r| r[name].as_f64().unwrap()).collect();
        assert_eq!(from_csv, from_json, "{name}");
    }
}

#[test]
fn wavefunction_samples() {
    let o = run(&["wavefunction", "--kappa", "0", "--rmax", "2", "--samples", "4", "--normalized"]);
    assert!(o.status.success());
    let rows = csv_rows(&o);
    let c = 1.0 / std::f64::consts::PI.sqrt();
    for (r, v) in floats(column(&rows, "r")).iter().zip(floats(column(&rows, "R"))) {
        assert!((v - c * (-0.5 * r * r).exp()).abs() < 1e-13);
    }
    assert_eq!(rows.len(), 6);
    for key in ["# E_bar:", "# q:", "# a:", "# c:", "# C:"] {
        assert!(stdout(&o).contains(key), "{key}");
    }

    let b2 = run(&["wavefunction", "--kappa", "1", "--m", "2"]);
    assert_eq!(floats(column(&csv_rows(&b2), "R"))[0], 0.0);
    assert!(stdout(&b2).contains("# b:"));

    let bad = run(&["wavefunction", "--kappa", "-0.5", "--nr", "1", "--m", "0"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("not admissible"));
}

#[test]
fn sweep_examples() {
    let o = run(&["sweep", "--kappa-min", "0", "--kappa-max", "1", "--steps", "4"]);
    let e = floats(column(&csv_rows(&o), "E_bar"));
    assert_eq!(e.len(), 5);
    assert_eq!(e[0], 1.0);
    assert!((e[4] - 1.6180340).abs() < 1e-7);
    assert!(e.windows(2).all(|w| w[0] < w[1]));

    let h = run(&["sweep", "--kappa-min", "-0.5", "--kappa-max", "0", "--steps", "5", "--m", "1"]);
    assert!((floats(column(&csv_rows(&h), "E_bar"))[0] - 1.0615528).abs() < 1e-7);

    let single = run(&["sweep", "--kappa-min", "0.3", "--kappa-max", "1", "--steps", "0"]);
    assert_eq!(floats(column(&csv_rows(&single), "kappa")), [0.3]);

    // n = 3 is bound only for kappa above about -0.28
    let gaps = run(&["sweep", "--kappa-min", "-0.35", "--kappa-max", "-0.25", "--steps", "2", "--nr", "1", "--m", "1"]);
    let rows = csv_rows(&gaps);
    assert_eq!(column(&rows, "admissible"), ["false", "false", "true"]);
    assert_eq!(column(&rows, "E_bar")[0], "");

    assert_eq!(run(&["sweep", "--kappa-min", "1", "--kappa-max", "0"]).status.code(), Some(2));
}

#[test]
fn oracle_matches_closed_form() {
    let o = run(&["oracle", "--kappa", "1", "--beta", "1", "--count", "2"]);
    assert!(o.status.success());
    let rows = csv_rows(&o);
    let closed = floats(column(&rows, "E_closed"));
    assert!((closed[0] - 4.2360680).abs() < 1e-7);
    assert!((closed[1] - 12.472136).abs() < 1e-6);
    assert!(floats(column(&rows, "rel_err")).iter().all(|e| *e < 1e-4));

    let h = run(&["oracle", "--kappa", "-0.5", "--beta", "0", "--count", "3"]);
    assert!(h.status.success());
    assert_eq!(csv_rows(&h).len(), 2);
    assert!(stdout(&h).contains("# oracle_bound_states: 1"));

    // a deliberately coarse grid misses the tolerance
    let coarse = run(&["oracle", "--kappa", "1", "--points", "64", "--tolerance", "1e-8"]);
    assert_eq!(coarse.status.code(), Some(1));
}

#[test]
fn verify_passes_and_catches_the_printed_sign() {
    let o = run(&["verify", "--suite", "symmetry", "--seed", "42"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(column(&csv_rows(&o), "status").iter().all(|s| s == "PASS"));

    let s = run(&["verify", "--suite", "spectrum"]);
    assert_eq!(s.status.code(), Some(0), "{}", stdout(&s));
    assert!(stdout(&s).contains("# comparisons:"));

    let printed = run(&["verify", "--suite", "spectrum", "--energy-branch", "printed"]);
    assert_eq!(printed.status.code(), Some(1));
    let rows = csv_rows(&printed);
    let failing: Vec<String> = rows[1..].iter().filter(|r| r[4] == "FAIL").map(|r| r[1].clone()).collect();
    assert!(failing.contains(&"Euclidean limit".to_string()));

    assert_eq!(run(&["verify", "--suite", "nonsense"]).status.code(), Some(2));
}

#[test]
fn outputs_are_deterministic() {
    let args = ["verify", "--suite", "dynamics", "--seed", "5"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let other = run(&["verify", "--suite", "dynamics", "--seed", "6"]);
    assert_ne!(run(&args).stdout, other.stdout);
}

#[test]
fn config_file_and_precedence() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    writeln!(file, "# defaults for this run\nkappa = 1\nformat = json\nlevels = 1").unwrap();
    let path = file.path().to_str().unwrap();

    let from_file: Value = serde_json::from_slice(&run(&["--config", path, "spectrum"]).stdout).unwrap();
    assert!((from_file["rows"][0]["E_bar"].as_f64().unwrap() - 1.6180340).abs() < 1e-7);

    let flagged = run(&["--config", path, "spectrum", "--kappa", "0", "--format", "csv"]);
    assert_eq!(floats(column(&csv_rows(&flagged), "E_bar")), [1.0]);

    let via_env = curvaspec().env("CURVASPEC_CONFIG", path).args(["spectrum"]).output().unwrap();
    let v: Value = serde_json::from_slice(&via_env.stdout).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 1);

    let mut bad = tempfile::NamedTempFile::new().unwrap();
    writeln!(bad, "curvature = 1").unwrap();
    let o = run(&["--config", bad.path().to_str().unwrap(), "spectrum"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn trajectory_reports_invariants_and_rejects_large_steps() {
    let o = run(&["trajectory", "--kappa", "0.5", "--alpha", "0", "--t-end", "1", "--every", "100"]);
    assert!(o.status.success());
    let rows = csv_rows(&o);
    let h = floats(column(&rows, "H"));
    assert!(h.iter().all(|v| (v - h[0]).abs() < 1e-10));
    assert_eq!(rows.len(), 12);

    let rejected = run(&["trajectory", "--kappa", "0", "--r", "1", "--pphi", "2", "--dt", "0.5"]);
    assert_eq!(rejected.status.code(), Some(3));
    assert_eq!(run(&["trajectory", "--kappa", "-1", "--r", "1.5"]).status.code(), Some(2));
}
