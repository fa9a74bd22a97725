use std::f64::consts::PI;
use std::path::Path;
use std::process::{Command, Output};

use sphere_casimir_cli::{RunConfig, Settings};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sphere-casimir")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn error_record(out: &Output) -> serde_json::Value {
    let line = String::from_utf8_lossy(&out.stderr);
    serde_json::from_str(line.trim()).unwrap_or_else(|e| panic!("stderr is not JSON ({e}): {line}"))
}

/// Header and rows of a CSV body, skipping `#` lines.
fn csv_table(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next().unwrap().split(',').map(str::to_owned).collect();
    let rows = lines.map(|l| l.split(',').map(str::to_owned).collect()).collect();
    (header, rows)
}

fn comment_value(text: &str, key: &str) -> f64 {
    let prefix = format!("# {key} = ");
    text.lines().find_map(|l| l.strip_prefix(&prefix)).unwrap_or_else(|| panic!("no {key}")).parse().unwrap()
}

fn units_row(text: &str, quantity: &str) -> f64 {
    let (_, rows) = csv_table(text);
    rows.iter().find(|r| r[0] == quantity).unwrap()[1].parse().unwrap()
}

#[test]
fn force_table_schema_and_values() {
    let text = stdout(&["force", "--wall-ratio", "2", "--z-min", "2", "--z-max", "16", "--points", "200"]);
    let (header, rows) = csv_table(&text);
    assert_eq!(header, ["z", "V_j", "V_p", "V", "F_j", "F_p", "F"]);
    assert_eq!(rows.len(), 200);
    for row in &rows {
        let v: Vec<f64> = row.iter().map(|c| c.parse().unwrap()).collect();
        assert_eq!(v.len(), 7);
        assert_eq!(v[3], v[1] + v[2]);
        assert_eq!(v[6], v[4] + v[5]);
    }
    // The strongest repulsion on this window sits at z = 2.
    let f0: f64 = rows[0][6].parse().unwrap();
    assert!((f0 - 2.470_457_826_360_629_4e-3).abs() < 1e-12 * f0.abs() + 1e-18);
    assert!(text.starts_with(&format!("# sphere-casimir {}\n", env!("CARGO_PKG_VERSION"))));
}

#[test]
fn reruns_are_byte_identical() {
    let args = ["force", "--wall-ratio", "0.5", "--points", "60", "--reference"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let args = ["equilibria", "--points", "141", "--format", "json"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn csv_and_json_carry_identical_numbers() {
    let args = ["force", "--wall-ratio", "5", "--z-min", "1", "--z-max", "9", "--points", "17", "--reference"];
    let csv = stdout(&args);
    let json = stdout(&[&args[..], &["--format", "json"]].concat());
    let doc: serde_json::Value = serde_json::from_str(&json).unwrap();
    let (header, rows) = csv_table(&csv);
    let columns: Vec<String> = serde_json::from_value(doc["columns"].clone()).unwrap();
    assert_eq!(header, columns);
    assert_eq!(header.last().unwrap(), "F_perfect_wall");
    let json_rows = doc["rows"].as_array().unwrap();
    assert_eq!(json_rows.len(), rows.len());
    for (c, j) in rows.iter().zip(json_rows) {
        for (a, b) in c.iter().zip(j.as_array().unwrap()) {
            assert_eq!(a.parse::<f64>().unwrap().to_bits(), b.as_f64().unwrap().to_bits());
        }
    }
    assert_eq!(doc["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(doc["config"]["wall_ratio"], 5.0);
}

#[test]
fn numbers_have_seventeen_significant_digits() {
    let text = stdout(&["force", "--points", "3", "--z-min", "3", "--z-max", "4"]);
    let (_, rows) = csv_table(&text);
    for cell in rows.iter().flatten() {
        let mantissa = cell.split('e').next().unwrap().trim_start_matches('-');
        assert_eq!(mantissa.chars().filter(char::is_ascii_digit).count(), 17, "{cell}");
    }
}

#[test]
fn echoed_config_round_trips() {
    let args =
        ["force", "--wall-ratio", "perfect", "--gamma-s", "0.05", "--beta", "40", "--points", "4", "--z-max", "5"];
    let text = stdout(&args);
    let echo: String = text
        .lines()
        .skip(2)
        .take_while(|l| l.starts_with("# ") && !l.starts_with("# warning"))
        .map(|l| format!("{}\n", &l[2..]))
        .collect();
    let parsed = Settings::from(RunConfig::parse_toml(&echo).unwrap());
    let direct = Settings::from(RunConfig {
        wall_ratio: Some("perfect".parse().unwrap()),
        gamma_s: Some(0.05),
        beta: Some(40.0),
        points: Some(4),
        z_max: Some(5.0),
        ..RunConfig::default()
    });
    assert_eq!(parsed, direct);
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scenario.toml");
    std::fs::write(&path, "wall_ratio = 2\nz_min = 3.0\nz_max = 6.0\npoints = 4\nformat = \"json\"\n").unwrap();
    let p = path.to_str().unwrap();
    let from_file = stdout(&["force", "--config", p, "--format", "csv"]);
    let from_flags = stdout(&["force", "--wall-ratio", "2", "--z-min", "3", "--z-max", "6", "--points", "4"]);
    assert_eq!(from_file, from_flags);
    let overridden = stdout(&["force", "--config", p, "--points", "5"]);
    let doc: serde_json::Value = serde_json::from_str(&overridden).unwrap();
    assert_eq!(doc["rows"].as_array().unwrap().len(), 5);
}

#[test]
fn out_flag_writes_the_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("curve.csv");
    let args = ["force", "--points", "5"];
    let printed = stdout(&args);
    let out = run(&[&args[..], &["--out", path.to_str().unwrap()]].concat());
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), printed);
}

fn assert_exit(args: &[&str], code: i32, kind: &str) -> serde_json::Value {
    let out = run(args);
    assert_eq!(out.status.code(), Some(code), "{args:?}");
    assert!(out.stdout.is_empty());
    let record = error_record(&out);
    assert_eq!(record["error"], kind);
    assert_eq!(record["exit_code"], code);
    record
}

#[test]
fn configuration_errors_exit_with_2() {
    assert_exit(&["force", "--z-min", "5", "--z-max", "2"], 2, "config");
    assert_exit(&["force", "--points", "0"], 2, "config");
    assert_exit(&["force", "--bogus", "1"], 2, "config");
    assert_exit(&["force", "--wall-ratio", "shiny"], 2, "config");
    assert_exit(&["force", "--wall-ratio", "-1"], 2, "config");
    assert_exit(&["force", "--rel-tol", "0"], 2, "config");
    assert_exit(&["thermal"], 2, "config");
    assert_exit(&["force", "--beta", "-3"], 2, "config");
    assert_exit(&["force", "--wall-ratio", "perfect", "--gamma-w", "0.1"], 2, "config");
    assert_exit(&["force", "--config", "/nonexistent/scenario.toml"], 2, "config");
    assert_exit(&["equilibria", "--barrier-from", "4"], 2, "config");
    assert_exit(&["spectrum", "--omega-max", "0"], 2, "config");

    let dir = tempfile::tempdir().unwrap();
    for (name, body) in [("unknown.toml", "wall_ratio = 2\ncolour = \"red\"\n"), ("nested.toml", "[wall]\nratio = 2\n")]
    {
        let path = dir.path().join(name);
        std::fs::write(&path, body).unwrap();
        assert_exit(&["force", "--config", path.to_str().unwrap()], 2, "config");
    }
}

#[test]
fn domain_errors_exit_with_4() {
    // 12 ω_p² − 9 γ_s² < 0
    assert_exit(&["force", "--gamma-s", "2"], 4, "domain");
    // Finite temperature needs an undamped wall.
    let record = assert_exit(&["thermal", "--beta", "5", "--gamma-w", "0.1", "--points", "3"], 4, "domain");
    assert_eq!(record["failures"].as_array().unwrap().len(), 3);
}

#[test]
fn non_convergence_exits_with_3() {
    assert_exit(
        &["force", "--rel-tol", "1e-16", "--points", "2", "--z-min", "3", "--z-max", "4"],
        3,
        "non_convergence",
    );
}

#[test]
fn thermal_matches_force_at_the_same_beta() {
    let args = ["--beta", "5", "--wall-ratio", "1", "--points", "6", "--z-min", "3", "--z-max", "8"];
    let thermal = stdout(&[&["thermal"][..], &args].concat());
    let force = stdout(&[&["force"][..], &args].concat());
    assert_eq!(csv_table(&thermal), csv_table(&force));
    let cold = stdout(&["force", "--wall-ratio", "1", "--points", "6", "--z-min", "3", "--z-max", "8"]);
    assert_ne!(csv_table(&thermal).1, csv_table(&cold).1);
}

#[test]
fn equilibria_alternate_with_barriers() {
    let text = stdout(&[
        "equilibria",
        "--wall-ratio",
        "2",
        "--points",
        "281",
        "--barrier-from",
        "4",
        "--barrier-to",
        "7",
        "--omega-p-ev",
        "10",
        "--radius-nm",
        "20",
    ]);
    let (header, rows) = csv_table(&text);
    assert_eq!(header, ["z_star", "stability", "stiffness", "barrier_to_next", "barrier_to_next_K"]);
    assert!(rows.len() >= 4);
    for w in rows.windows(2) {
        assert_ne!(w[0][1], w[1][1]);
    }
    let first_stable = rows.iter().find(|r| r[1] == "stable").unwrap();
    let z: f64 = first_stable[0].parse().unwrap();
    assert!((z - 4.0).abs() <= 1.0);
    for r in rows.iter().filter(|r| r[1] == "unstable") {
        assert!(r[3].is_empty() && r[4].is_empty());
    }
    let w = comment_value(&text, "barrier");
    assert!((w - 1.4e-3).abs() <= 0.25 * 1.4e-3, "{w}");
    let kelvin = comment_value(&text, "barrier_K");
    assert!((kelvin - 2200.0).abs() <= 0.05 * 2200.0, "{kelvin}");
    assert!(!text.contains("# warning"));
}

#[test]
fn static_polarizability_has_no_equilibria() {
    let text = stdout(&[
        "equilibria",
        "--wall-ratio",
        "perfect",
        "--polarizability",
        "static",
        "--z-min",
        "1",
        "--z-max",
        "20",
    ]);
    assert!(text.contains("# note: no equilibria\n"));
    assert!(csv_table(&text).1.is_empty());
    let json = stdout(&["equilibria", "--wall-ratio", "perfect", "--polarizability", "static", "--format", "json"]);
    let doc: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(doc["notes"][0], "no equilibria");
    assert!(doc["rows"].as_array().unwrap().is_empty());
}

#[test]
fn coarse_grid_sets_the_warning() {
    let text = stdout(&["equilibria", "--points", "8"]);
    assert!(text.lines().any(|l| l.starts_with("# warning: grid spacing")));
    let json = stdout(&["equilibria", "--points", "8", "--format", "json"]);
    let doc: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert!(!doc["warnings"].as_array().unwrap().is_empty());
}

/// `σ(ω) = (2ω²z² − 1) sin 2ωz + 2ωz cos 2ωz`
fn sigma(w: f64, z: f64) -> f64 {
    let x = w * z;
    (2.0 * x * x - 1.0) * (2.0 * x).sin() + 2.0 * x * (2.0 * x).cos()
}

#[test]
fn spectrum_columns() {
    let text =
        stdout(&["spectrum", "--wall-ratio", "perfect", "--z", "1", "--omega-max", "10", "--omega-points", "41"]);
    let (header, rows) = csv_table(&text);
    assert_eq!(header, ["omega", "sigma", "E2"]);
    assert_eq!(rows.len(), 41);
    for r in &rows {
        let v: Vec<f64> = r.iter().map(|c| c.parse().unwrap()).collect();
        assert!((v[1] - sigma(v[0], 1.0)).abs() <= 1e-12 * (1.0 + v[1].abs()));
        // Perfect wall: ⟨E²⟩_ω = −σ/(8πz³).
        assert!((v[2] + v[1] / (8.0 * PI)).abs() <= 1e-6 * (1.0 + v[1].abs()), "{v:?}");
    }
    let reg = comment_value(&text, "sigma_integral_regularized");
    assert!((reg + 1.5).abs() <= 1e-6 * 1.5, "{reg}");
    assert_eq!(comment_value(&text, "sigma_integral_expected"), -1.5);
}

#[test]
fn transparent_wall_has_no_mode_density() {
    let text = stdout(&["spectrum", "--wall-ratio", "1e-6", "--z", "1", "--omega-points", "21"]);
    let (_, rows) = csv_table(&text);
    for r in &rows {
        let e2: f64 = r[2].parse().unwrap();
        assert!(e2.abs() < 1e-9, "{r:?}");
    }
}

#[test]
fn units_report() {
    let text = stdout(&["units", "--omega-p-ev", "1", "--rho", "1", "--z-um", "1"]);
    assert_eq!(units_row(&text, "levitation_ratio"), 27.0);

    let gold = stdout(&["units", "--omega-p-ev", "10", "--radius-nm", "20", "--wall-ratio", "2"]);
    let t20 = units_row(&gold, "barrier_temperature");
    assert!((t20 - 2200.0).abs() <= 0.05 * 2200.0, "{t20}");
    let small = stdout(&["units", "--omega-p-ev", "10", "--radius-nm", "10", "--wall-ratio", "2"]);
    let t10 = units_row(&small, "barrier_temperature");
    assert!((t10 - 275.0).abs() <= 0.05 * 275.0, "{t10}");
    assert!((t20 / t10 - 8.0).abs() < 1e-12);

    // Lengths and energies convert back to the dimensionless inputs.
    let unit = units_row(&gold, "length_unit");
    assert!((units_row(&gold, "barrier_to_nm") / unit - 7.0).abs() < 1e-14);
    assert!((units_row(&gold, "radius_dimensionless") * unit - 20.0).abs() < 1e-12);
    assert_eq!(units_row(&gold, "energy_unit"), 10.0);
    assert_eq!(units_row(&gold, "dipole_limit"), unit);
}

#[test]
fn units_report_temperature_from_beta() {
    let text = stdout(&["units", "--omega-p-ev", "10", "--beta", "387"]);
    let t = units_row(&text, "temperature");
    assert!((t - 10.0 * 11604.5 / 387.0).abs() < 1e-9);
}

#[test]
fn version_and_help() {
    let out = run(&["--version"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains(env!("CARGO_PKG_VERSION")));
    let out = run(&["force", "--help"]);
    assert!(out.status.success());
    let help = String::from_utf8_lossy(&out.stdout);
    for flag in [
        "--wall-ratio",
        "--gamma-s",
        "--gamma-w",
        "--beta",
        "--z-min",
        "--z-max",
        "--points",
        "--rel-tol",
        "--format",
        "--out",
        "--config",
    ] {
        assert!(help.contains(flag), "{flag}");
    }
    assert!(!Path::new(env!("CARGO_BIN_EXE_sphere-casimir")).as_os_str().is_empty());
}
