use std::f64::consts::PI;
use std::path::Path;
use std::process::{Command, Output};

use casimir_cli::config::RunConfig;
use casimir_cli::units::{C, HBAR};
use serde_json::Value;

const MIRRORS: &str = r#"
gap = 1e-6
[plate1]
epsilon = { kind = "perfect_mirror" }
[plate2]
epsilon = { kind = "perfect_mirror" }
"#;

/// Lorentz dielectrics with their resonance near c/a for a 1 µm gap.
const DIELECTRICS: &str = r#"
gap = 1e-6
[plate1]
temperature = 300.0
epsilon = { kind = "lorentz", params = { strength = 3.0, resonance = 3e14, damping = 1.5e14 } }
[plate2]
temperature = 300.0
epsilon = { kind = "lorentz", params = { strength = 2.0, resonance = 6e14, damping = 0.9e14 } }
[plan]
rel_tol = 1e-3
"#;

fn casimir(dir: &Path, config: &str, args: &[&str]) -> Output {
    let path = dir.join("run.toml");
    std::fs::write(&path, config).unwrap();
    Command::new(env!("CARGO_BIN_EXE_casimir"))
        .args(args)
        .arg("--config")
        .arg(&path)
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn column(v: &Value, name: &str) -> Vec<f64> {
    v["results"].as_array().unwrap().iter().map(|r| r[name].as_f64().unwrap()).collect()
}

#[test]
fn mirror_pressure_in_pascals() {
    let dir = tempfile::tempdir().unwrap();
    let out = casimir(dir.path(), MIRRORS, &["force", "--format", "json"]);
    assert!(out.status.success());
    let p = column(&json(&out), "sigma_xx_Pa")[0];
    let expected = -PI * PI * HBAR * C / (240.0 * 1e-24);
    assert!((p / expected - 1.0).abs() < 1e-5, "{p} vs {expected}");
    assert!((p + 1.3e-3).abs() < 1e-5);
}

#[test]
fn csv_and_json_carry_identical_values() {
    let dir = tempfile::tempdir().unwrap();
    let spectrum = format!(
        "{DIELECTRICS}\n[spectrum]\nchannel = \"sigma1xx\"\nomega = [0.5, 2.0]\nu = [-1.0, 0.0, 1.0]\nv = [0.5, 3.0]\n"
    );
    for (config, command) in [(MIRRORS.to_owned(), "force"), (spectrum, "spectrum")] {
        let csv_out = casimir(dir.path(), &config, &[command, "--format", "csv"]);
        let json_out = casimir(dir.path(), &config, &[command, "--format", "json"]);
        assert!(csv_out.status.success() && json_out.status.success());
        let records = json(&json_out)["results"].as_array().unwrap().clone();
        let mut reader = csv::Reader::from_reader(csv_out.stdout.as_slice());
        let header = reader.headers().unwrap().clone();
        let rows: Vec<_> = reader.records().map(|r| r.unwrap()).collect();
        assert_eq!(rows.len(), records.len());
        for (row, record) in rows.iter().zip(&records) {
            assert_eq!(record.as_object().unwrap().len(), header.len());
            for (name, field) in header.iter().zip(row.iter()) {
                let value = &record[name];
                match (field.parse::<f64>(), value) {
                    (Ok(x), Value::Null) => assert!(x.is_nan(), "{name}"),
                    (Ok(x), Value::Number(n)) => assert_eq!(x, n.as_f64().unwrap(), "{name}"),
                    (_, Value::Bool(b)) => assert_eq!(field, b.to_string()),
                    (_, Value::String(s)) => assert_eq!(field, s),
                    other => panic!("{name}: {other:?}"),
                }
            }
        }
    }
}

#[test]
fn json_inputs_reproduce_the_configuration() {
    let dir = tempfile::tempdir().unwrap();
    let config = format!("{MIRRORS}\n[sweep]\nvariable = \"a\"\ngrid = {{ start = 2e-7, stop = 2e-6, points = 3, log = true }}\n");
    let out = casimir(dir.path(), &config, &["force", "--format", "json", "--rel-tol", "1e-7"]);
    assert!(out.status.success());
    let v = json(&out);
    let echoed: RunConfig = serde_json::from_value(v["inputs"][0].clone()).unwrap();
    let mut expected = RunConfig::from_toml(&config).unwrap();
    expected.plan.rel_tol = Some(1e-7);
    expected.output.format = casimir_cli::config::Format::Json;
    assert_eq!(echoed, expected);
    // the echoed inputs run again to the same results
    let again = casimir(dir.path(), &echoed.to_toml().unwrap(), &["force"]);
    let again = json(&again);
    assert_eq!(again["results"], v["results"]);
    // and the sweep follows the a⁻⁴ law
    let gaps = column(&v, "gap_m");
    for (a, p) in gaps.iter().zip(column(&v, "sigma_xx_Pa")) {
        let expected = -PI * PI * HBAR * C / (240.0 * a.powi(4));
        assert!((p / expected - 1.0).abs() < 1e-6);
    }
}

#[test]
fn equal_temperatures_at_rest_give_no_lateral_stress() {
    let dir = tempfile::tempdir().unwrap();
    let out = casimir(dir.path(), DIELECTRICS, &["force", "--format", "json"]);
    assert!(out.status.success());
    let v = json(&out);
    let (xy, err) = (column(&v, "sigma_xy_Pa")[0], column(&v, "sigma_xy_err_Pa")[0]);
    let xx = column(&v, "sigma_xx_Pa")[0];
    assert!(xx < 0.0);
    assert!(xy.abs() <= err.max(1e-12 * xx.abs()), "{xy} ± {err}");
}

#[test]
fn velocity_sweep_has_the_expected_parity() {
    let dir = tempfile::tempdir().unwrap();
    let config = format!(
        "{}\n[sweep]\nvariable = \"beta\"\ngrid = [-0.3, 0.3]\n",
        DIELECTRICS.replace("temperature = 300.0\nepsilon = { kind = \"lorentz\", params = { strength = 2.0", "temperature = 100.0\nepsilon = { kind = \"lorentz\", params = { strength = 2.0")
    );
    let out = casimir(dir.path(), &config, &["sweep", "--format", "json"]);
    assert!(out.status.success());
    let v = json(&out);
    let (xx, xx_err) = (column(&v, "sigma_xx_Pa"), column(&v, "sigma_xx_err_Pa"));
    let (xy, xy_err) = (column(&v, "sigma_xy_Pa"), column(&v, "sigma_xy_err_Pa"));
    assert_eq!(column(&v, "T2_K"), vec![100.0, 100.0]);
    assert!((xx[0] - xx[1]).abs() <= xx_err[0] + xx_err[1]);
    assert!((xy[0] + xy[1]).abs() <= xy_err[0] + xy_err[1]);
    assert!(xy[1].abs() > 10.0 * xy_err[1]);
    // the hotter plate 1 loses energy into the gap
    assert!(column(&v, "S1x_W_m2").iter().all(|&s| s > 0.0));
}

#[test]
fn spectrum_rows_are_flagged_and_have_the_expected_symmetry() {
    let dir = tempfile::tempdir().unwrap();
    let grid = "omega = [0.7, 1.5]\nu = [-2.0, -0.4, 0.4, 2.0]\nv = [0.3]\n";
    let config = format!("{DIELECTRICS}\n[spectrum]\nchannel = \"sigma1xy\"\n{grid}");
    let v = json(&casimir(dir.path(), &config, &["spectrum", "--format", "json"]));
    let rows = v["results"].as_array().unwrap();
    assert_eq!(rows.len(), 8);
    for pair in rows.chunks(4) {
        // at rest the lateral density is odd in u
        for (a, b) in [(0, 3), (1, 2)] {
            let (x, y) = (pair[a]["value"].as_f64().unwrap(), pair[b]["value"].as_f64().unwrap());
            assert!((x + y).abs() <= 1e-12 * x.abs(), "{x} {y}");
        }
    }
    assert_eq!(rows[1]["region"], "propagating");
    assert_eq!(rows[0]["region"], "evanescent");

    let vacuum = format!(
        "gap = 1e-6\n[plate1]\nepsilon = {{ kind = \"vacuum\" }}\n[plate2]\nepsilon = {{ kind = \"vacuum\" }}\n[spectrum]\nchannel = \"sigma1xx\"\n{grid}"
    );
    let v = json(&casimir(dir.path(), &vacuum, &["spectrum", "--format", "json"]));
    for r in v["results"].as_array().unwrap() {
        assert_eq!(r["value"].as_f64(), Some(0.0), "{r}");
        assert_eq!(r["thermal"].as_f64(), Some(0.0), "{r}");
    }

    // a point on the light line cannot be evaluated and is reported, not fatal
    let seam = format!("{DIELECTRICS}\n[spectrum]\nchannel = \"sigma1xx\"\nomega = [0.5]\nu = [0.0]\nv = [0.5]\n");
    let out = casimir(dir.path(), &seam, &["spectrum", "--format", "json"]);
    assert!(out.status.success());
    let row = &json(&out)["results"][0];
    assert!(row["value"].is_null());
    assert_ne!(row["status"], "ok");
}

#[test]
fn moving_plates_show_anomalous_rows() {
    let dir = tempfile::tempdir().unwrap();
    let config = format!(
        "{}\n[spectrum]\nchannel = \"sigma2xx\"\nomega = [0.2]\nu = [1.5]\nv = [0.2]\n",
        DIELECTRICS.replace("gap = 1e-6", "gap = 1e-6\nbeta = 0.5")
    );
    let v = json(&casimir(dir.path(), &config, &["spectrum", "--format", "json"]));
    let row = &v["results"][0];
    assert_eq!(row["region"], "anomalous");
    assert_eq!(row["status"], "ok");
}

#[test]
fn non_convergence_exits_nonzero_but_writes_results() {
    let dir = tempfile::tempdir().unwrap();
    let config = format!("{DIELECTRICS}\nmax_subdivisions = 1\n").replace("rel_tol = 1e-3", "rel_tol = 1e-10");
    let out_path = dir.path().join("partial.csv");
    let out = casimir(dir.path(), &config, &["force", "--out", out_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let mut reader = csv::Reader::from_path(&out_path).unwrap();
    let header = reader.headers().unwrap().clone();
    let row = reader.records().next().unwrap().unwrap();
    let field = |name: &str| &row[header.iter().position(|h| h == name).unwrap()];
    assert_eq!(field("converged"), "false");
    assert!(field("sigma_xx_Pa").parse::<f64>().unwrap() < 0.0);
}

#[test]
fn invalid_configurations_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let out = casimir(dir.path(), &format!("{MIRRORS}\ncolour = 3\n"), &["force"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("colour"));
    let out = casimir(dir.path(), MIRRORS, &["sweep"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn validate_reports_every_identity() {
    let run = |extra: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_casimir"))
            .args(["validate", "--samples", "2000", "--format", "json"])
            .args(extra)
            .output()
            .unwrap()
    };
    let out = run(&[]);
    assert!(out.status.success());
    let v = json(&out);
    let rows = v["results"].as_array().unwrap();
    assert!(rows.len() >= 10);
    for r in rows {
        assert_eq!(r["passed"], true, "{r}");
        assert!(r["max_deviation"].as_f64().unwrap() <= r["tolerance"].as_f64().unwrap());
    }
    let out = run(&["--perturb"]);
    assert_eq!(out.status.code(), Some(2));
    let failed: Vec<_> = json(&out)["results"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["passed"] == false)
        .map(|r| r["name"].as_str().unwrap().to_owned())
        .collect();
    assert_eq!(failed, vec!["long_identity"]);
}
