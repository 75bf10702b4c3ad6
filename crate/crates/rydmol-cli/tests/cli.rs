//! End-to-end command tests through the real binary.

use std::path::Path;
use std::process::Command;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_rydmol")
}

fn fixture(name: &str) -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

#[test]
fn wavefunction_density_peaks_near_1900_bohr() {
    let tmp = tempfile::tempdir().unwrap();
    let status = Command::new(bin())
        .args(["--n", "35", "--out"])
        .arg(tmp.path())
        .arg("wavefunction")
        .status()
        .unwrap();
    assert!(status.success());
    let table = std::fs::read_to_string(tmp.path().join("wavefunction_n35.csv")).unwrap();
    // row with the largest u^2, i.e. largest |Psi|^2 R^2
    let mut best = (0.0f64, 0.0f64);
    for line in table.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        let r: f64 = cols[0].parse().unwrap();
        let u: f64 = cols[1].parse().unwrap();
        if u * u > best.1 {
            best = (r, u * u);
        }
    }
    assert!(
        (best.0 - 1900.0).abs() < 0.05 * 1900.0,
        "peak at {} bohr",
        best.0
    );
}

#[test]
fn single_n_produces_single_file() {
    let tmp = tempfile::tempdir().unwrap();
    let status = Command::new(bin())
        .args(["--n", "34", "--out"])
        .arg(tmp.path())
        .arg("wavefunction")
        .status()
        .unwrap();
    assert!(status.success());
    let csvs: Vec<_> = std::fs::read_dir(tmp.path())
        .unwrap()
        .filter_map(|e| e.ok())
        .filter(|e| e.file_name().to_string_lossy().starts_with("wavefunction_"))
        .collect();
    assert_eq!(csvs.len(), 1);
}

#[test]
fn malformed_config_exits_nonzero_without_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("bad.cfg");
    std::fs::write(&cfg, "no_such_field = 1\n").unwrap();
    let out_dir = tmp.path().join("never_created");
    let output = Command::new(bin())
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(&out_dir)
        .arg("boundstates")
        .output()
        .unwrap();
    assert!(!output.status.success());
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("no_such_field"), "stderr: {stderr}");
    assert!(!out_dir.exists(), "no partial outputs on failure");
}

#[test]
fn empty_n_list_gives_empty_report_and_success() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("empty.cfg");
    std::fs::write(&cfg, "n_list =\n").unwrap();
    let status = Command::new(bin())
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(tmp.path())
        .arg("boundstates")
        .status()
        .unwrap();
    assert!(status.success());
    let report = std::fs::read_to_string(tmp.path().join("boundstates.txt")).unwrap();
    let data_rows = report.lines().filter(|l| !l.starts_with('#')).count();
    assert_eq!(data_rows, 0, "report: {report}");
}

#[test]
fn repulsive_scattering_length_reports_no_outer_levels() {
    let tmp = tempfile::tempdir().unwrap();
    let status = Command::new(bin())
        .args(["--n", "35", "--a-atom", "10", "--format", "json", "--out"])
        .arg(tmp.path())
        .arg("boundstates")
        .status()
        .unwrap();
    assert!(status.success());
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(tmp.path().join("boundstates.json")).unwrap())
            .unwrap();
    let entry = &json["entries"][0];
    assert_eq!(entry["n"], 35);
    assert_eq!(entry["outer_levels"].as_array().unwrap().len(), 0);
    assert!(entry["outer_well"].is_null());
}

#[test]
fn model_curve_matches_published_35s_value() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("n35.cfg");
    std::fs::write(&cfg, "n_list = 35,36\n").unwrap();
    let status = Command::new(bin())
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(tmp.path())
        .arg("model-curve")
        .status()
        .unwrap();
    assert!(status.success());
    let table = std::fs::read_to_string(tmp.path().join("model_curve.csv")).unwrap();
    let row35 = table.lines().find(|l| l.starts_with("35,")).unwrap();
    let cols: Vec<&str> = row35.split(',').collect();
    let e0: f64 = cols[1].parse().unwrap();
    let e1: f64 = cols[2].parse().unwrap();
    assert!((e0 - (-23.4)).abs() < 2.0, "E(v0) = {e0}");
    assert!((e1 - (-10.6)).abs() < 2.0, "E(v1) = {e1}");
}

#[test]
fn analyze_spectrum_recovers_binding_energy() {
    let tmp = tempfile::tempdir().unwrap();
    let status = Command::new(bin())
        .args(["--format", "json", "--out"])
        .arg(tmp.path())
        .arg("analyze-spectrum")
        .arg(fixture("spectrum_35s.csv"))
        .status()
        .unwrap();
    assert!(status.success());
    let json: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(tmp.path().join("spectrum_analysis.json")).unwrap(),
    )
    .unwrap();
    let e_b = json["e_b_mhz"].as_f64().unwrap();
    assert!((e_b - (-23.4)).abs() < 0.2, "e_b = {e_b}");
    assert_eq!(json["is_molecular"], true);
    assert_eq!(json["n"], 35);
}

#[test]
fn duplicate_n_rows_accepted_in_fit() {
    let tmp = tempfile::tempdir().unwrap();
    let data = tmp.path().join("dups.csv");
    std::fs::write(
        &data,
        "n,v,e_b_mhz,sigma_mhz\n35,0,-23.4,0.5\n35,0,-23.1,0.5\n",
    )
    .unwrap();
    let cfg = tmp.path().join("run.cfg");
    std::fs::write(&cfg, "a_scan_range_bohr = -20.0,-17.0\na_scan_step_bohr = 0.25\n").unwrap();
    let status = Command::new(bin())
        .arg("--config")
        .arg(&cfg)
        .args(["--format", "json", "--out"])
        .arg(tmp.path())
        .arg("fit-scattering-length")
        .arg(&data)
        .status()
        .unwrap();
    assert!(status.success());
    let json: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(tmp.path().join("fit_scattering_length.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(json["n_data"], 2);
}

#[test]
fn manifest_fit_reduces_spectra_to_data() {
    let tmp = tempfile::tempdir().unwrap();
    let manifest = tmp.path().join("manifest.csv");
    std::fs::write(
        &manifest,
        format!(
            "spectrum_path,n,v,window_lo_mhz,window_hi_mhz\n{},35,0,-29.0,-24.0\n",
            fixture("spectrum_35s.csv").display()
        ),
    )
    .unwrap();
    let cfg = tmp.path().join("run.cfg");
    std::fs::write(&cfg, "a_scan_range_bohr = -20.0,-17.0\na_scan_step_bohr = 0.25\n").unwrap();
    let status = Command::new(bin())
        .arg("--config")
        .arg(&cfg)
        .args(["--format", "json", "--out"])
        .arg(tmp.path())
        .arg("fit-scattering-length")
        .arg(&manifest)
        .status()
        .unwrap();
    assert!(status.success());
    let json: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(tmp.path().join("fit_scattering_length.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(json["n_data"], 1);
    let e_obs = json["residuals"][0]["e_obs_mhz"].as_f64().unwrap();
    assert!((e_obs - (-23.4)).abs() < 0.2, "e_obs = {e_obs}");
}

#[test]
fn fit_input_parse_errors_carry_line_numbers() {
    let tmp = tempfile::tempdir().unwrap();
    let data = tmp.path().join("broken.csv");
    std::fs::write(&data, "n,v,e_b_mhz,sigma_mhz\n35,0,-23.4,0.5\n36,0,oops,0.5\n").unwrap();
    let output = Command::new(bin())
        .arg("--out")
        .arg(tmp.path())
        .arg("fit-scattering-length")
        .arg(&data)
        .output()
        .unwrap();
    assert!(!output.status.success());
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains(":3"), "stderr: {stderr}");
    assert!(stderr.contains("oops"), "stderr: {stderr}");
}
