//! End-to-end tests of the `hspec` binary: determinism of CSV bodies,
//! exit-code mapping, and the documented anchor values in the psi-norms
//! table.

use std::fs;
use std::path::Path;
use std::process::Command;

fn hspec(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_hspec"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("reading {name}: {e}"))
}

#[test]
fn identical_command_lines_are_byte_identical() {
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    for dir in &dirs {
        let out = hspec(&[
            "supercon",
            "--function",
            "wavepacket",
            "--n",
            "30",
            "--m",
            "2",
            "--out-dir",
            dir.path().to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    for name in [
        "supercon_wavepacket_n30_m2_curve.csv",
        "supercon_wavepacket_n30_m2_marks.csv",
    ] {
        assert_eq!(
            read(dirs[0].path(), name),
            read(dirs[1].path(), name),
            "{name} differs between identical runs"
        );
    }
}

#[test]
fn collocate_outputs_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = hspec(&[
        "collocate",
        "--model",
        "model1",
        "--alpha",
        "0.5",
        "--function",
        "pole2",
        "--n",
        "45",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());

    let manifest: serde_json::Value = serde_json::from_str(&read(
        dir.path(),
        "collocate_model1_pole2_alpha0.5_n45.manifest.json",
    ))
    .unwrap();
    assert_eq!(manifest["parameters"]["n"], 45);
    assert_eq!(manifest["parameters"]["model"], "model1");
    let residual = manifest["results"]["residual"].as_f64().unwrap();
    assert!(residual <= 1e-9, "system residual {residual:e}");
    let ratio = manifest["results"]["marked_to_sup_ratio"].as_f64().unwrap();
    assert!(ratio < 1.0, "node errors should sit below the sup error");

    let marks = read(dir.path(), "collocate_model1_pole2_alpha0.5_n45_marks.csv");
    assert!(marks.lines().next().unwrap() == "point,kind,error");
    assert_eq!(marks.matches(",node,").count(), 46);
    assert_eq!(marks.matches(",tau,").count(), 47);
}

#[test]
fn psi_norms_table_hits_the_tabulated_constants() {
    let dir = tempfile::tempdir().unwrap();
    let out = hspec(&[
        "psi-norms",
        "--n-min",
        "1",
        "--n-max",
        "3",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());

    let mut anchored = 0;
    for line in read(dir.path(), "psi_norms.csv").lines().skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        let (n, k) = (fields[0], fields[1]);
        let scaled: f64 = fields[3].parse().unwrap();
        let target = match (n, k) {
            ("2", "0") => 0.644874576859960,
            ("1", "1") => 1.062251932027197,
            ("2", "2") => 1.579046944365162,
            ("1", "3") => 3.186755796081591,
            _ => continue,
        };
        assert!(
            (scaled - target).abs() <= 1e-9,
            "(n={n}, k={k}): {scaled} vs {target}"
        );
        anchored += 1;
    }
    assert_eq!(anchored, 4);
}

#[test]
fn exit_code_mapping() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().to_str().unwrap();

    // Unknown function id: argument error.
    let out = hspec(&[
        "supercon", "--function", "sinc", "--n", "10", "--m", "1", "--out-dir", out_dir,
    ]);
    assert_eq!(out.status.code(), Some(2));

    // Forbidden alpha for model 1: argument error (precondition).
    let out = hspec(&[
        "collocate", "--model", "model1", "--alpha", "3", "--function", "pole2", "--n", "8",
        "--out-dir", out_dir,
    ]);
    assert_eq!(out.status.code(), Some(2));

    // Alpha essentially on the model-2 spectrum: numerical failure.
    let report = hermspec::colloc::spectrum_check(8).unwrap();
    let nearly_forbidden = format!("{}", report.expected.last().unwrap() + 1e-12);
    let out = hspec(&[
        "collocate", "--model", "model2", "--alpha", &nearly_forbidden, "--function", "gausslog",
        "--n", "8", "--out-dir", out_dir,
    ]);
    assert_eq!(out.status.code(), Some(3));

    // m > 2n + 1 for postprocess: argument error.
    let out = hspec(&[
        "postprocess", "--function", "twinpeaks", "--n", "10", "--m", "22", "--out-dir", out_dir,
    ]);
    assert_eq!(out.status.code(), Some(2));

    // Unknown suite: argument error.
    let out = hspec(&["verify", "--suite", "everything"]);
    assert_eq!(out.status.code(), Some(2));

    // A focused passing suite exits 0 and prints a JSON report.
    let out = hspec(&["verify", "--suite", "post", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value =
        serde_json::from_slice(&out.stdout).expect("machine-readable report");
    assert_eq!(report["passed"], true);
    assert_eq!(report["suite"], "post");
}

#[test]
fn ratio_csv_schema() {
    // Degenerate entries surface as NaN fields (covered at the library
    // level); here the column layout and row count are checked.
    let dir = tempfile::tempdir().unwrap();
    let out = hspec(&[
        "supercon",
        "--function",
        "pole",
        "--ratios",
        "--n-min",
        "12",
        "--n-max",
        "14",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let csv = read(dir.path(), "ratios_pole_n12-14.csv");
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "n,r1,r2,sqrt_n_r1,sqrt_n_r2");
    assert_eq!(lines.count(), 3);
}
