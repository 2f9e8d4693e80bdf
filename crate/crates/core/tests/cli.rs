//! End-to-end tests of the `vdw` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn vdw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vdw"))
        .args(args)
        .output()
        .expect("run vdw")
}

fn config(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("configs")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("run.toml");
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn sweep_writes_identical_csv_to_file_and_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("sweep.csv");
    let cfg = config("gold_plates.toml");
    let printed = vdw(&["sweep", "--config", &cfg]);
    let filed = vdw(&["sweep", "--config", &cfg, "--csv", csv.to_str().unwrap()]);
    assert!(printed.status.success() && filed.status.success());
    let file = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(file, stdout(&printed));
    let lines: Vec<&str> = file.lines().collect();
    assert_eq!(lines[0], lifshitz::cli::SWEEP_HEADER);
    assert_eq!(lines.len(), 1 + 8);
    let z: Vec<f64> = lines[1..]
        .iter()
        .map(|l| l.split(',').next().unwrap().parse().unwrap())
        .collect();
    assert!((z[0] - 1e-8).abs() < 1e-20 && (z[7] - 2e-7).abs() < 1e-18);
    assert!(z.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn pressure_reports_every_field() {
    let out = vdw(&[
        "pressure",
        "--config",
        &config("coated_substrate.toml"),
        "--layer",
        "3",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    for key in [
        "layer = 3",
        "thickness_m = ",
        "pressure_Pa = ",
        "n_terms = ",
        "truncation_error_Pa = ",
        "quadrature_error_Pa = ",
    ] {
        assert!(text.contains(key), "missing {key} in\n{text}");
    }
}

#[test]
fn spectrum_with_n_max_has_that_many_rows() {
    let out = vdw(&[
        "spectrum",
        "--config",
        &config("gold_plates.toml"),
        "--n-max",
        "9",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 10);
    assert!(rows[0].starts_with("0,0.0"));
}

#[test]
fn material_table_starts_at_static_limit() {
    let out = vdw(&[
        "material",
        "--config",
        &config("gold_plates.toml"),
        "--name",
        "gold",
        "--points",
        "5",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], lifshitz::cli::MATERIAL_HEADER);
    assert_eq!(lines.len(), 1 + 1 + 5);
    assert!(lines[1].contains(",inf,"));

    let vac = vdw(&[
        "material",
        "--config",
        &config("gold_plates.toml"),
        "--name",
        "vacuum",
        "--points",
        "2",
    ]);
    assert!(stdout(&vac)
        .lines()
        .skip(1)
        .all(|l| l.contains(",1.0000000000000000e0,")));
}

#[test]
fn bad_input_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.toml");
    let cases: Vec<Vec<String>> = vec![
        vec![
            "pressure".into(),
            "--config".into(),
            missing.to_string_lossy().into_owned(),
        ],
        vec![
            "pressure".into(),
            "--config".into(),
            config("gold_plates.toml"),
            "--layer".into(),
            "7".into(),
        ],
        vec![
            "material".into(),
            "--config".into(),
            config("gold_plates.toml"),
            "--name".into(),
            "unobtainium".into(),
        ],
        vec!["verify".into(), "--suite".into(), "nonsense".into()],
        vec!["frobnicate".into()],
    ];
    for args in cases {
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        let out = vdw(&refs);
        assert_eq!(
            out.status.code(),
            Some(1),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn invalid_config_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"
temperature = 300.0
[stack]
left = "vacuum"
right = "vacuum"
layers = [{ material = "glass", thickness_nm = 5.0 }]
"#,
    );
    let out = vdw(&["pressure", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("stack.layers[0].material"));
}

#[test]
fn unwritable_output_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("missing-dir").join("out.csv");
    let out = vdw(&[
        "sweep",
        "--config",
        &config("gold_plates.toml"),
        "--csv",
        target.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn series_failure_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"
temperature = 300.0
[materials.glass]
kind = "lorentz"
oscillators = [{ strength = 1.3, resonance = 2.0e16 }]
[stack]
left = "glass"
right = "glass"
layers = [{ material = "vacuum", thickness_nm = 1.0 }]
[numerics]
min_terms = 1
max_terms = 5
"#,
    );
    let out = vdw(&["pressure", "--config", &cfg]);
    assert_eq!(
        out.status.code(),
        Some(2),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn verification_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let ok = vdw(&[
        "verify",
        "--suite",
        "baseline",
        "--report",
        report.to_str().unwrap(),
    ]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).contains("[PASS]"));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert!(json.to_string().contains("baseline"));

    let forced = vdw(&[
        "verify",
        "--suite",
        "reduction",
        "--count",
        "1",
        "--tolerance",
        "0",
    ]);
    assert_eq!(forced.status.code(), Some(3));
    assert!(stdout(&forced).contains("[FAIL]"));
}

#[test]
fn verification_is_reproducible_for_a_seed() {
    let args = ["verify", "--suite", "dlp", "--seed", "7", "--count", "2"];
    let a = vdw(&args);
    let b = vdw(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}
