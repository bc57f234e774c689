use std::path::Path;
use std::process::Command;

use dtc_sim::cli::main_with_args;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("dtc-sim").chain(args.iter().copied());
    let code = main_with_args(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn write_spec(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

const SPEC: &str = r#"
spec_version = 1
name = "clean"
model = "central_spin"

[central_spin]
n_spins = 3
g = 1.0
omega = 1.0
tau = 2.0
epsilon = 0.0
n_periods = 16
"#;

#[test]
fn help_for_every_subcommand() {
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    for sub in ["run", "sweep", "spectrum", "validate", "replicate"] {
        assert!(out.contains(sub), "{sub} missing from top-level help");
        let (code, out, _) = run(&[sub, "--help"]);
        assert_eq!(code, 0, "{sub}");
        assert!(out.contains("Usage"), "{sub}");
    }
    let (_, out, _) = run(&["spectrum", "--help"]);
    for flag in ["--input", "--out", "--window", "--dominance", "--format", "--threads", "--verbose"] {
        assert!(out.contains(flag), "{flag}");
    }
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(run(&[]).0, 1);
    assert_eq!(run(&["frobnicate"]).0, 1);
    let (code, _, err) = run(&["replicate", "fig9", "--out", "/nonexistent/x"]);
    assert_eq!(code, 1);
    assert!(err.contains("unknown preset"), "{err}");
}

#[test]
fn config_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let odd = write_spec(dir.path(), "odd.toml", &SPEC.replace("n_periods = 16", "n_periods = 15"));
    let (code, _, err) = run(&["run", &odd, "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("n_periods must be even"), "{err}");
    let plain = write_spec(dir.path(), "plain.toml", SPEC);
    assert_eq!(run(&["sweep", &plain, "--out", dir.path().to_str().unwrap()]).0, 1);
}

#[test]
fn capacity_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let big = write_spec(
        dir.path(),
        "big.toml",
        &SPEC.replace("n_spins = 3", "n_spins = 40").replace("tau = 2.0", "tau = 2.0\nbackend = \"full\""),
    );
    let (code, _, err) = run(&["run", &big, "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code, 2, "{err}");
    let missing = dir.path().join("missing.csv");
    assert_eq!(run(&["spectrum", "--input", missing.to_str().unwrap()]).0, 2);
}

#[test]
fn run_writes_into_named_directory() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), "s.toml", SPEC);
    let out = dir.path().join("out");
    let (code, stdout, err) = run(&["run", &spec, "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    assert!(stdout.contains("height_at_half = 1.000000"), "{stdout}");
    for f in ["series.csv", "spectrum.csv", "peaks.json", "metadata.json"] {
        assert!(out.join("clean").join(f).is_file(), "{f}");
    }
}

#[test]
fn spectrum_of_alternating_series() {
    let dir = tempfile::tempdir().unwrap();
    let mut csv = String::from("period_index,magnetization\n");
    for n in 0..64 {
        csv += &format!("{n},{}\n", if n % 2 == 0 { 1.0 } else { -1.0 });
    }
    let input = write_spec(dir.path(), "series.csv", &csv);
    let out = dir.path().join("a");
    let (code, stdout, err) = run(&["spectrum", "--input", &input, "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    assert!(stdout.contains("height_at_half = 1.000000"), "{stdout}");
    let peaks: serde_json::Value = serde_json::from_slice(&std::fs::read(out.join("peaks.json")).unwrap()).unwrap();
    assert_eq!(peaks["series"][0]["height_at_half"], 1.0);
    assert_eq!(peaks["series"][0]["dtc_signature"], true);
}

#[test]
fn validate_passes_on_clean_build() {
    let (code, out, _) = run(&["validate", "--spins", "1,2,3", "--draws", "2"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("PASS  backend-equivalence/N=3"));
    assert!(!out.contains("FAIL"));
}

#[test]
fn validate_reports_skip_for_oversized_request() {
    let (code, out, _) = run(&["validate", "--spins", "2,40", "--draws", "1"]);
    assert_eq!(code, 0);
    assert!(out.contains("SKIP  backend-equivalence/N=40"), "{out}");
}

#[test]
fn replicate_list() {
    let (code, out, _) = run(&["replicate", "--list"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 6);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_dtc-sim");
    assert_eq!(Command::new(bin).arg("--version").output().unwrap().status.code(), Some(0));
    assert_eq!(Command::new(bin).arg("nope").output().unwrap().status.code(), Some(1));
    let dir = tempfile::tempdir().unwrap();
    let status = Command::new(bin)
        .args(["replicate", "fig1c", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(0));
    assert!(dir.path().join("fig1c/drive_off/spectrum.csv").is_file());
    assert!(dir.path().join("fig1c/drive_on/spectrum.csv").is_file());
}
