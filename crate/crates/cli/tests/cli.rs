use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use reduce_cli::run::{REPORT_FILE, SPECTRUM_FILE};
use reduce_cli::{RunConfig, RunReport};
use reduce_core::oracle::casimir_series;

fn reduce(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_reduce"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, body: &str) -> String {
    let path = dir.join("run.cfg");
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

const SU2: &str = "# trivial representation on the full interval\n\
    scenario = su2-conj\n\
    representation = trivial\n\
    grid.N = 4000\n\
    eigenvalues = 6\n\
    oracle = su2-casimir\n\
    output_dir = out\n";

#[test]
fn run_writes_spectrum_matching_casimir_series() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SU2);
    let out = reduce(&["run", &cfg]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("lambda[5]"));
    assert!(!stdout.contains("FAIL"));

    let mut rows = csv::Reader::from_path(dir.path().join("out").join(SPECTRUM_FILE)).unwrap();
    let expect = casimir_series(0, 6);
    let mut count = 0;
    for (rec, want) in rows.records().zip(&expect) {
        let rec = rec.unwrap();
        let got: f64 = rec[1].parse().unwrap();
        let oracle: f64 = rec[2].parse().unwrap();
        assert_eq!(oracle, *want);
        assert!((got - want).abs() <= 1e-6 || (got - want).abs() <= 1e-4 * want.abs());
        count += 1;
    }
    assert_eq!(count, 6);
    assert!(dir.path().join("out/plot.csv").exists());
}

#[test]
fn rerun_is_byte_identical_and_report_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let body = SU2.replace("grid.N = 4000", "grid.N = 400");
    let cfg = write_config(dir.path(), &body);
    assert!(reduce(&["run", &cfg]).status.success());
    let out = dir.path().join("out");
    let first_spectrum = fs::read(out.join(SPECTRUM_FILE)).unwrap();
    let first_plot = fs::read(out.join("plot.csv")).unwrap();
    assert!(reduce(&["run", &cfg]).status.success());
    assert_eq!(first_spectrum, fs::read(out.join(SPECTRUM_FILE)).unwrap());
    assert_eq!(first_plot, fs::read(out.join("plot.csv")).unwrap());

    let text = fs::read_to_string(out.join(REPORT_FILE)).unwrap();
    let report: RunReport = serde_json::from_str(&text).unwrap();
    assert_eq!(report.config, RunConfig::parse(&body).unwrap());
    assert_eq!(report.spectrum.ordering, "descending");
    assert_eq!(report.dim_vk, 1);
    let again: RunReport = serde_json::from_str(&serde_json::to_string(&report).unwrap()).unwrap();
    assert_eq!(again.spectrum.eigenvalues, report.spectrum.eigenvalues);
    assert_eq!(again.spectrum.oracle_comparison, report.spectrum.oracle_comparison);
}

#[test]
fn unusable_pair_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "scenario = su2-conj\nrepresentation = spin:1/2\ngrid.N = 100\n",
    );
    let out = reduce(&["run", &cfg]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("dim V^K = 0"));
}

#[test]
fn invalid_configs_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    for body in [
        "scenario = su2-conj\ngrid.N = 4\n",
        "scenario = su2-conj\ncolour = blue\n",
        "scenario = nowhere\n",
        "scenario = u1-plane\noracle = su2-casimir\n",
    ] {
        let cfg = write_config(dir.path(), body);
        let out = reduce(&["run", &cfg]);
        assert_eq!(out.status.code(), Some(2), "{body}");
    }
    let out = reduce(&["run", dir.path().join("missing.cfg").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_single_scenario_is_green_and_deterministic() {
    let a = reduce(&["verify", "u1-plane"]);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stdout));
    let text = String::from_utf8(a.stdout.clone()).unwrap();
    assert!(text.lines().all(|l| l.starts_with("PASS") || l.ends_with("0 failed")));
    assert!(!text.contains("so3-space"));
    let b = reduce(&["verify", "u1-plane"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn corrupted_catalog_fails_verification() {
    let out = reduce(&["verify", "su2-conj", "--corrupt-catalog"]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text
        .lines()
        .any(|l| l.starts_with("FAIL") && l.contains("polar.isotropy")));
}

#[test]
fn catalog_lists_every_scenario() {
    let out = reduce(&["catalog"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for id in ["u1-plane", "so3-space", "su2-conj", "su3-conj"] {
        assert!(text.contains(id));
    }
    assert!(text.contains("dim V^K = 2"));
}
