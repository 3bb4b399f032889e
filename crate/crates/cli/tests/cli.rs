use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name).display().to_string()
}

fn uk() -> String {
    data("uk_general_elections.csv")
}

fn us() -> String {
    data("us_presidential_elections.csv")
}

fn voterfit(args: &[&str]) -> Output {
    voterfit_with_threads(args, None)
}

fn voterfit_with_threads(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_voterfit"));
    cmd.args(args).env_remove("VOTERFIT_THREADS");
    if let Some(t) = threads {
        cmd.env("VOTERFIT_THREADS", t);
    }
    cmd.output().unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let value: Value = serde_json::from_slice(&out.stdout).unwrap();
    let schema: Value = serde_json::from_str(include_str!("../schema/output.schema.json")).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = validator.iter_errors(&value).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:?}");
    value
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn temp_csv(dir: &tempfile::TempDir, name: &str, body: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn fit_full_conservative_series() {
    let v = json(&voterfit(&["fit", "--input", &uk(), "--party", "CON"]));
    assert_eq!((v["s0"].as_u64(), v["s1"].as_u64()), (Some(19), Some(14)));
    assert_eq!(v["points"], 27);
    assert_eq!(v["domain"], "both-sides");
}

#[test]
fn fit_surface() {
    let v = json(&voterfit(&["fit", "--input", &uk(), "--party", "LAB", "--surface"]));
    let surface = v["surface"].as_array().unwrap();
    assert_eq!(surface.len() as u64, v["evaluated"].as_u64().unwrap());
    let csv = voterfit(&["fit", "--input", &uk(), "--party", "LAB", "--surface", "--format", "csv"]);
    let text = String::from_utf8(csv.stdout).unwrap();
    assert!(text.starts_with("s0,s1,loglik\n"));
    assert_eq!(text.lines().count(), surface.len() + 1);
}

#[test]
fn one_sided_domain_flag() {
    let dir = tempfile::tempdir().unwrap();
    let path = temp_csv(
        &dir,
        "early.csv",
        "year,party,share_percent\n1922,CON,38.5\n1923,CON,38.0\n1924,CON,46.8\n1929,CON,38.1\n1931,CON,60.7\n",
    );
    let path = path.to_str().unwrap();
    let both = json(&voterfit(&["fit", "--input", path, "--party", "CON"]));
    let open = json(&voterfit(&["fit", "--input", path, "--party", "CON", "--domain", "admissible"]));
    assert_eq!((both["s0"].as_u64(), both["s1"].as_u64()), (Some(1), Some(5)));
    assert_eq!((open["s0"].as_u64(), open["s1"].as_u64()), (Some(0), Some(5)));
}

#[test]
fn fit_needs_two_points() {
    let dir = tempfile::tempdir().unwrap();
    let path = temp_csv(&dir, "one.csv", "year,party,share_percent\n1922,CON,38.5\n");
    let out = voterfit(&["fit", "--input", path.to_str().unwrap(), "--party", "CON"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("at least two datapoints required"), "{}", stderr(&out));
}

#[test]
fn missing_party() {
    let out = voterfit(&["fit", "--input", &uk(), "--party", "XYZ"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("XYZ"));
}

#[test]
fn unreadable_and_malformed_input() {
    let out = voterfit(&["fit", "--input", "/nonexistent/elections.csv", "--party", "CON"]);
    assert_eq!(out.status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let path = temp_csv(&dir, "bad.csv", "year,party,share_percent\n1922,CON,38.5\n1923,CON,lots\n");
    let out = voterfit(&["fit", "--input", path.to_str().unwrap(), "--party", "CON"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 3"), "{}", stderr(&out));
}

#[test]
fn no_feasible_couple() {
    let dir = tempfile::tempdir().unwrap();
    let path = temp_csv(&dir, "ends.csv", "year,party,share_percent\n2000,A,0\n2001,A,100\n");
    let out = voterfit(&["fit", "--input", path.to_str().unwrap(), "--party", "A"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn forecast_reports_and_exit_codes() {
    let v = json(&voterfit(&["forecast", "--input", &uk(), "--party", "CON", "--cutoff", "1960"]));
    assert_eq!(v["evaluated"], 16);
    assert!((v["mae"].as_f64().unwrap() - 4.63).abs() <= 0.25);
    assert!(v["next"].is_null());

    let out = voterfit(&["forecast", "--input", &uk(), "--party", "CON", "--cutoff", "2030"]);
    assert_eq!(out.status.code(), Some(4));

    let dir = tempfile::tempdir().unwrap();
    let path = temp_csv(&dir, "two.csv", "year,party,share_percent\n1922,CON,38.5\n1923,CON,38.0\n");
    let out = voterfit(&["forecast", "--input", path.to_str().unwrap(), "--party", "CON", "--cutoff", "1900"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn forecast_with_extension_file_and_target() {
    let ext = data("uk_general_elections_2024.csv");
    let args =
        ["forecast", "--input", &uk(), "--input", &ext, "--party", "LAB", "--cutoff", "2024", "--target", "2029"];
    let v = json(&voterfit(&args));
    let rows = v["rows"].as_array().unwrap();
    let last = &rows[rows.len() - 1];
    assert_eq!(last["time"], 2024.0);
    assert_eq!((last["s0_star"].as_u64(), last["s1_star"].as_u64()), (Some(24), Some(15)));
    assert_eq!(v["next"]["time"], 2029.0);
}

#[test]
fn forecast_csv_columns() {
    let out = voterfit(&["forecast", "--input", &uk(), "--party", "LAB", "--cutoff", "1960", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("time,actual,prediction,baseline,abs_error,baseline_abs_error,s0_star,s1_star"));
    assert_eq!(lines.count(), 25);
}

#[test]
fn output_file() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("report.json");
    let out = voterfit(&[
        "forecast",
        "--input",
        &uk(),
        "--party",
        "CON",
        "--cutoff",
        "1960",
        "--output",
        target.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let stdout = voterfit(&["forecast", "--input", &uk(), "--party", "CON", "--cutoff", "1960"]).stdout;
    assert_eq!(std::fs::read(&target).unwrap(), stdout);
}

#[test]
fn simulate_two_state_chain() {
    let v = json(&voterfit(&[
        "simulate", "--n", "3", "--s0", "1", "--s1", "1", "--start", "1", "--t", "0.6931", "--runs", "100000",
    ]));
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows[0]["state"], 1);
    assert!((rows[0]["empirical"].as_f64().unwrap() - 0.75).abs() <= 0.01);
    assert!((rows[0]["analytic"].as_f64().unwrap() - 0.75).abs() <= 1e-4);
}

#[test]
fn simulate_frozen_and_invalid() {
    let v = json(&voterfit(&["simulate", "--n", "10", "--s0", "6", "--s1", "4", "--start", "4", "--t", "5"]));
    assert_eq!(v["rows"][0]["empirical"], 1.0);
    assert_eq!(v["rows"].as_array().unwrap().len(), 1);
    let runs0 =
        voterfit(&["simulate", "--n", "3", "--s0", "1", "--s1", "1", "--start", "1", "--t", "1", "--runs", "0"]);
    assert_eq!(runs0.status.code(), Some(2));
    let outside = voterfit(&["simulate", "--n", "10", "--s0", "2", "--s1", "1", "--start", "0", "--t", "1"]);
    assert_eq!(outside.status.code(), Some(2));
    let bad = voterfit(&["simulate", "--n", "10", "--s0", "8", "--s1", "4", "--start", "4", "--t", "1"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn evaluate_pools_runs() {
    let con = format!("{}:CON:1960", uk());
    let lab = format!("{}:LAB:1960", uk());
    let v = json(&voterfit(&["evaluate", "--run", &con, "--run", &lab]));
    let runs = v["runs"].as_array().unwrap();
    let mean = (runs[0]["mae"].as_f64().unwrap() + runs[1]["mae"].as_f64().unwrap()) / 2.0;
    assert_eq!(v["pooled"]["mae"].as_f64().unwrap(), mean);
    assert_eq!(v["pooled"]["series"], 2);

    let csv = voterfit(&["evaluate", "--run", &con, "--run", &lab, "--format", "csv"]);
    let text = String::from_utf8(csv.stdout).unwrap();
    assert!(text.starts_with("input,party,cutoff,evaluated,mae,baseline_mae\n"));
    assert!(text.lines().last().unwrap().starts_with("pooled,,,32,"));

    let late = format!("{}:DEM:2030", us());
    assert_eq!(voterfit(&["evaluate", "--run", &con, "--run", &late]).status.code(), Some(4));
}

#[test]
fn byte_identical_across_runs_and_threads() {
    let forecast = ["forecast", "--input", &us(), "--party", "REP", "--cutoff", "1940", "--target", "2024"];
    let fit = ["fit", "--input", &uk(), "--party", "LAB", "--surface"];
    let simulate = ["simulate", "--n", "10", "--s0", "2", "--s1", "1", "--start", "5", "--t", "1", "--seed", "9"];
    for args in [&forecast[..], &fit[..], &simulate[..]] {
        let reference = voterfit(args);
        assert!(reference.status.success());
        for threads in [None, Some("1"), Some("4")] {
            assert_eq!(voterfit_with_threads(args, threads).stdout, reference.stdout, "{args:?} {threads:?}");
        }
    }
}

#[test]
fn invalid_thread_count() {
    let out = voterfit_with_threads(&["fit", "--input", &uk(), "--party", "CON"], Some("zero"));
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("VOTERFIT_THREADS"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(voterfit(&["fit", "--party", "CON"]).status.code(), Some(2));
    assert_eq!(voterfit(&["evaluate", "--run", "uk.csv:CON"]).status.code(), Some(2));
}
