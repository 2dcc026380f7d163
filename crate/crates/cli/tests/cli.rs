use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use affmax::pipeline::{solve_negative, NegativeOptions};
use serde_json::Value;
use tempfile::TempDir;

fn affmax(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_affmax")).current_dir(dir).args(args).output().expect("spawn affmax")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json(path: PathBuf) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn first_line(path: PathBuf) -> String {
    std::fs::read_to_string(path).unwrap().lines().next().unwrap_or_default().to_string()
}

/// Runs the worked pipeline in a fresh directory and returns it.
fn pipeline() -> TempDir {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let steps: [&[&str]; 5] = [
        &["solve-negative", "--n", "2", "--theta", "0.55", "--eta0", "1.05", "--eta-max", "1e4", "--out", "curve.csv", "--report", "report.json"],
        &["reconstruct", "--curve", "curve.csv", "--report", "report.json", "--v0", "1", "--out", "profile.csv"],
        &["solve-positive", "--v0", "1", "--theta", "0.55", "--lambda", "1", "--rmax", "12", "--out", "phi.csv"],
        &["assemble", "--phi", "phi.csv", "--psi", "profile.csv", "--m", "0", "--report", "report.json", "--out", "solution.json"],
        &["verify", "--solution", "solution.json", "--points", "1000", "--report", "verify.json"],
    ];
    for args in steps {
        let out = affmax(d, args);
        assert_eq!(code(&out), 0, "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
    dir
}

#[test]
fn version_and_usage_errors() {
    let dir = TempDir::new().unwrap();
    let out = affmax(dir.path(), &["--version"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains(env!("CARGO_PKG_VERSION")) && text.contains("revision"), "{text}");
    assert_eq!(code(&affmax(dir.path(), &["frobnicate"])), 1);
    assert_eq!(code(&affmax(dir.path(), &["solve-negative", "--theta", "abc", "--out", "c.csv"])), 1);
    assert_eq!(code(&affmax(dir.path(), &[])), 1);
    assert_eq!(code(&affmax(dir.path(), &["solve-negative", "--n", "7", "--out", "c.csv"])), 1);
}

#[test]
fn missing_solution_is_an_input_error() {
    let dir = TempDir::new().unwrap();
    let out = affmax(dir.path(), &["verify", "--solution", "missing.json", "--points", "1000", "--report", "verify.json"]);
    assert_eq!(code(&out), 1);
    assert!(!String::from_utf8_lossy(&out.stderr).is_empty());
    assert!(!dir.path().join("verify.json").exists());
}

#[test]
fn solve_negative_writes_curve_and_report() {
    let dir = TempDir::new().unwrap();
    let out = affmax(dir.path(), &["solve-negative", "--n", "2", "--theta", "0.55", "--eta0", "1.05", "--out", "curve.csv", "--report", "report.json"]);
    assert_eq!(code(&out), 0);
    assert_eq!(first_line(dir.path().join("curve.csv")), "eta,zeta,I");
    let r = json(dir.path().join("report.json"));
    for key in ["alpha", "beta", "gamma"] {
        assert!(r["taylor"][key].is_f64(), "taylor.{key}");
    }
    for key in ["rho", "eps0", "eta1", "eta2"] {
        assert!(r["bounds"].get(key).is_some(), "bounds.{key}");
    }
    for key in ["lambda_cal", "T_inf", "tail_bound", "R_inf"] {
        assert!(r[key].is_f64(), "{key}");
    }
    assert!(r["iterations"].is_u64());
    assert!((r["taylor"]["alpha"].as_f64().unwrap() - 62.0 / 15.0).abs() < 1e-12);
    assert!((r["R_inf"].as_f64().unwrap() - r["T_inf"].as_f64().unwrap().exp()).abs() < 1e-12);
}

#[test]
fn end_to_end_counterexample_verifies() {
    let dir = pipeline();
    let d = dir.path();
    assert_eq!(first_line(d.join("profile.csv")), "r,v,u");
    assert_eq!(first_line(d.join("phi.csv")), "r,v,u");
    let sol = json(d.join("solution.json"));
    assert_eq!(sol["dimension"], 3);
    let v = json(d.join("verify.json"));
    assert_eq!(v["points"], 1000);
    assert_eq!(v["pass"], true);
    assert!(v["max_abs_residual"].as_f64().unwrap() < 1e-4);
    assert!(v["min_hessian_eigenvalue"].as_f64().unwrap() > 0.0);
    assert_eq!(v["completeness"]["pass"], true);
}

#[test]
fn reconstruct_matches_library_profile() {
    let dir = pipeline();
    let run = solve_negative(2, 0.55, &NegativeOptions { eta_max: 1e4, ..Default::default() }).unwrap();
    let lib = run.profile(1.0, 0.01, 3.0).unwrap();
    let file = affmax::io::read_profile::<f64, _>(std::fs::File::open(dir.path().join("profile.csv")).unwrap(), 2).unwrap();
    assert_eq!(lib.r.len(), file.r.len());
    for i in 0..lib.r.len() {
        assert!((lib.r[i] - file.r[i]).abs() <= 1e-9 * lib.r[i].max(1.0));
        assert!((lib.v[i] - file.v[i]).abs() <= 1e-8 * lib.v[i].max(1.0), "r = {}: {} vs {}", lib.r[i], lib.v[i], file.v[i]);
    }
}

#[test]
fn tampered_solution_fails_verification() {
    let dir = pipeline();
    let d = dir.path();
    let mut sol = json(d.join("solution.json"));
    for col in ["v", "u"] {
        let scaled: Vec<f64> = sol["phi"][col].as_array().unwrap().iter().map(|x| 1.1 * x.as_f64().unwrap()).collect();
        sol["phi"][col] = serde_json::json!(scaled);
    }
    std::fs::write(d.join("bad.json"), serde_json::to_string(&sol).unwrap()).unwrap();
    let out = affmax(d, &["verify", "--solution", "bad.json", "--points", "100", "--report", "bad_report.json"]);
    assert_eq!(code(&out), 2);
    assert_eq!(json(d.join("bad_report.json"))["residual_pass"], false);
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let (a, b) = (pipeline(), pipeline());
    for file in ["curve.csv", "report.json", "profile.csv", "phi.csv", "solution.json", "verify.json"] {
        let x = std::fs::read(a.path().join(file)).unwrap();
        let y = std::fs::read(b.path().join(file)).unwrap();
        assert!(x == y, "{file} differs");
    }
}

#[test]
fn config_sections_and_flag_precedence() {
    let dir = pipeline();
    let d = dir.path();
    std::fs::write(d.join("run.toml"), "[verify]\nsolution = \"solution.json\"\npoints = 40\nseed = 3\n").unwrap();
    assert_eq!(code(&affmax(d, &["--config", "run.toml", "verify", "--report", "a.json"])), 0);
    assert_eq!(json(d.join("a.json"))["points"], 40);
    assert_eq!(code(&affmax(d, &["verify", "--config", "run.toml", "--points", "60", "--report", "b.json"])), 0);
    assert_eq!(json(d.join("b.json"))["points"], 60);
    std::fs::write(d.join("bad.toml"), "[verify]\npoints = \"many\"\n").unwrap();
    assert_eq!(code(&affmax(d, &["--config", "bad.toml", "verify"])), 1);
    std::fs::write(d.join("typo.toml"), "[verfiy]\npoints = 5\n").unwrap();
    assert_eq!(code(&affmax(d, &["--config", "typo.toml", "verify", "--solution", "solution.json"])), 1);
    assert_eq!(code(&affmax(d, &["--config", "absent.toml", "verify"])), 1);
}

#[test]
fn sweep_marks_unclaimed_rows_and_is_job_independent() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let args = |jobs: &'static str, out: &'static str| {
        ["sweep", "--n", "2", "--theta-min", "0.5", "--theta-max", "0.7", "--steps", "8", "--jobs", jobs, "--out", out]
    };
    assert_eq!(code(&affmax(d, &args("3", "s3.csv"))), 0);
    assert_eq!(code(&affmax(d, &args("1", "s1.csv"))), 0);
    let text = std::fs::read_to_string(d.join("s3.csv")).unwrap();
    assert_eq!(text, std::fs::read_to_string(d.join("s1.csv")).unwrap());
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    let headers = rd.headers().unwrap().clone();
    let (ti, ui) = (headers.iter().position(|h| h == "theta").unwrap(), headers.iter().position(|h| h == "upper_bound").unwrap());
    let rows: Vec<_> = rd.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 8);
    for row in rows {
        let theta: f64 = row[ti].parse().unwrap();
        let inside = (0.5..2.0 / 3.0).contains(&theta);
        assert_eq!(&row[ui] == "upper-bound-not-claimed", !inside, "theta = {theta}");
    }
}

#[test]
fn plot_data_kinds() {
    let dir = pipeline();
    let d = dir.path();
    let cols = |kind: &str, input: &str, n: usize| {
        let mut args = vec!["plot-data", "--kind", kind, "--input", input];
        if kind == "bounds" {
            args.extend(["--report", "report.json"]);
        }
        let out = affmax(d, &args);
        assert_eq!(code(&out), 0);
        let text = String::from_utf8(out.stdout).unwrap();
        let mut lines = text.lines();
        assert!(lines.next().unwrap().starts_with('#'));
        assert!(lines.all(|l| l.split_whitespace().count() == n), "{kind}");
    };
    cols("phase", "curve.csv", 2);
    cols("profile", "profile.csv", 3);
    cols("bounds", "curve.csv", 4);
    let out = affmax(d, &["plot-data", "--kind", "histogram", "--input", "curve.csv"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown plot kind"));
}

#[test]
fn bernstein_commands() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    assert_eq!(code(&affmax(d, &["bernstein-radial", "--n", "4", "--theta", "1.5", "--report", "br.json"])), 0);
    let r = json(d.join("br.json"));
    for key in ["n", "theta", "window", "samples", "pass", "witnesses"] {
        assert!(r.get(key).is_some(), "{key}");
    }
    let w = &r["witnesses"][0];
    assert!(w["eta"].is_f64() && w["forced_sign"].is_i64());
    assert_eq!(code(&affmax(d, &["bernstein-radial", "--n", "2", "--theta", "0.7"])), 1);
    assert_eq!(code(&affmax(d, &["bernstein-1d", "--theta", "1"])), 0);
    assert_eq!(code(&affmax(d, &["bernstein-1d", "--theta", "0.4"])), 2);
}
