//! Subcommand implementations.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use affmax::curve::PhaseCurve;
use affmax::io::{read_curve_rows, read_profile, write_curve, write_profile};
use affmax::model::{ModelParams, TaylorData};
use affmax::negative_pair::{taylor_coeffs, FixedPointOptions};
use affmax::phase_plane::{bernstein_radial_check, BERNSTEIN_WINDOW};
use affmax::pipeline::{positive_profile, solve_negative, NegativeOptions};
use affmax::reconstruct::{profile_grid, rebuild_profile, ANCHOR_RADIUS};
use affmax::verify::{assemble, bernstein_1d_check, verify_solution, AssembleOptions, VerifyOptions};
use affmax::Solution;
use serde::Serialize;
use serde_json::Value;

use crate::config::{self, required};
use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub(crate) fn from_pass(pass: bool) -> Self {
        if pass {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

pub(crate) fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::Io(dir.to_path_buf(), e))?;
    }
    File::create(path).map(BufWriter::new).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

pub(crate) fn open(path: &Path) -> Result<BufReader<File>, CliError> {
    File::open(path).map(BufReader::new).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

/// Writes `bytes` to `path`, or to standard output when absent. A closed pipe is not an error.
pub(crate) fn emit(bytes: &[u8], path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(p) => {
            let mut w = create(p)?;
            w.write_all(bytes).and_then(|_| w.flush()).map_err(|e| CliError::Io(p.to_path_buf(), e))
        }
        None => {
            let mut out = std::io::stdout().lock();
            match out.write_all(bytes).and_then(|_| out.flush()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::Io(PathBuf::from("<stdout>"), e)),
                _ => Ok(()),
            }
        }
    }
}

/// Pretty JSON with a trailing newline.
pub(crate) fn write_json<S: Serialize>(value: &S, path: Option<&Path>) -> Result<(), CliError> {
    let to_err = |e| CliError::Json(path.map_or_else(|| PathBuf::from("<stdout>"), Path::to_path_buf), e);
    let mut text = serde_json::to_string_pretty(value).map_err(to_err)?;
    text.push('\n');
    emit(text.as_bytes(), path)
}

pub(crate) fn read_json<D: serde::de::DeserializeOwned>(path: &Path) -> Result<D, CliError> {
    serde_json::from_reader(open(path)?).map_err(|e| CliError::Json(path.to_path_buf(), e))
}

/// Fields of a negative-pair report used downstream.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct RunSummary {
    pub n: Option<usize>,
    pub theta: Option<f64>,
    pub eta0: Option<f64>,
    pub lambda_cal: Option<f64>,
    pub t_inf: Option<f64>,
    pub rho: Option<f64>,
    pub eps0: Option<f64>,
}

pub(crate) fn run_summary(path: Option<&Path>) -> Result<RunSummary, CliError> {
    let Some(path) = path else {
        return Ok(RunSummary::default());
    };
    let v: Value = read_json(path)?;
    let num = |v: &Value| v.as_f64();
    Ok(RunSummary {
        n: v["n"].as_u64().map(|n| n as usize),
        theta: num(&v["theta"]),
        eta0: num(&v["eta0"]),
        lambda_cal: num(&v["lambda_cal"]),
        t_inf: num(&v["T_inf"]),
        rho: num(&v["bounds"]["rho"]),
        eps0: num(&v["bounds"]["eps0"]),
    })
}

pub fn solve_positive(a: config::SolvePositive) -> Result<Status, CliError> {
    let out = required(a.out, "out")?;
    let profile = positive_profile(
        a.v0.unwrap_or(1.0),
        a.lambda.unwrap_or(1.0),
        a.theta.unwrap_or(0.55),
        a.rmax.unwrap_or(10.0),
        a.step.unwrap_or(0.01),
    )?;
    write_profile(&profile, create(&out)?)?;
    Ok(Status::Pass)
}

pub(crate) fn negative_options(eta0: Option<f64>, tol: Option<f64>, max_iter: Option<usize>, eta_max: Option<f64>) -> NegativeOptions<f64> {
    let mut opts = NegativeOptions::<f64>::default();
    let fp: &mut FixedPointOptions<f64> = &mut opts.fixed_point;
    fp.eta0 = eta0.unwrap_or(fp.eta0);
    fp.tol = tol.unwrap_or(fp.tol);
    fp.max_iter = max_iter.unwrap_or(fp.max_iter);
    opts.eta_max = eta_max.unwrap_or(opts.eta_max);
    opts
}

/// Writes the curve and the report; bound checks are recorded, not enforced.
pub fn solve_negative_cmd(a: config::SolveNegative) -> Result<Status, CliError> {
    let out = required(a.out, "out")?;
    let opts = negative_options(a.eta0, a.tol, a.max_iter, a.eta_max);
    let run = solve_negative(a.n.unwrap_or(2), a.theta.unwrap_or(0.55), &opts)?;
    write_curve(&run.global.curve, create(&out)?)?;
    write_json(&run.report(), a.report.as_deref())?;
    Ok(Status::Pass)
}

pub fn reconstruct(a: config::Reconstruct) -> Result<Status, CliError> {
    let curve_path = required(a.curve, "curve")?;
    let out = required(a.out, "out")?;
    let run = run_summary(a.report.as_deref())?;
    let n = a.n.or(run.n).unwrap_or(2);
    let theta = required(a.theta.or(run.theta), "theta")?;
    let rows = read_curve_rows::<f64, _>(open(&curve_path)?)?;
    let lambda_cal = a.lambda_cal.or(run.lambda_cal);
    let taylor = taylor_coeffs(n, theta).unwrap_or(TaylorData { d1: 2.0, alpha: 0.0, beta: 0.0, gamma: 0.0 });
    let probe = ModelParams::new(n, theta, 0.0, 2.0)?;
    let eta0 = match a.eta0.or(run.eta0) {
        Some(e) => e,
        None => PhaseCurve::from_rows(probe, taylor, &rows)?
            .anchor_from_integral()
            .ok_or_else(|| CliError::Usage("cannot locate eta0 from the I column; pass --eta0".into()))?,
    };
    let curve = match lambda_cal {
        Some(l) => PhaseCurve::from_rows_ode(ModelParams::new(n, theta, -l, eta0)?, taylor, &rows)?,
        None => PhaseCurve::from_rows(ModelParams::new(n, theta, 0.0, eta0)?, taylor, &rows)?,
    };
    let r0 = ANCHOR_RADIUS;
    let grid = profile_grid(&curve, eta0, r0, a.step.unwrap_or(0.01), a.r_split.unwrap_or(3.0))?;
    let profile = rebuild_profile(&curve, eta0, a.v0.unwrap_or(1.0), r0, &grid)?;
    write_profile(&profile, create(&out)?)?;
    Ok(Status::Pass)
}

pub fn assemble_cmd(a: config::Assemble) -> Result<Status, CliError> {
    let phi_path = required(a.phi, "phi")?;
    let psi_path = required(a.psi, "psi")?;
    let out = required(a.out, "out")?;
    let run = run_summary(a.report.as_deref())?;
    let n = a.n.or(run.n).unwrap_or(2);
    let theta = required(a.theta.or(run.theta), "theta")?;
    let phi = read_profile::<f64, _>(open(&phi_path)?, 1)?;
    let psi = read_profile::<f64, _>(open(&psi_path)?, n)?;
    let opts = AssembleOptions::new(theta, &psi, a.t_inf.or(run.t_inf));
    let sol = assemble(&phi, &psi, a.m.unwrap_or(0), &opts)?;
    write_json(&sol, Some(&out))?;
    Ok(Status::Pass)
}

pub fn verify(a: config::Verify) -> Result<Status, CliError> {
    let path = required(a.solution, "solution")?;
    let sol: Solution = read_json(&path)?;
    let d = VerifyOptions::<f64>::default();
    let opts = VerifyOptions {
        points: a.points.unwrap_or(d.points),
        seed: a.seed.unwrap_or(d.seed),
        step: a.step.unwrap_or(d.step),
        tolerance: a.tolerance.unwrap_or(d.tolerance),
        ceiling: a.ceiling.unwrap_or(d.ceiling),
        ..d
    };
    let report = verify_solution(&sol, &opts)?;
    write_json(&report, a.report.as_deref())?;
    Ok(Status::from_pass(report.pass))
}

pub fn bernstein_radial(a: config::BernsteinRadial) -> Result<Status, CliError> {
    let half = a.window.unwrap_or(BERNSTEIN_WINDOW);
    let report = bernstein_radial_check(
        required(a.n, "n")?,
        a.theta.unwrap_or(0.75),
        (1.0 - half, 1.0 + half),
        a.samples.unwrap_or(201),
    )?;
    write_json(&report, a.report.as_deref())?;
    Ok(Status::from_pass(report.pass))
}

pub fn bernstein_1d(a: config::Bernstein1d) -> Result<Status, CliError> {
    let report = bernstein_1d_check(required(a.theta, "theta")?)?;
    write_json(&report, a.report.as_deref())?;
    Ok(Status::from_pass(report.pass))
}
