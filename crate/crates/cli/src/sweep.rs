//! Negative-pair solves over a `theta` grid, in parallel.

use affmax::model::ModelParams;
use affmax::pipeline::solve_negative;
use rayon::prelude::*;
use serde::Serialize;

use crate::commands::{emit, negative_options, write_json, Status};
use crate::config::{self, required};
use crate::error::CliError;

pub const NOT_CLAIMED: &str = "upper-bound-not-claimed";

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub theta: f64,
    /// `ok` or the solver error.
    pub status: String,
    /// `claimed` or `upper-bound-not-claimed`.
    pub upper_bound: &'static str,
    pub lambda_cal: Option<f64>,
    pub iterations: Option<usize>,
    #[serde(rename = "T_inf")]
    pub t_inf: Option<f64>,
    #[serde(rename = "R_inf")]
    pub r_inf: Option<f64>,
    pub rho: Option<f64>,
    pub eps0: Option<f64>,
    pub eta1: Option<f64>,
    pub eta2: Option<f64>,
    pub bounds_hold: Option<bool>,
}

/// `steps` values from `lo` to `hi`, endpoints included.
pub fn theta_grid(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..steps).map(|k| lo + (hi - lo) * k as f64 / (steps - 1) as f64).collect(),
    }
}

pub fn sweep(a: config::Sweep) -> Result<Status, CliError> {
    let n = a.n.unwrap_or(2);
    let lo = required(a.theta_min, "theta-min")?;
    let hi = required(a.theta_max, "theta-max")?;
    let steps = a.steps.unwrap_or(8);
    if !(hi >= lo) || steps == 0 {
        return Err(CliError::Usage("need theta-min <= theta-max and steps >= 1".into()));
    }
    let opts = negative_options(a.eta0, None, None, a.eta_max);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(a.jobs.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    let thetas = theta_grid(lo, hi, steps);
    let results: Vec<_> = pool.install(|| {
        thetas
            .par_iter()
            .map(|&theta| {
                let upper_bound = if ModelParams::upper_bound_claimed(n, theta) { "claimed" } else { NOT_CLAIMED };
                let empty = SweepRow {
                    theta,
                    status: String::new(),
                    upper_bound,
                    lambda_cal: None,
                    iterations: None,
                    t_inf: None,
                    r_inf: None,
                    rho: None,
                    eps0: None,
                    eta1: None,
                    eta2: None,
                    bounds_hold: None,
                };
                match solve_negative(n, theta, &opts) {
                    Ok(run) => {
                        let b = &run.bounds;
                        let row = SweepRow {
                            status: "ok".into(),
                            lambda_cal: Some(run.local.lambda_cal),
                            iterations: Some(run.local.iterations),
                            t_inf: Some(run.blowup.t_inf),
                            r_inf: Some(run.blowup.r_inf),
                            rho: Some(b.rho),
                            eps0: b.eps0,
                            eta1: b.eta1,
                            eta2: b.eta2,
                            bounds_hold: Some(b.checks.iter().all(|c| c.holds)),
                            ..empty
                        };
                        (row, Some(run.report()))
                    }
                    Err(e) => (SweepRow { status: format!("error: {e}"), ..empty }, None),
                }
            })
            .collect()
    });

    // serialized writes in theta order
    let mut summary = csv::Writer::from_writer(Vec::new());
    for (k, (row, report)) in results.iter().enumerate() {
        summary.serialize(row).map_err(|e| CliError::Usage(e.to_string()))?;
        if let (Some(dir), Some(report)) = (a.report_dir.as_deref(), report) {
            write_json(report, Some(&dir.join(format!("theta_{k:03}.json"))))?;
        }
    }
    let bytes = summary.into_inner().map_err(|e| CliError::Usage(e.to_string()))?;
    emit(&bytes, a.out.as_deref())?;
    Ok(Status::from_pass(results.iter().all(|(r, _)| r.status == "ok")))
}
