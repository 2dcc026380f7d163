//! Builds the separable solution for `n = 2`, `theta = 0.55` and checks it
//! at a thousand seeded points.

use affmax::pipeline::{build_counterexample, CounterexampleOptions};
use affmax::verify::{verify_solution, VerifyOptions};

fn main() -> Result<(), affmax::Error> {
    let (solution, run) = build_counterexample(2, 0.55, 0, &CounterexampleOptions::default())?;
    let report = run.report();
    println!("lambda_cal = {:.12}", report.lambda_cal);
    println!("T_inf = {:.9}, R_inf = {:.9}", report.t_inf, report.r_inf);
    let check = verify_solution(&solution, &VerifyOptions::default())?;
    println!("max |residual| = {:.3e}", check.max_abs_residual);
    println!("min Hessian eigenvalue = {:.3e}", check.min_hessian_eigenvalue);
    println!("pass = {}", check.pass);
    Ok(())
}
