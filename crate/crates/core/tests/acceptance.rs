//! Acceptance criteria 1-9, one line each. Exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use affmax::model::{effective_lambda_fit, profile_to_phase, LambdaFitOptions};
use affmax::negative_pair::*;
use affmax::phase_plane::{bernstein_radial_check, power_solution_residual, BERNSTEIN_WINDOW};
use affmax::pipeline::{build_counterexample, solve_negative, CounterexampleOptions, NegativeOptions};
use affmax::positive_pair::*;
use affmax::verify::*;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn taylor_constants() -> Outcome {
    let a = taylor_coeffs(2, 0.75f64).unwrap().alpha;
    let b = taylor_coeffs(2, 0.55f64).unwrap().alpha;
    let (ea, eb) = ((a - 14.0 / 3.0).abs(), (b - 62.0 / 15.0).abs());
    outcome(ea < 1e-12 && eb < 1e-12, format!("alpha(2, 3/4) = {a:.15}, alpha(2, 0.55) = {b:.15}, errors {ea:.1e}, {eb:.1e}"))
}

fn calibration_limit() -> Outcome {
    let phi = |s: f64| 2.0 * (s - 1.0);
    let eta0 = 1.1;
    let lam = calibrate_lambda(phi, 2, eta0).unwrap();
    // int_1^eta0 [(s+1)/phi - 1/(s-1)] ds = (eta0 - 1)/2
    let exact = 8.0 * (eta0 - 1.0) * ((eta0 - 1.0) / 2.0f64).exp();
    let e_lam = (lam - exact).abs();
    let mut worst: f64 = 0.0;
    for (n, target) in [(2usize, 4.0), (3, 5.5)] {
        let l = calibrate_lambda(phi, n, eta0).unwrap();
        let prod = limit_product(phi, l, eta0, 1.0 + 1e-9).unwrap();
        worst = worst.max((prod - target).abs());
    }
    outcome(e_lam < 1e-8 && worst < 1e-6, format!("lambda_cal = {lam:.12} (closed form {exact:.12}), limit product error {worst:.1e}"))
}

fn fixed_point() -> Outcome {
    let local = fixed_point_solve(2, 0.55f64, &FixedPointOptions::default()).unwrap();
    let change = *local.contraction_history.last().unwrap();
    let global = extend_global(&local, 1e3).unwrap();
    let res = phase_residual(&global.curve).unwrap().max_relative;
    let h = local.eta[1] - local.eta[0];
    let q = &local.q;
    let dq = (-25.0 * q[0] + 48.0 * q[1] - 36.0 * q[2] + 16.0 * q[3] - 3.0 * q[4]) / (12.0 * h);
    let (d1, d2) = (q[0], 2.0 * dq);
    let alpha = taylor_coeffs(2, 0.55f64).unwrap().alpha;
    let pass = change < 1e-8 && local.iterations <= 200 && res < 1e-6 && (d1 - 2.0).abs() < 1e-4 && (d2 - alpha).abs() < 1e-2;
    outcome(
        pass,
        format!(
            "{} iterations, last change {change:.1e}, phase residual {res:.1e}, zeta'(1) = {d1:.6}, zeta''(1) = {d2:.5} (alpha {alpha:.5})",
            local.iterations
        ),
    )
}

fn global_bounds() -> Outcome {
    let run = solve_negative(2, 0.55f64, &NegativeOptions::default()).unwrap();
    let b = &run.bounds;
    let checks: Vec<String> =
        b.checks.iter().map(|c| format!("[{}: {} margin {:.3}]", c.id, if c.holds { "ok" } else { "FAILS" }, c.margin)).collect();
    let pass = b.checks.len() == 3 && b.checks.iter().all(|c| c.holds && c.margin > 0.0);
    outcome(
        pass,
        format!("rho = {:.4}, eps0 = {:?}, eta1 = {:?}, eta2 = {:?} {}", b.rho, b.eps0, b.eta1, b.eta2, checks.join(" ")),
    )
}

fn blowup() -> Outcome {
    let local = fixed_point_solve(2, 0.55f64, &FixedPointOptions::default()).unwrap();
    let b1 = blowup_time(&extend_global(&local, 1e3).unwrap().curve, 1.05).unwrap();
    let b2 = blowup_time(&extend_global(&local, 2e3).unwrap().curve, 1.05).unwrap();
    let shift = (b2.t_inf - b1.t_inf).abs();
    let pass = b1.t_inf.is_finite() && b1.tail_bound < 1e-3 * b1.t_inf && shift < b1.tail_bound;
    outcome(
        pass,
        format!("T_inf = {:.6}, tail {:.2e}, R_inf = {:.4}; doubled eta_max moves T_inf by {shift:.2e}", b1.t_inf, b1.tail_bound, b1.r_inf),
    )
}

fn positive_pair() -> Outcome {
    let c = PositivePairConfig::new(1.0, 1.0, 0.55f64).unwrap();
    let direct = integrate_direct(&c, 10.0, 400).unwrap();
    let agree = direct.r.iter().zip(&direct.v_upp).map(|(&r, &v)| (v - v_of_r(r, &c, 1e-13).unwrap()).abs()).fold(0.0, f64::max);
    let fine: Vec<f64> = (0..=400).map(|k| k as f64 * 0.01).collect();
    let d = build_phi(&c, &fine).unwrap().to_radial().unwrap().derivatives_at(0).unwrap();
    let odd = d[1].abs().max(d[3].abs());
    let grid: Vec<f64> = (0..=500).map(|k| k as f64 * 0.02).collect();
    let phi = build_phi(&c, &grid).unwrap().to_radial().unwrap();
    let fit = effective_lambda_fit(&phi, c.theta, 1, &LambdaFitOptions::default()).unwrap();
    let e_fit = (fit.lambda_prime - c.lambda).abs() / c.lambda;
    outcome(
        agree < 1e-6 && odd < 1e-6 && e_fit < 1e-4,
        format!("quadrature vs direct {agree:.1e}, odd derivatives at 0 {odd:.1e}, fitted lambda error {e_fit:.1e}"),
    )
}

fn counterexample() -> Outcome {
    let (sol, _) = build_counterexample(2, 0.55f64, 0, &CounterexampleOptions::default()).unwrap();
    let opts = VerifyOptions::default();
    let rep = verify_solution(&sol, &opts).unwrap();
    let complete = rep.completeness.as_ref().is_some_and(|c| c.pass);
    let (at, third) = non_quadratic_witness(&sol.psi, 0.9 * sol.psi.r.last().unwrap()).unwrap();
    let pass = rep.points == 1000 && rep.max_abs_residual < 1e-4 && rep.min_hessian_eigenvalue > 0.0 && complete && third > 1e-3;
    outcome(
        pass,
        format!(
            "N = {}, kappa = {:.6}, max residual {:.2e} over {} points, min eigenvalue {:.3e}, completeness {}, |psi'''({at:.3})| = {third:.3}",
            sol.dimension, sol.kappa, rep.max_abs_residual, rep.points, rep.min_hessian_eigenvalue, complete
        ),
    )
}

fn positive_results() -> Outcome {
    let mut failures = Vec::new();
    for n in [3usize, 4, 5] {
        for theta in [0.6f64, 0.75, 1.0, 1.5] {
            let r = bernstein_radial_check(n, theta, (1.0 - BERNSTEIN_WINDOW, 1.0 + BERNSTEIN_WINDOW), 200).unwrap();
            if !r.pass {
                failures.push(format!("radial ({n}, {theta})"));
            }
        }
    }
    let mut power = 0.0f64;
    for (k, c, nodes) in [(2usize, 1.0, &[0.5f64, 1.0, 2.0][..]), (3, 2.0, &[1.0][..])] {
        let big_n = 2.0 * k as f64;
        let res = power_solution_residual(k, (big_n + 1.0) / (big_n + 2.0), c, nodes).unwrap();
        power = power.max(res.iter().fold(0.0, |a, r| a.max(r.abs())));
    }
    if power > 1e-6 {
        failures.push(format!("power residual {power:.1e}"));
    }
    for theta in [0.6f64, 1.0, 2.0] {
        if !bernstein_1d_check(theta).unwrap().pass {
            failures.push(format!("1-d theta = {theta}"));
        }
    }
    outcome(failures.is_empty(), format!("12 radial cases, power residual {power:.1e}, 3 one-dimensional cases; failures: {failures:?}"))
}

fn round_trips() -> Outcome {
    let run = solve_negative(2, 0.55f64, &NegativeOptions::default()).unwrap();
    let curve = &run.global.curve;
    let it = curve.interpolant(run.global.eta0).unwrap();
    let p1 = run.profile(1.0, 0.01, 3.0).unwrap();
    let mut trip = 0.0f64;
    for p in profile_to_phase(&p1, 1e-3).unwrap() {
        if p.eta >= 1.1 && p.eta <= curve.eta_max / 2.0 {
            let z = it.zeta(p.eta).unwrap();
            trip = trip.max(((p.zeta - z) / z).abs());
        }
    }
    let p2 = run.profile(2.0, 0.01, 3.0).unwrap();
    let mut scaling = 0.0f64;
    for k in 1..p1.len() {
        scaling = scaling.max((p2.v[k] / p1.v[k] - 2.0).abs()).max((p2.u[k] / p1.u[k] - 2.0).abs());
    }
    let eta_shift = profile_to_phase(&p1, 1e-3)
        .unwrap()
        .iter()
        .zip(profile_to_phase(&p2, 1e-3).unwrap())
        .map(|(a, b)| (a.eta - b.eta).abs() / a.eta)
        .fold(0.0, f64::max);
    let (sol0, _) = build_counterexample(2, 0.55f64, 0, &CounterexampleOptions::default()).unwrap();
    let mut sol1 = sol0.clone();
    sol1.m_cylinder = 1;
    sol1.dimension += 1;
    let opts = VerifyOptions { points: 100, ..Default::default() };
    let mut cylinder = 0.0f64;
    for p in sample_points(&sol0, &opts) {
        let a = point_residual(&sol0, &p, opts.step).unwrap().residual;
        let mut q = p.clone();
        q.push(0.37);
        let b = point_residual(&sol1, &q, opts.step).unwrap().residual;
        cylinder = cylinder.max((a - b).abs());
    }
    let pass = trip < 1e-5 && scaling < 1e-12 && eta_shift < 1e-10 && cylinder < 1e-8;
    outcome(
        pass,
        format!("phase round trip {trip:.1e}, scaling {scaling:.1e}, etabar shift {eta_shift:.1e}, cylinder residual change {cylinder:.1e}"),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("taylor constants", taylor_constants),
        ("calibration limit", calibration_limit),
        ("fixed point", fixed_point),
        ("global bounds", global_bounds),
        ("blow-up time", blowup),
        ("one-dimensional positive pair", positive_pair),
        ("separable counterexample", counterexample),
        ("positive results", positive_results),
        ("round trips", round_trips),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = check();
        failed += usize::from(!o.pass);
        println!(
            "criterion {}: {} {name} ({:.2} s): {}",
            k + 1,
            if o.pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64(),
            o.detail
        );
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
