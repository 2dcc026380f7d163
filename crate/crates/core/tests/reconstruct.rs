use affmax::curve::{PhaseCurve, PhaseSample};
use affmax::model::{ModelParams, RadialProfile, TaylorData};
use affmax::pipeline::{solve_negative, NegativeOptions};
use affmax::reconstruct::*;
use proptest::prelude::*;

fn params() -> ModelParams<f64> {
    ModelParams::new(2, 0.55, 0.0, 2.0).unwrap()
}

fn taylor() -> TaylorData<f64> {
    TaylorData { d1: 2.0, alpha: 0.0, beta: 0.0, gamma: 0.0 }
}

/// Phase curve of `v = r (1 + r^2)`: `eta = 1 + 2 r^2 / (1 + r^2)`, `zeta = (eta - 1)(3 - eta)`.
fn cubic_curve() -> PhaseCurve<f64> {
    let samples = (0..=800)
        .map(|k| {
            let s = -12.0 + 0.025 * k as f64;
            let excess = 2.0 / (1.0 + (-s).exp());
            let eta = 1.0 + excess;
            let room = 2.0 / (1.0 + s.exp());
            PhaseSample { eta, zeta: excess * room, integral: excess.ln() - 2.0 * room.ln(), slope: 4.0 - 2.0 * eta }
        })
        .collect();
    PhaseCurve::new(params(), taylor(), samples).unwrap()
}

/// Phase curve of `v = r e^r`: `eta = 1 + r`, `zeta = eta - 1`.
fn exp_curve() -> PhaseCurve<f64> {
    let samples = (0..=1000)
        .map(|k| {
            let excess = (-28.0 + 0.031 * k as f64).exp();
            let eta = 1.0 + excess;
            PhaseSample { eta, zeta: excess, integral: excess - 1.0 + 2.0 * excess.ln(), slope: 1.0 }
        })
        .collect();
    PhaseCurve::new(params(), taylor(), samples).unwrap()
}

fn uniform(r_max: f64, step: f64) -> Vec<f64> {
    let cells = (r_max / step).round() as usize;
    (0..=cells).map(|k| r_max * k as f64 / cells as f64).collect()
}

#[test]
fn cubic_profile_round_trip() {
    let grid = uniform(3.0, 0.01);
    let p = rebuild_profile(&cubic_curve(), 2.0, 2.0, 1.0, &grid).unwrap();
    for ((&r, &v), &u) in p.r.iter().zip(&p.v).zip(&p.u) {
        let (ve, ue) = (r * (1.0 + r * r), r * r / 2.0 + r.powi(4) / 4.0);
        assert!((v - ve).abs() <= 1e-6 * ve.max(1.0), "r = {r}: v = {v} vs {ve}");
        assert!((u - ue).abs() <= 1e-6 * ue.max(1.0), "r = {r}: u = {u} vs {ue}");
    }
}

#[test]
fn exponential_profile_round_trip() {
    let grid = uniform(4.0, 0.01);
    let e = 1f64.exp();
    let p = rebuild_profile(&exp_curve(), 2.0, e, 1.0, &grid).unwrap();
    for ((&r, &v), &u) in p.r.iter().zip(&p.v).zip(&p.u) {
        let (ve, ue) = (r * r.exp(), (r - 1.0) * r.exp() + 1.0);
        assert!((v - ve).abs() <= 1e-6 * ve.max(1.0), "r = {r}: v = {v} vs {ve}");
        assert!((u - ue).abs() <= 1e-6 * ue.max(1.0), "r = {r}: u = {u} vs {ue}");
    }
}

#[test]
fn t_and_etabar_match_closed_form() {
    let curve = cubic_curve();
    let etas = [1.2, 2.0, 2.5, 2.9];
    let ts = t_of_eta(&curve, 2.0, &etas).unwrap();
    for (&eta, &t) in etas.iter().zip(&ts) {
        let r2 = (eta - 1.0) / (3.0 - eta);
        assert!((t - 0.5 * r2.ln()).abs() < 1e-8, "eta = {eta}: t = {t}");
    }
    let radii = [1e-6, 0.01, 0.5, 1.0, 2.0, 5.0];
    for s in etabar_of_r(&curve, 2.0, 1.0, &radii).unwrap() {
        let exact = 2.0 * s.r * s.r / (1.0 + s.r * s.r);
        assert!((s.excess - exact).abs() <= 1e-8 * exact, "r = {}: {} vs {exact}", s.r, s.excess);
    }
}

#[test]
fn origin_excess_is_quadratic() {
    let b = origin_bound_check(&cubic_curve(), 2.0, 1.0, 0.5, 200).unwrap();
    assert!(b.holds);
    assert!((b.c_quadratic - 2.0).abs() < 1e-6, "{b:?}");
    assert!((b.c_lower - 1.6).abs() < 1e-6, "{b:?}");
}

#[test]
fn degenerate_branch_is_a_paraboloid() {
    let curve = PhaseCurve::degenerate(params());
    let grid = uniform(2.0, 0.05);
    let p = rebuild_profile(&curve, 1.0, 3.0, 1.5, &grid).unwrap();
    for ((&r, &v), &u) in p.r.iter().zip(&p.v).zip(&p.u) {
        assert!((v - 2.0 * r).abs() < 1e-12 && (u - r * r).abs() < 1e-12);
    }
    assert!(etabar_of_r(&curve, 1.0, 1.5, &[0.3, 1.0]).unwrap().iter().all(|s| s.excess == 0.0));
    assert!(rebuild_profile(&curve, 1.0, 3.0, 1.5, &[0.1, 0.2]).is_err());
}

#[test]
fn origin_derivatives_of_cubic_profile() {
    let curve = cubic_curve();
    let p = rebuild_profile(&curve, 2.0, 2.0, 1.0, &uniform(1.0, 0.01)).unwrap();
    let o = origin_report(&p, &curve, 1.5).unwrap();
    assert_eq!(o.v_at_zero, 0.0);
    assert!((o.v1 - 1.0).abs() < 1e-6 && o.v2.abs() < 1e-6 && (o.v3 - 6.0).abs() < 1e-3 && o.v4.abs() < 1e-3, "{o:?}");
    assert!(!o.zeta_slope_monotone);
}

#[test]
fn converged_profile_is_odd_and_convex_at_origin() {
    let run = solve_negative::<f64>(2, 0.55, &NegativeOptions::default()).unwrap();
    let p = run.profile(1.0, 0.01, 3.0).unwrap();
    let o = origin_report(&p, &run.global.curve, 1.05).unwrap();
    assert_eq!(o.v_at_zero, 0.0);
    assert!(o.v1 > 0.0 && o.v2.abs() < 1e-6 * o.v1, "{o:?}");
    assert!(o.zeta_slope_monotone && o.zeta_second_positive, "{o:?}");
    assert!(p.v.windows(2).all(|w| w[1] > w[0]));
    let i = p.r.iter().position(|&r| r >= 1.0).unwrap();
    assert!((p.r[i] - 1.0).abs() < 1e-9 && (p.v[i] - 1.0).abs() < 1e-9);
}

#[test]
fn logarithmic_blowup_is_divergent() {
    // u = -ln(T - ln r), v = 1 / (r (T - ln r))
    let t_inf = 1.0f64;
    let mut grid = vec![0.0];
    grid.extend((0..=300).map(|k| (t_inf - (-(k as f64) * 0.04).exp()).exp()));
    let p = RadialProfile::from_fn(2, grid, |r| if r == 0.0 { 0.0 } else { 1.0 / (r * (t_inf - r.ln())) }, |r| {
        if r == 0.0 {
            0.0
        } else {
            -(t_inf - r.ln()).ln()
        }
    })
    .unwrap();
    let c = large_condition_check(&p, Some(t_inf), 1.0, 1.0);
    assert!(c.divergent, "{c:?}");
    assert!((c.divergence_rate - 1.0).abs() < 1e-9 && c.fit_residual < 1e-9, "{c:?}");
    assert!(c.boundary_gap <= BOUNDARY_GAP && c.tail_nodes >= 3);
    assert_eq!(c.r_inf, Some(t_inf.exp()));
}

#[test]
fn no_blowup_passes_vacuously() {
    let p = rebuild_profile(&PhaseCurve::degenerate(params()), 1.0, 1.0, 1.0, &uniform(2.0, 0.1)).unwrap();
    let c = large_condition_check(&p, None, 1.0, 1.0);
    assert!(c.holds && c.divergent && c.r_inf.is_none());
}

#[test]
fn converged_profile_meets_boundary_lower_bound() {
    // v(r) >= v0 (T - ln r0) / (T - ln r) for r0 <= r < R on the (2, 0.55) profile
    let opts = NegativeOptions { eta_max: 1e4, ..Default::default() };
    let run = solve_negative(2, 0.55, &opts).unwrap();
    let p = run.profile(1.0, 0.01, 3.0).unwrap();
    let c = large_condition_check(&p, Some(run.blowup.t_inf), ANCHOR_RADIUS, 1.0);
    assert!(c.divergent, "{c:?}");
    assert!(c.bound_holds, "min v / bound = {}", c.min_bound_ratio);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn anchor_scaling_covariance(scale in 0.25f64..4.0, v0 in 0.1f64..10.0) {
        let curve = cubic_curve();
        let grid = uniform(2.0, 0.05);
        let scaled: Vec<f64> = grid.iter().map(|&r| scale * r).collect();
        let a = rebuild_profile(&curve, 2.0, v0, 1.0, &grid).unwrap();
        let b = rebuild_profile(&curve, 2.0, v0, scale, &scaled).unwrap();
        let c = rebuild_profile(&curve, 2.0, 2.0 * v0, 1.0, &grid).unwrap();
        for i in 0..grid.len() {
            prop_assert!((a.v[i] - b.v[i]).abs() <= 1e-9 * a.v[i].max(1e-9));
            prop_assert!((scale * a.u[i] - b.u[i]).abs() <= 1e-9 * b.u[i].max(1e-9));
            prop_assert!((2.0 * a.v[i] - c.v[i]).abs() <= 1e-12 * c.v[i].max(1e-12));
        }
    }
}
