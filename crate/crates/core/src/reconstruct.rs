//! Radial profile from a phase curve: `t(eta)`, `etabar(r)`, `v(r)`, `u(r)`,
//! and the compatibility checks at the origin and at the boundary.

use serde::Serialize;

use crate::curve::{CurveInterpolant, PhaseCurve};
use crate::error::{Error, Result};
use crate::model::RadialProfile;
use crate::numerics::cumulative::cumulative_hermite;
use crate::real::Real;

/// Anchor radius where `etabar = eta0` and `v = v0`.
pub const ANCHOR_RADIUS: f64 = 1.0;

/// `t(eta) = int_{eta0}^{eta} ds / zeta(s)` at each requested `eta`.
pub fn t_of_eta<T: Real>(curve: &PhaseCurve<T>, eta0: T, etas: &[T]) -> Result<Vec<T>> {
    let it = curve.interpolant(eta0)?;
    etas.iter().map(|&e| it.t(e)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EtabarSample<T> {
    pub r: T,
    pub eta: T,
    /// `etabar - 1`, kept separately because it underflows against 1 near `r = 0`.
    pub excess: T,
}

/// Solution of `r d(etabar)/dr = zeta(etabar)` with `etabar(r0) = eta0`, via `t = ln(r / r0)`.
pub fn etabar_of_r<T: Real>(curve: &PhaseCurve<T>, eta0: T, r0: T, r_grid: &[T]) -> Result<Vec<EtabarSample<T>>> {
    if curve.is_degenerate() {
        return Ok(r_grid.iter().map(|&r| EtabarSample { r, eta: T::one(), excess: T::zero() }).collect());
    }
    let it = curve.interpolant(eta0)?;
    r_grid
        .iter()
        .map(|&r| {
            if !(r > T::zero()) {
                return Err(Error::Domain(format!("r = {r} must be positive")));
            }
            let x = it.x_of_t((r / r0).ln())?;
            let excess = x.exp();
            if !(excess > T::zero()) {
                return Err(Error::PositivityLoss { eta: 1.0 });
            }
            Ok(EtabarSample { r, eta: T::one() + excess, excess })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OriginBound<T> {
    /// `max (etabar - 1) / r^2` over the scanned radii.
    pub c_quadratic: T,
    /// `min (etabar - 1) / r^2`, positive when the excess is comparable to `r^2`.
    pub c_lower: T,
    pub holds: bool,
}

/// Scans `0 < etabar - 1 < C r^2` on `(0, r_max]`.
pub fn origin_bound_check<T: Real>(curve: &PhaseCurve<T>, eta0: T, r0: T, r_max: T, samples: usize) -> Result<OriginBound<T>> {
    let grid: Vec<T> = (1..=samples)
        .map(|k| r_max * (T::lit(-12.0) * (T::one() - T::from_usize_lossy(k) / T::from_usize_lossy(samples)) * T::LN_10()).exp())
        .collect();
    let eb = etabar_of_r(curve, eta0, r0, &grid)?;
    let ratios: Vec<T> = eb.iter().map(|s| s.excess / (s.r * s.r)).collect();
    let c_quadratic = ratios.iter().copied().fold(T::zero(), T::max);
    let c_lower = ratios.iter().copied().fold(T::infinity(), T::min);
    Ok(OriginBound { c_quadratic, c_lower, holds: c_lower > T::zero() && c_quadratic.is_finite() })
}

fn profile_values<T: Real>(it: Option<&CurveInterpolant<T>>, v0: T, r0: T, r: T) -> Result<(T, T)> {
    let Some(it) = it else {
        return Ok((v0 * r / r0, v0 / r0));
    };
    if r == T::zero() {
        let k = v0 / r0 * it.origin_log_gap().exp();
        return Ok((T::zero(), k));
    }
    let x = it.x_of_t((r / r0).ln())?;
    let k = v0 / r0 * it.log_gap_at_x(x).exp();
    Ok((k * r, k * (T::one() + x.exp())))
}

/// `v = v0 (r0 / r) exp(I(etabar(r)))` and `u = int_0^r v` on `grid`, which must start at 0.
pub fn rebuild_profile<T: Real>(curve: &PhaseCurve<T>, eta0: T, v0: T, r0: T, grid: &[T]) -> Result<RadialProfile<T>> {
    if grid.first() != Some(&T::zero()) {
        return Err(Error::Parameter("reconstruction grid must start at r = 0".into()));
    }
    let interp = if curve.is_degenerate() { None } else { Some(curve.interpolant(eta0)?) };
    let mut v = Vec::with_capacity(grid.len());
    let mut dv = Vec::with_capacity(grid.len());
    for &r in grid {
        let (a, b) = profile_values(interp.as_ref(), v0, r0, r)?;
        v.push(a);
        dv.push(b);
    }
    let u = cumulative_hermite(grid, &v, &dv);
    RadialProfile::new(curve.params.n, grid.to_vec(), v, u)
}

/// Radii `r0 exp(t(eta_i))` of the curve samples, clipped to `(r_from, r_to]`.
pub fn curve_radii<T: Real>(curve: &PhaseCurve<T>, eta0: T, r0: T, r_from: T, r_to: T) -> Result<Vec<T>> {
    let it = curve.interpolant(eta0)?;
    let mut out = Vec::new();
    for s in &curve.samples {
        let r = r0 * it.t(s.eta)?.exp();
        if r > r_from && r <= r_to && out.last().map_or(true, |&p| r > p) {
            out.push(r);
        }
    }
    Ok(out)
}

/// Uniform spacing `step` on `[0, r_split]` followed by the curve radii up to the last sample.
pub fn profile_grid<T: Real>(curve: &PhaseCurve<T>, eta0: T, r0: T, step: T, r_split: T) -> Result<Vec<T>> {
    let cells = (r_split / step).ceil().to_usize().unwrap_or(1).max(1);
    let h = r_split / T::from_usize_lossy(cells);
    let mut grid: Vec<T> = (0..=cells).map(|k| h * T::from_usize_lossy(k)).collect();
    if curve.is_degenerate() {
        return Ok(grid);
    }
    let tail = curve_radii(curve, eta0, r0, r_split, T::infinity())?;
    // keep the transition no coarser than the uniform part
    let mut last = r_split;
    for r in tail {
        while r - last > T::lit(1.5) * h {
            last = last + h;
            grid.push(last);
        }
        grid.push(r);
        last = r;
    }
    Ok(grid)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LargeCondition<T> {
    pub holds: bool,
    /// Lower bound on `v` at every tail node.
    pub bound_holds: bool,
    /// `u` diverges at the boundary: the fitted rate stays positive and does not
    /// decay between the inner and outer halves of a tail reaching the boundary.
    pub divergent: bool,
    /// `None` for profiles without a finite boundary.
    pub r_inf: Option<T>,
    /// `min v / (v0 (T - ln r0) / (T - ln r))` on the tail; at least 1 when the bound holds.
    pub min_bound_ratio: T,
    /// Coefficient `B` of the fit `u = A - B ln(T - ln r)` on the outer half of the tail.
    pub divergence_rate: T,
    /// Outer over inner fitted rate; near 0 for a bounded `u`.
    pub rate_ratio: T,
    pub fit_residual: T,
    /// `1 - r_last / R`.
    pub boundary_gap: T,
    pub tail_nodes: usize,
}

/// Relative distance to the boundary required of the last node.
pub const BOUNDARY_GAP: f64 = 1e-3;
/// Smallest outer-to-inner rate ratio accepted as divergence.
pub const RATE_RATIO: f64 = 0.5;
/// Tail used by [`large_condition_check`]: `T - ln r <= TAIL_WIDTH`.
pub const TAIL_WIDTH: f64 = 0.25;

/// Growth of `v` and `u` towards `R = exp(t_inf)`.
pub fn large_condition_check<T: Real>(profile: &RadialProfile<T>, t_inf: Option<T>, r0: T, v0: T) -> LargeCondition<T> {
    let Some(t_inf) = t_inf else {
        return LargeCondition {
            holds: true,
            bound_holds: true,
            divergent: true,
            r_inf: None,
            min_bound_ratio: T::infinity(),
            divergence_rate: T::infinity(),
            rate_ratio: T::one(),
            fit_residual: T::zero(),
            boundary_gap: T::zero(),
            tail_nodes: 0,
        };
    };
    let r_inf = t_inf.exp();
    let log_r0 = r0.ln();
    let mut min_ratio = T::infinity();
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for ((&r, &v), &u) in profile.r.iter().zip(&profile.v).zip(&profile.u) {
        if r < r0 || !(r > T::zero()) {
            continue;
        }
        let gap = t_inf - r.ln();
        let bound = v0 * (t_inf - log_r0) / gap;
        min_ratio = min_ratio.min(v / bound);
        if gap <= T::lit(TAIL_WIDTH) {
            xs.push(-gap.ln());
            ys.push(u);
        }
    }
    // split the tail at the midpoint of s = -ln(T - ln r)
    let mid = match (xs.first(), xs.last()) {
        (Some(&a), Some(&b)) => (a + b) / T::lit(2.0),
        _ => T::zero(),
    };
    let split = xs.iter().position(|&s| s > mid).unwrap_or(xs.len());
    let (inner, _) = linear_fit(&xs[..split], &ys[..split]);
    let (rate, resid) = linear_fit(&xs[split..], &ys[split..]);
    let rate_ratio = if inner > T::zero() { rate / inner } else { T::zero() };
    let r_last = profile.r.last().copied().unwrap_or(T::zero());
    let boundary_gap = T::one() - r_last / r_inf;
    let bound_holds = min_ratio >= T::one();
    let divergent = rate > T::zero()
        && rate_ratio >= T::lit(RATE_RATIO)
        && split >= 3
        && xs.len() - split >= 3
        && boundary_gap <= T::lit(BOUNDARY_GAP);
    LargeCondition {
        holds: bound_holds && divergent,
        bound_holds,
        divergent,
        r_inf: Some(r_inf),
        min_bound_ratio: min_ratio,
        divergence_rate: rate,
        rate_ratio,
        fit_residual: resid,
        boundary_gap,
        tail_nodes: xs.len(),
    }
}

/// Slope and relative RMS residual of a least-squares line.
fn linear_fit<T: Real>(x: &[T], y: &[T]) -> (T, T) {
    let n = T::from_usize_lossy(x.len());
    if x.len() < 2 {
        return (T::zero(), T::infinity());
    }
    let mx = x.iter().copied().sum::<T>() / n;
    let my = y.iter().copied().sum::<T>() / n;
    let sxy: T = x.iter().zip(y).map(|(&a, &b)| (a - mx) * (b - my)).sum();
    let sxx: T = x.iter().map(|&a| (a - mx) * (a - mx)).sum();
    let slope = sxy / sxx;
    let rss: T = x.iter().zip(y).map(|(&a, &b)| (b - my - slope * (a - mx)).powi(2)).sum();
    let syy: T = y.iter().map(|&b| (b - my) * (b - my)).sum();
    (slope, (rss / syy.max(T::min_positive_value())).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OriginReport<T> {
    pub v_at_zero: T,
    pub v1: T,
    pub v2: T,
    pub v3: T,
    pub v4: T,
    /// `zeta'` non-decreasing over every sample.
    pub zeta_slope_monotone: bool,
    /// `zeta'' > 0` on the local window.
    pub zeta_second_positive: bool,
    /// `zeta''''(1)` from the series; its sign is reported, not asserted.
    pub zeta_fourth_at_one: T,
}

/// Finite-difference derivatives of `v` at `r = 0` and sign conditions on the curve.
pub fn origin_report<T: Real>(profile: &RadialProfile<T>, curve: &PhaseCurve<T>, local_end: T) -> Result<OriginReport<T>> {
    let d = profile
        .derivatives_at(0)
        .ok_or_else(|| Error::GridTooCoarse("no centred stencil at r = 0".into()))?;
    let slopes: Vec<T> = curve.samples.iter().map(|s| s.slope).collect();
    let tol = T::lit(1e-9);
    let zeta_slope_monotone = slopes.windows(2).all(|w| w[1] >= w[0] - tol * (T::one() + w[0].abs()));
    let local: Vec<_> = curve.samples.iter().filter(|s| s.eta <= local_end).collect();
    let zeta_second_positive = local.windows(2).all(|w| (w[1].slope - w[0].slope) / (w[1].eta - w[0].eta) > T::zero());
    Ok(OriginReport {
        v_at_zero: profile.v[0],
        v1: d[0],
        v2: d[1],
        v3: d[2],
        v4: d[3],
        zeta_slope_monotone,
        zeta_second_positive,
        zeta_fourth_at_one: curve.taylor.gamma,
    })
}
