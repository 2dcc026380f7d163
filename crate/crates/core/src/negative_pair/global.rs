//! Global extension of the local curve, growth bounds and blow-up time.

use serde::Serialize;

use crate::curve::{PhaseCurve, PhaseSample};
use crate::error::{Error, Result};
use crate::negative_pair::local::LocalSolve;
use crate::numerics::fd::{apply, fornberg_weights};
use crate::numerics::ode::{solve_to_nodes, OdeOptions};
use crate::phase_plane::{linear_coeff, zero_order, PhaseRhs};
use crate::real::Real;

/// Default end of the global integration.
pub const DEFAULT_ETA_MAX: f64 = 1e3;
/// Output spacing in `ln(eta - 1)`.
pub const GLOBAL_LOG_STEP: f64 = 1.0 / 256.0;

#[derive(Debug, Clone)]
pub struct GlobalSolve<T> {
    /// Local samples followed by the extension up to `eta_max`.
    pub curve: PhaseCurve<T>,
    pub lambda_cal: T,
    pub eta0: T,
    /// Index of the first sample beyond `eta0`.
    pub junction: usize,
}

/// Integrates `(zeta, I)` from `(eta0, zeta(eta0), 0)` to `eta_max`.
pub fn extend_global<T: Real>(local: &LocalSolve<T>, eta_max: T) -> Result<GlobalSolve<T>> {
    let params = local.curve.params;
    let n = params.n;
    let nf = T::from_usize_lossy(n);
    if !(params.theta > (nf - T::lit(7.0)) / (nf * nf)) {
        return Err(Error::Parameter(format!("theta = {} must exceed (n-7)/n^2", params.theta)));
    }
    let eta0 = params.eta0;
    if !(eta_max > eta0) {
        return Err(Error::Parameter(format!("eta_max = {eta_max} must exceed eta0 = {eta0}")));
    }
    let start = *local.curve.samples.last().expect("local curve is nonempty");
    let one = T::one();
    let x0 = (eta0 - one).ln();
    let x_end = (eta_max - one).ln();
    let dx = T::lit(GLOBAL_LOG_STEP);
    let mut nodes = Vec::new();
    let mut k = 1;
    loop {
        let x = x0 + dx * T::from_usize_lossy(k);
        if x >= x_end - dx / T::lit(4.0) {
            break;
        }
        nodes.push(one + x.exp());
        k += 1;
    }
    nodes.push(eta_max);
    let rhs = PhaseRhs::new(params);
    let opts = OdeOptions { rtol: T::lit(1e-13), atol: T::lit(1e-15), ..OdeOptions::default() };
    let (states, _) = solve_to_nodes(
        |eta, y: &[T; 2]| {
            let (dz, di) = rhs.eval(eta, y[0], y[1])?;
            Ok([dz, di])
        },
        eta0,
        [start.zeta, T::zero()],
        &nodes,
        &opts,
    )
    .map_err(|e| match e {
        Error::StepFailure { x } => Error::PositivityLoss { eta: x },
        other => other,
    })?;
    let mut samples = local.curve.samples.clone();
    let junction = samples.len();
    for (eta, s) in nodes.iter().zip(&states) {
        if !(s[0] > T::zero()) {
            return Err(Error::PositivityLoss { eta: eta.as_f64() });
        }
        let (slope, _) = rhs.eval(*eta, s[0], s[1])?;
        samples.push(PhaseSample { eta: *eta, zeta: s[0], integral: s[1], slope });
    }
    let curve = PhaseCurve::new(params, local.curve.taylor, samples)?;
    Ok(GlobalSolve { curve, lambda_cal: local.lambda_cal, eta0, junction })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundCheck<T> {
    /// Equation label of the bound.
    pub id: &'static str,
    pub holds: bool,
    /// Smallest slack over the checked samples.
    pub margin: T,
    pub from_eta: T,
    pub to_eta: T,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthBounds<T> {
    /// Largest `rho` with `zeta >= rho (eta - 1)` on every sample.
    pub rho: T,
    /// `None` when the last octave does not certify quadratic growth.
    pub eps0: Option<T>,
    pub eta1: Option<T>,
    /// `None` when `zeta > eta^2` at the last sample or the bound is not claimed.
    pub eta2: Option<T>,
    pub upper_claimed: bool,
    pub checks: Vec<BoundCheck<T>>,
}

/// Fraction of the tail minimum used for `eps0`.
pub const EPS0_SHRINK: f64 = 0.9;

/// Witness extraction for the linear lower barrier, the quadratic lower
/// bound and the quadratic upper bound by full scans of the samples.
pub fn growth_bounds_check<T: Real>(curve: &PhaseCurve<T>, n: usize, theta: T) -> GrowthBounds<T> {
    let s = &curve.samples;
    let one = T::one();
    let (first, last) = (s[0].eta, s[s.len() - 1].eta);
    let rho = s.iter().map(|p| p.zeta / (p.eta - one)).fold(T::infinity(), T::min);
    let mut checks = vec![BoundCheck { id: "zeta >= rho (eta - 1)", holds: rho > T::zero(), margin: rho, from_eta: first, to_eta: last }];

    let ratio = |p: &PhaseSample<T>| p.zeta / (p.eta * p.eta);
    let octave_min = |a: T, b: T| s.iter().filter(|p| p.eta >= a && p.eta <= b).map(ratio).fold(T::infinity(), T::min);
    let two = T::lit(2.0);
    let last_octave = octave_min(last / two, last);
    let previous_octave = octave_min(last / (two * two), last / two);
    // quadratic growth: the ratio must not decay across the last two octaves
    let certified = last_octave.is_finite()
        && previous_octave.is_finite()
        && last_octave > T::zero()
        && last_octave >= T::lit(0.75) * previous_octave;
    let (eps0, eta1) = if certified {
        let eps0 = T::lit(EPS0_SHRINK) * last_octave;
        let mut idx = s.len() - 1;
        while idx > 0 && ratio(&s[idx - 1]) > eps0 {
            idx -= 1;
        }
        let eta1 = s[idx].eta;
        let margin = s[idx..].iter().map(|p| ratio(p) - eps0).fold(T::infinity(), T::min);
        checks.push(BoundCheck { id: "zeta > eps0 eta^2", holds: margin > T::zero(), margin, from_eta: eta1, to_eta: last });
        (Some(eps0), Some(eta1))
    } else {
        checks.push(BoundCheck { id: "zeta > eps0 eta^2", holds: false, margin: T::zero(), from_eta: last, to_eta: last });
        (None, None)
    };

    let upper_claimed = crate::model::ModelParams::upper_bound_claimed(n, theta);
    let eta2 = if upper_claimed {
        let mut idx = s.len();
        while idx > 0 && ratio(&s[idx - 1]) <= one {
            idx -= 1;
        }
        if idx == s.len() {
            let worst = s.iter().rev().take_while(|p| ratio(p) > one).map(|p| one - ratio(p)).fold(T::infinity(), T::min);
            checks.push(BoundCheck { id: "zeta <= eta^2", holds: false, margin: worst, from_eta: last, to_eta: last });
            None
        } else {
            let margin = s[idx..].iter().map(|p| one - ratio(p)).fold(T::infinity(), T::min);
            checks.push(BoundCheck { id: "zeta <= eta^2", holds: margin > T::zero(), margin, from_eta: s[idx].eta, to_eta: last });
            Some(s[idx].eta)
        }
    } else {
        None
    };
    GrowthBounds { rho, eps0, eta1, eta2, upper_claimed, checks }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Blowup<T> {
    /// `int_{eta0}^{eta_max} ds / zeta + tail_bound`.
    pub t_inf: T,
    /// `1 / (eps0 eta_max)`.
    pub tail_bound: T,
    pub r_inf: T,
}

/// Blow-up time from the sampled curve plus the analytic quadratic tail.
pub fn blowup_time<T: Real>(curve: &PhaseCurve<T>, eta0: T) -> Result<Blowup<T>> {
    if curve.is_degenerate() {
        return Err(Error::TailUnbounded);
    }
    let bounds = growth_bounds_check(curve, curve.params.n, curve.params.theta);
    let eps0 = bounds.eps0.ok_or(Error::TailUnbounded)?;
    let interp = curve.interpolant(eta0)?;
    let tail_bound = T::one() / (eps0 * curve.eta_max);
    let t_inf = interp.t_end() + tail_bound;
    Ok(Blowup { t_inf, tail_bound, r_inf: t_inf.exp() })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseResidual<T> {
    pub max_relative: T,
    pub at_eta: T,
    pub nodes: usize,
}

/// Residual of the phase ODE with `zeta'` from five-point differences on the
/// samples, relative to `1 + sum |terms|`.
pub fn phase_residual<T: Real>(curve: &PhaseCurve<T>) -> Result<PhaseResidual<T>> {
    let s = &curve.samples;
    if s.len() < 5 {
        return Err(Error::GridTooCoarse("phase residual needs at least 5 samples".into()));
    }
    let p = curve.params;
    let eta: Vec<T> = s.iter().map(|q| q.eta).collect();
    let zeta: Vec<T> = s.iter().map(|q| q.zeta).collect();
    let mut worst = T::zero();
    let mut at = eta[2];
    for i in 2..s.len() - 2 {
        let w = fornberg_weights(eta[i], &eta[i - 2..i + 3], 1);
        let dz = apply(&w, 1, &zeta[i - 2..i + 3]);
        let (e, z) = (eta[i], zeta[i]);
        let terms = [
            -z * dz,
            (p.theta + T::one()) * z * z / e,
            z * linear_coeff(p.n, p.theta, e),
            zero_order(p.n, p.theta, e),
            -p.lambda3 * e * e * s[i].integral.exp(),
        ];
        let sum: T = terms.iter().copied().sum();
        let scale = T::one() + terms.iter().map(|t| t.abs()).sum::<T>();
        let rel = sum.abs() / scale;
        if rel > worst {
            worst = rel;
            at = e;
        }
    }
    Ok(PhaseResidual { max_relative: worst, at_eta: at, nodes: s.len() - 4 })
}
