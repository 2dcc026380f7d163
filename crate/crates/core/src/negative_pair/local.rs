//! Local solution on `[1, eta0]` by damped iteration of the integral map.

use serde::Serialize;

use crate::curve::{PhaseCurve, PhaseSample};
use crate::error::{Error, Result};
use crate::model::{ModelParams, TaylorData};
use crate::negative_pair::taylor::{series_taylor, taylor_coeffs, CalibrationTarget};
use crate::numerics::cheb::ChebFit;
use crate::numerics::cumulative::cumulative_uniform;
use crate::numerics::quad::{integrate, QuadOptions};
use crate::phase_plane::{cubic_factor, linear_coeff};
use crate::real::Real;

/// Bands defining the admissible set of candidates on `[1, eta0]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GammaSetSpec<T> {
    pub eta0: T,
    pub alpha: T,
    pub beta: T,
    pub gamma: T,
    pub sigma: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Membership<T> {
    pub holds: bool,
    /// `|phi(1)|`.
    pub value_at_one: T,
    /// `|phi'(1) - 2|`.
    pub slope_at_one: T,
    /// Smallest distance to the edge of each band, negative when violated.
    pub second_margin: T,
    pub third_margin: T,
    pub fourth_margin: T,
}

/// Degree of the Chebyshev fit used to differentiate sampled candidates.
const MEMBERSHIP_DEGREE: usize = 10;

impl<T: Real> GammaSetSpec<T> {
    /// Checks the band conditions at every sample of `zeta = (eta - 1) q` on a uniform grid.
    pub fn check(&self, eta: &[T], q: &[T]) -> Result<Membership<T>> {
        let fit = ChebFit::fit(eta, q, MEMBERSHIP_DEGREE.min(eta.len().saturating_sub(1)))?;
        let d1 = fit.derivative();
        let d2 = d1.derivative();
        let d3 = d2.derivative();
        let d4 = d3.derivative();
        let tol = T::lit(1e-6);
        let value_at_one = (eta[0] - T::one()).abs() * q[0].abs();
        let slope_at_one = (fit.eval(T::one()) - T::lit(2.0)).abs();
        let mut m2 = T::infinity();
        let mut m3 = T::infinity();
        let mut m4 = T::infinity();
        for &e in eta {
            let x = e - T::one();
            let z2 = T::lit(2.0) * d1.eval(e) + x * d2.eval(e);
            let z3 = T::lit(3.0) * d2.eval(e) + x * d3.eval(e);
            let z4 = T::lit(4.0) * d3.eval(e) + x * d4.eval(e);
            m2 = m2.min(self.sigma - (z2 - self.alpha).abs());
            m3 = m3.min(self.sigma - (z3 - self.beta).abs());
            m4 = m4.min(T::one() - (z4 - self.gamma).abs());
        }
        let holds = value_at_one < tol && slope_at_one < T::lit(1e-4) && m2 >= T::zero() && m3 >= T::zero() && m4 >= T::zero();
        Ok(Membership { holds, value_at_one, slope_at_one, second_margin: m2, third_margin: m3, fourth_margin: m4 })
    }
}

/// Calibration constant `lambda(phi, eta0) = target / Phi(1+)` with
/// `Phi(eta) = exp(int_{eta0}^{eta} (s+1)/phi) / phi(eta)`.
///
/// The singular part `1/(s-1)` is integrated analytically.
pub fn calibrate_lambda_with<T: Real, F: Fn(T) -> T>(phi: F, eta0: T, target: T) -> Result<T> {
    if !(eta0 > T::one()) {
        return Err(Error::Parameter(format!("eta0 must exceed 1, got {eta0}")));
    }
    // phi'(1) from a difference quotient close to the singular point
    let probe = (eta0 - T::one()) * T::lit(1e-6);
    let slope = phi(T::one() + probe) / probe;
    if !((slope - T::lit(2.0)).abs() < T::lit(1e-3)) {
        return Err(Error::SingularityMismatch { slope: slope.as_f64() });
    }
    let regular = |s: T| (s + T::one()) / phi(s) - T::one() / (s - T::one());
    let opts = QuadOptions { abs_tol: T::lit(1e-11), rel_tol: T::lit(1e-12), ..QuadOptions::default() };
    let res = integrate(regular, T::one(), eta0, &opts)?;
    // Phi(1+) = exp(-J) / (2 (eta0 - 1)), J = int_1^{eta0} regular
    Ok(target * T::lit(2.0) * (eta0 - T::one()) * res.value.exp())
}

/// Calibration with the printed limit `4 + n(n-2)/2`.
pub fn calibrate_lambda<T: Real, F: Fn(T) -> T>(phi: F, n: usize, eta0: T) -> Result<T> {
    calibrate_lambda_with(phi, eta0, CalibrationTarget::Printed.value(n))
}

/// `lambda * Phi(eta)` by direct quadrature of the unregularized integrand.
pub fn limit_product<T: Real, F: Fn(T) -> T>(phi: F, lambda: T, eta0: T, eta: T) -> Result<T> {
    let opts = QuadOptions { abs_tol: T::lit(1e-12), rel_tol: T::lit(1e-11), ..QuadOptions::default() };
    let breaks = geometric_breaks(eta, eta0, 24);
    let mut total = T::zero();
    for w in breaks.windows(2) {
        total = total + integrate(|s| (s + T::one()) / phi(s), w[0], w[1], &opts)?.value;
    }
    Ok(lambda * (-total).exp() / phi(eta))
}

fn geometric_breaks<T: Real>(a: T, b: T, pieces: usize) -> Vec<T> {
    let one = T::one();
    let (la, lb) = ((a - one).ln(), (b - one).ln());
    (0..=pieces).map(|k| one + (la + (lb - la) * T::from_usize_lossy(k) / T::from_usize_lossy(pieces)).exp()).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPointOptions<T> {
    pub eta0: T,
    pub tol: T,
    pub max_iter: usize,
    /// Defaults to `min(1/2, 3/(2(n+1)))`.
    pub damping: Option<T>,
    pub sigma: T,
    /// Uniform grid size on `[1, eta0]`.
    pub grid: usize,
    pub target: CalibrationTarget,
}

impl<T: Real> Default for FixedPointOptions<T> {
    fn default() -> Self {
        Self {
            eta0: T::lit(1.05),
            tol: T::lit(1e-12),
            max_iter: 500,
            damping: None,
            sigma: T::lit(0.5),
            grid: 2001,
            target: CalibrationTarget::Consistent,
        }
    }
}

pub fn default_damping<T: Real>(n: usize) -> T {
    T::lit(0.5).min(T::lit(1.5) / T::from_usize_lossy(n + 1))
}

/// Uniform grid on `[1, eta0]` with the frozen coefficient polynomials.
#[derive(Debug, Clone)]
pub struct LocalGrid<T> {
    pub n: usize,
    pub theta: T,
    pub eta0: T,
    pub eta: Vec<T>,
    pub step: T,
    linear: Vec<T>,
    cubic: Vec<T>,
}

impl<T: Real> LocalGrid<T> {
    pub fn new(n: usize, theta: T, eta0: T, points: usize) -> Result<Self> {
        if points < 8 {
            return Err(Error::GridTooCoarse(format!("{points} points on the local window")));
        }
        let step = (eta0 - T::one()) / T::from_usize_lossy(points - 1);
        let eta: Vec<T> = (0..points).map(|i| T::one() + step * T::from_usize_lossy(i)).collect();
        let linear = eta.iter().map(|&e| linear_coeff(n, theta, e)).collect();
        let cubic = eta.iter().map(|&e| cubic_factor(n, theta, e)).collect();
        Ok(Self { n, theta, eta0, eta, step, linear, cubic })
    }

    pub fn len(&self) -> usize {
        self.eta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eta.is_empty()
    }
}

/// One application of the integral map to `q = phi / (eta - 1)`.
#[derive(Debug, Clone)]
pub struct TStep<T> {
    /// `zeta / (eta - 1)` of the image.
    pub q: Vec<T>,
    /// Integrand `zeta'` of the image, evaluated with the frozen candidate.
    pub slope: Vec<T>,
    /// Regular part `J(eta) = int_{eta0}^{eta} ((s+1)/phi - 1/(s-1)) ds`.
    pub regular: Vec<T>,
    pub lambda: T,
}

fn extrapolate_first<T: Real>(v: &mut [T]) {
    v[0] = T::lit(4.0) * v[1] - T::lit(6.0) * v[2] + T::lit(4.0) * v[3] - v[4];
}

/// Applies the integral map: calibrates `lambda` for the candidate and
/// integrates the linearized equation for `zeta` from `zeta(1) = 0`.
pub fn apply_t<T: Real>(grid: &LocalGrid<T>, q: &[T], target: T) -> Result<TStep<T>> {
    let m = grid.len();
    let one = T::one();
    let theta = grid.theta;
    let nf = T::from_usize_lossy(grid.n);
    let em1 = grid.eta0 - one;
    let mut h = vec![T::zero(); m];
    for i in 1..m {
        let x = grid.eta[i] - one;
        h[i] = ((grid.eta[i] + one) / q[i] - one) / x;
    }
    extrapolate_first(&mut h);
    let cum = cumulative_uniform(&h, grid.step);
    let last = cum[m - 1];
    let regular: Vec<T> = cum.iter().map(|&c| c - last).collect();
    let lambda = target * T::lit(2.0) * em1 * (-regular[0]).exp();
    let mut slope = vec![T::zero(); m];
    for i in 0..m {
        let e = grid.eta[i];
        let x = e - one;
        let big_r = lambda * regular[i].exp() / (em1 * q[i]);
        slope[i] = (theta + one) * x * q[i] / e + grid.linear[i] + nf * e * grid.cubic[i] / q[i] + e * e * big_r;
    }
    let z = cumulative_uniform(&slope, grid.step);
    let mut q_new = vec![slope[0]; m];
    for i in 1..m {
        let x = grid.eta[i] - one;
        q_new[i] = z[i] / x;
        let zeta = z[i];
        if !(zeta >= T::zero() && zeta <= one) {
            return Err(Error::BlowupInsideWindow { eta: grid.eta[i].as_f64() });
        }
    }
    Ok(TStep { q: q_new, slope, regular, lambda })
}

#[derive(Debug, Clone)]
pub struct LocalSolve<T> {
    /// Samples on `(1, eta0]`.
    pub curve: PhaseCurve<T>,
    /// `-lambda'''`.
    pub lambda_cal: T,
    pub iterations: usize,
    pub contraction_history: Vec<T>,
    /// Grid including `eta = 1`, with `q = zeta / (eta - 1)` and `zeta'`.
    pub eta: Vec<T>,
    pub q: Vec<T>,
    pub slope: Vec<T>,
    pub membership: Membership<T>,
    pub gamma_set: GammaSetSpec<T>,
    /// Closed-form Taylor data, reported for comparison.
    pub printed_taylor: TaylorData<T>,
}

/// Damped iteration `q <- (1 - delta) q + delta T(q)` from the cubic Taylor seed.
pub fn fixed_point_solve<T: Real>(n: usize, theta: T, opts: &FixedPointOptions<T>) -> Result<LocalSolve<T>> {
    ModelParams::check_negative_pair(n, theta)?;
    let eta0 = opts.eta0;
    if !(eta0 > T::one()) {
        return Err(Error::Parameter(format!("eta0 must exceed 1, got {eta0}")));
    }
    let taylor = series_taylor(n, theta, opts.target)?;
    let printed_taylor = taylor_coeffs(n, theta)?;
    let delta = opts.damping.unwrap_or_else(|| default_damping(n));
    if !(delta > T::zero() && delta <= T::one()) {
        return Err(Error::Parameter(format!("damping must lie in (0, 1], got {delta}")));
    }
    let target: T = opts.target.value(n);
    let grid = LocalGrid::new(n, theta, eta0, opts.grid)?;
    let one = T::one();
    let mut q: Vec<T> = grid
        .eta
        .iter()
        .map(|&e| {
            let x = e - one;
            T::lit(2.0) + taylor.alpha / T::lit(2.0) * x + taylor.beta / T::lit(6.0) * x * x
        })
        .collect();
    let mut history = Vec::new();
    let mut step = apply_t(&grid, &q, target)?;
    let mut iterations = 0;
    loop {
        iterations += 1;
        let mut change = T::zero();
        for ((qi, &eta), &next) in q.iter_mut().zip(&grid.eta).zip(&step.q) {
            let diff = delta * (next - *qi);
            change = change.max(((eta - one) * diff).abs());
            *qi = *qi + diff;
        }
        history.push(change);
        step = apply_t(&grid, &q, target)?;
        if change < opts.tol {
            break;
        }
        if iterations >= opts.max_iter || !change.is_finite() {
            return Err(Error::NoConvergence { iterations, last_change: change.as_f64() });
        }
    }
    let gamma_set = GammaSetSpec { eta0, alpha: taylor.alpha, beta: taylor.beta, gamma: taylor.gamma, sigma: opts.sigma };
    let membership = gamma_set.check(&grid.eta, &q)?;
    if !membership.holds {
        return Err(Error::MembershipViolation(format!("{membership:?}")));
    }
    let em1 = eta0 - one;
    let samples: Vec<PhaseSample<T>> = (1..grid.len())
        .map(|i| {
            let x = grid.eta[i] - one;
            PhaseSample { eta: grid.eta[i], zeta: x * q[i], integral: (x / em1).ln() + step.regular[i], slope: step.slope[i] }
        })
        .collect();
    let params = ModelParams::new(n, theta, -step.lambda, eta0)?;
    let curve = PhaseCurve::new(params, taylor, samples)?;
    Ok(LocalSolve {
        curve,
        lambda_cal: step.lambda,
        iterations,
        contraction_history: history,
        eta: grid.eta.clone(),
        q,
        slope: step.slope,
        membership,
        gamma_set,
        printed_taylor,
    })
}

/// Two-sided bounds on `lambda(phi, eta0)` for candidates in the admissible set
/// with `phi'' <= alpha + sigma`.
pub fn lambda_bounds<T: Real>(target: T, alpha_plus_sigma: T, eta0: T) -> (T, T) {
    let em1 = eta0 - T::one();
    let k = alpha_plus_sigma;
    let lower = T::lit(8.0) * target / k * em1 / (em1 + T::lit(4.0) / k);
    let upper = em1 * target * (T::lit(2.0) + k * em1 / T::lit(2.0)) * (em1 / T::lit(2.0)).exp();
    (lower, upper)
}
