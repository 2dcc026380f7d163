//! The autonomous phase-plane ODE, its stationary solutions and the
//! pointwise sign argument excluding non-degenerate radial solutions for
//! `n >= 3`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{radial_residual, ModelParams, RadialProfile};
use crate::real::Real;

/// Coefficient polynomials of the phase ODE.
#[derive(Debug, Clone, Copy)]
pub struct PhaseRhs<T> {
    pub params: ModelParams<T>,
}

/// `[2n theta - (2n-1)] eta - [2n theta - 1]`.
pub fn linear_coeff<T: Real>(n: usize, theta: T, eta: T) -> T {
    let two_n = T::from_usize_lossy(2 * n);
    (two_n * theta - (two_n - T::one())) * eta - (two_n * theta - T::one())
}

/// `[n theta - (n-1)] eta - [n theta - 1]`.
pub fn cubic_factor<T: Real>(n: usize, theta: T, eta: T) -> T {
    let nf = T::from_usize_lossy(n);
    (nf * theta - (nf - T::one())) * eta - (nf * theta - T::one())
}

/// `n eta (eta - 1) [n theta - (n-1)] eta - [n theta - 1]`.
pub fn zero_order<T: Real>(n: usize, theta: T, eta: T) -> T {
    T::from_usize_lossy(n) * eta * (eta - T::one()) * cubic_factor(n, theta, eta)
}

impl<T: Real> PhaseRhs<T> {
    pub fn new(params: ModelParams<T>) -> Self {
        Self { params }
    }

    /// `(d zeta / d eta, dI / d eta)` without domain checks.
    #[inline]
    pub fn eval_unchecked(&self, eta: T, zeta: T, integral: T) -> (T, T) {
        let p = &self.params;
        let one = T::one();
        let dzeta = (p.theta + one) * zeta / eta
            + linear_coeff(p.n, p.theta, eta)
            + (zero_order(p.n, p.theta, eta) - p.lambda3 * eta * eta * integral.exp()) / zeta;
        (dzeta, (eta + one) / zeta)
    }

    pub fn eval(&self, eta: T, zeta: T, integral: T) -> Result<(T, T)> {
        if !(zeta > T::zero()) {
            return Err(Error::Domain(format!("zeta = {zeta} must be positive")));
        }
        if !(eta > T::one()) {
            return Err(Error::Domain(format!("eta = {eta} must exceed 1")));
        }
        Ok(self.eval_unchecked(eta, zeta, integral))
    }
}

/// Right-hand side of the phase ODE solved for `zeta'`, with `dI/d eta = (eta+1)/zeta`.
pub fn phase_rhs<T: Real>(eta: T, zeta: T, integral: T, params: &ModelParams<T>) -> Result<(T, T)> {
    PhaseRhs::new(*params).eval(eta, zeta, integral)
}

/// Stationary values of `eta`: always 1, plus `(n theta - 1)/(n theta - (n-1))` when positive.
pub fn stationary_eta<T: Real>(n: usize, theta: T) -> Vec<T> {
    let mut out = vec![T::one()];
    let nf = T::from_usize_lossy(n);
    let den = nf * theta - (nf - T::one());
    if n > 1 && den != T::zero() {
        let root = (nf * theta - T::one()) / den;
        if root > T::zero() && (root - T::one()).abs() > T::lit(1e-14) {
            out.push(root);
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SignWitness<T> {
    pub eta: T,
    /// Sign of `phi'` forced on every trial `phi`; 0 when the sign is not uniform.
    pub forced_sign: i8,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BernsteinRadialReport<T> {
    pub n: usize,
    pub theta: T,
    pub window: (T, T),
    pub samples: usize,
    pub pass: bool,
    pub witnesses: Vec<SignWitness<T>>,
    #[serde(skip)]
    pub stationary_crossings: Vec<T>,
}

/// Default half-width of the window around `eta = 1`.
pub const BERNSTEIN_WINDOW: f64 = 0.05;

/// Trial values of `phi = eta^{-2(theta+1)} zeta^2`: 0 and a geometric grid up to 1.
fn trial_phi<T: Real>() -> Vec<T> {
    let mut v = vec![T::zero()];
    v.extend((0..=24).map(|k| T::lit(10f64.powf(-12.0 + 0.5 * k as f64))));
    v
}

/// `phi'` forced by the transformed phase ODE on the branch `sign(zeta) = branch`.
pub fn forced_phi_slope<T: Real>(n: usize, theta: T, eta: T, phi: T, branch: T) -> T {
    let two = T::lit(2.0);
    let one = T::one();
    branch * two * phi.sqrt() * eta.powf(-(theta + one)) * linear_coeff(n, theta, eta)
        + two * T::from_usize_lossy(n) * eta.powf(-(two * theta + one)) * (eta - one) * cubic_factor(n, theta, eta)
}

/// Checks that positive solutions above `eta = 1` (and negative ones below)
/// are excluded by the sign of `phi'` at every sample of the window.
pub fn bernstein_radial_check<T: Real>(
    n: usize,
    theta: T,
    window: (T, T),
    samples: usize,
) -> Result<BernsteinRadialReport<T>> {
    if n < 3 {
        return Err(Error::Parameter(format!("the radial uniqueness check needs n >= 3, got {n}")));
    }
    if !(theta > T::zero()) {
        return Err(Error::Parameter(format!("theta must be positive, got {theta}")));
    }
    let (lo, hi) = window;
    if !(hi > lo && lo > T::zero()) || samples < 2 {
        return Err(Error::Parameter("window must be a nonempty positive interval with at least 2 samples".into()));
    }
    let trials = trial_phi::<T>();
    let mut witnesses = Vec::with_capacity(samples);
    let mut pass = true;
    for k in 0..samples {
        let eta = lo + (hi - lo) * T::from_usize_lossy(k) / T::from_usize_lossy(samples - 1);
        if eta == T::one() {
            continue;
        }
        let above = eta > T::one();
        let branch = if above { T::one() } else { -T::one() };
        let slopes: Vec<T> = trials.iter().map(|&phi| forced_phi_slope(n, theta, eta, phi, branch)).collect();
        let forced_sign = if slopes.iter().all(|&s| s < T::zero()) {
            -1
        } else if slopes.iter().all(|&s| s > T::zero()) {
            1
        } else {
            0
        };
        // positivity of phi leaving eta_k is contradicted by phi' < 0 above 1, phi' > 0 below
        let contradicts = if above { forced_sign == -1 } else { forced_sign == 1 };
        pass &= contradicts;
        witnesses.push(SignWitness { eta, forced_sign });
    }
    let stationary_crossings: Vec<T> = witnesses
        .windows(2)
        .filter(|w| cubic_factor(n, theta, w[0].eta).signum() != cubic_factor(n, theta, w[1].eta).signum())
        .map(|_| {
            let nf = T::from_usize_lossy(n);
            (nf * theta - T::one()) / (nf * theta - (nf - T::one()))
        })
        .collect();
    if !pass && !stationary_crossings.is_empty() {
        pass = true;
    }
    Ok(BernsteinRadialReport { n, theta, window, samples, pass, witnesses, stationary_crossings })
}

/// Relative step of the local stencil used by [`power_solution_residual`].
pub const POWER_STENCIL_STEP: f64 = 2e-3;

/// Scaled radial residual of `u = C r^{2k^2}` in dimension `2k` at each node,
/// without checking the exponent relation.
pub fn power_profile_residual<T: Real>(k: usize, theta: T, c: T, nodes: &[T]) -> Result<Vec<T>> {
    if k < 1 {
        return Err(Error::Parameter("k must be positive".into()));
    }
    let n = 2 * k;
    let p = T::from_usize_lossy(2 * k * k);
    let half = crate::model::STENCIL_HALF_WIDTH;
    nodes
        .iter()
        .map(|&r| {
            if !(r > T::zero()) {
                return Err(Error::Domain("power-solution nodes must be positive".into()));
            }
            let h = r * T::lit(POWER_STENCIL_STEP);
            let grid: Vec<T> = (0..=2 * half)
                .map(|j| r + h * (T::from_usize_lossy(j) - T::from_usize_lossy(half)))
                .collect();
            let profile = RadialProfile::from_fn(n, grid, |x| c * p * x.powf(p - T::one()), |x| c * x.powf(p))?;
            let res = radial_residual(&profile, theta, n, T::zero())?;
            Ok(res[0].scaled)
        })
        .collect()
}

/// Residual of the power solutions `C r^{2k^2}` in `R^{2k}` at `theta = (2k+1)/(2k+2)`.
pub fn power_solution_residual<T: Real>(k: usize, theta: T, c: T, nodes: &[T]) -> Result<Vec<T>> {
    if k < 2 {
        return Err(Error::Parameter(format!("power solutions need k >= 2, got {k}")));
    }
    let big_n = T::from_usize_lossy(2 * k);
    let expected = (big_n + T::one()) / (big_n + T::lit(2.0));
    if (theta - expected).abs() > T::lit(1e-12) {
        return Err(Error::Parameter(format!("theta must equal (N+1)/(N+2) = {expected}, got {theta}")));
    }
    power_profile_residual(k, theta, c, nodes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stationary_roots() {
        assert_eq!(stationary_eta(4, 5.0 / 6.0).len(), 2);
        assert!((stationary_eta(4, 5.0f64 / 6.0)[1] - 7.0).abs() < 1e-12);
        assert_eq!(stationary_eta(2, 0.75f64), vec![1.0]);
        assert_eq!(stationary_eta(1, 0.3f64), vec![1.0]);
    }

    #[test]
    fn rhs_domain_errors() {
        let p = ModelParams::new(2, 0.75, 0.0, 1.05).unwrap();
        assert!(matches!(phase_rhs(2.0, 0.0, 0.0, &p), Err(Error::Domain(_))));
        assert!(matches!(phase_rhs(1.0, 1.0, 0.0, &p), Err(Error::Domain(_))));
    }

    #[test]
    fn bernstein_rejects_small_n() {
        assert!(matches!(bernstein_radial_check(2, 0.7, (1.0, 1.05), 10), Err(Error::Parameter(_))));
    }
}
