//! Taylor data of the local solution at the singular point `eta = 1`.

use crate::error::{Error, Result};
use crate::model::TaylorData;
use crate::numerics::series::Series;
use crate::phase_plane::{cubic_factor, linear_coeff};
use crate::real::Real;

/// Value of `lim lambda * Phi(eta)` as `eta -> 1+` imposed by the calibration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CalibrationTarget {
    /// `4 + n(n-2)/2`, as printed.
    Printed,
    /// `n(n+2)/2`, the value compatible with `zeta'(1) = 2` for every `n`.
    #[default]
    Consistent,
}

impl CalibrationTarget {
    pub fn value<T: Real>(self, n: usize) -> T {
        let nf = T::from_usize_lossy(n);
        match self {
            Self::Printed => T::lit(4.0) + nf * (nf - T::lit(2.0)) / T::lit(2.0),
            Self::Consistent => nf * (nf + T::lit(2.0)) / T::lit(2.0),
        }
    }
}

fn check_n(n: usize) -> Result<()> {
    if !(2..=5).contains(&n) {
        return Err(Error::Parameter(format!("Taylor data needs 2 <= n <= 5, got {n}")));
    }
    Ok(())
}

/// Closed-form `zeta''(1)`.
pub fn alpha0<T: Real>(n: usize, theta: T) -> T {
    let nf = T::from_usize_lossy(n);
    let lit = T::lit;
    (lit(4.0) * (nf + lit(2.0)).powi(2) * theta + (lit(2.0) * nf * nf - lit(24.0) * nf + lit(104.0)))
        / (nf * nf - lit(2.0) * nf + lit(24.0))
}

/// Closed-form `zeta'''(1)` in terms of `alpha`.
pub fn beta0<T: Real>(n: usize, theta: T, alpha: T) -> T {
    let nf = T::from_usize_lossy(n);
    let lit = T::lit;
    let np = nf + lit(2.0);
    let nm = nf - lit(2.0);
    let den = lit(96.0) + lit(2.0) * nf * nm;
    let first = (lit(48.0) * np * nm * theta + lit(6.0) * nm * (lit(9.0) * nf - lit(8.0)) + lit(528.0)) / den;
    let second = (lit(6.0) * (nf * nm + lit(12.0)) * alpha * alpha
        - lit(3.0) * (lit(4.0) * np * nm * theta + nm * (lit(13.0) * nf - lit(4.0)) + lit(144.0)) * alpha)
        / den;
    first + second
}

/// Closed-form band centre for `zeta''''`, `48 gamma_ab / (80 + n(n-2))`.
pub fn gamma0<T: Real>(n: usize, theta: T, alpha: T, beta: T) -> T {
    let nf = T::from_usize_lossy(n);
    let lit = T::lit;
    let nn = nf * (nf - lit(2.0));
    let m = lit(8.0) + nn;
    let nt = nf * theta - (lit(2.0) * nf - lit(3.0));
    let nt1 = nf * theta - (nf - T::one());
    let gab = -lit(17.0) * m / lit(96.0) * alpha.powi(3)
        + (lit(9.0) * nf * nt + lit(53.0) * m) / lit(48.0) * alpha * alpha
        - (lit(216.0) * nf * nt1 + lit(1021.0) * m) / lit(288.0) * alpha
        + lit(37.0) * m / lit(16.0)
        - (lit(12.0) * nf * nt + lit(61.0) * m) / lit(48.0) * beta
        + (lit(112.0) - nn) / lit(48.0) * alpha * beta;
    lit(48.0) * gab / (lit(80.0) + nn)
}

/// Taylor data from the closed forms.
pub fn taylor_coeffs<T: Real>(n: usize, theta: T) -> Result<TaylorData<T>> {
    check_n(n)?;
    let alpha = alpha0(n, theta);
    let beta = beta0(n, theta, alpha);
    let gamma = gamma0(n, theta, alpha, beta);
    Ok(TaylorData { d1: T::lit(2.0), alpha, beta, gamma })
}

/// Coefficients `q_0, q_1, ...` of `zeta / (eta - 1)` in powers of `eta - 1`,
/// obtained order by order from the calibrated phase ODE with `q_0 = 2`.
pub fn series_q<T: Real>(n: usize, theta: T, target: CalibrationTarget, order: usize) -> Vec<T> {
    let r0: T = target.value(n);
    let len = order + 2;
    let one = T::one();
    let two = T::lit(2.0);
    let nf = T::from_usize_lossy(n);
    // eta = 1 + x
    let eta = Series::linear(one, one, len);
    let b = Series::linear(linear_coeff(n, theta, one), linear_coeff(n, theta, two) - linear_coeff(n, theta, one), len);
    let c = Series::linear(cubic_factor(n, theta, one), cubic_factor(n, theta, two) - cubic_factor(n, theta, one), len);
    let eta2 = eta.mul(&eta);
    let rhs = |q: &Series<T>| -> Series<T> {
        // h = ((x + 2)/q - 1)/x, J = int h, R = 2 R0 e^J / q
        let x_plus_2 = Series::linear(two, one, len + 1);
        let q_ext = Series::from_coeffs(q.c.clone(), len + 1);
        let h = x_plus_2.div(&q_ext).sub(&Series::constant(one, len + 1)).shift_down();
        let j = Series::from_coeffs(h.c.clone(), len).integrate();
        let r = j.exp().scale(two * r0).div(q);
        let xq = Series::from_coeffs(std::iter::once(T::zero()).chain(q.c.iter().copied()).collect(), len);
        xq.scale(theta + one)
            .div(&eta)
            .add(&b)
            .add(&eta.mul(&c).scale(nf).div(q))
            .add(&eta2.mul(&r))
    };
    let mut q = vec![two];
    for k in 1..=order {
        // (k+1) q_k = rhs_k, with rhs_k affine in q_k
        let mut trial = q.clone();
        trial.push(T::zero());
        let base = rhs(&Series::from_coeffs(trial.clone(), len)).c[k];
        trial[k] = one;
        let unit = rhs(&Series::from_coeffs(trial, len)).c[k];
        let slope = unit - base;
        q.push(base / (T::from_usize_lossy(k + 1) - slope));
    }
    q
}

/// Taylor data of the self-consistent series solution.
pub fn series_taylor<T: Real>(n: usize, theta: T, target: CalibrationTarget) -> Result<TaylorData<T>> {
    check_n(n)?;
    let q = series_q(n, theta, target, 3);
    Ok(TaylorData { d1: T::lit(2.0), alpha: T::lit(2.0) * q[1], beta: T::lit(6.0) * q[2], gamma: T::lit(24.0) * q[3] })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printed_alpha_matches_hand_substitution() {
        assert!((alpha0(2, 0.75f64) - 14.0 / 3.0).abs() < 1e-13);
        assert!((alpha0(2, 0.55f64) - 99.2 / 24.0).abs() < 1e-13);
        let a = alpha0(2, 0.55f64);
        assert!((beta0(2, 0.55, a) - (5.5 + 0.75 * a * a - 4.5 * a)).abs() < 1e-13);
    }

    #[test]
    fn series_agrees_with_printed_forms_when_targets_coincide() {
        for &theta in &[0.4f64, 0.55, 0.75, 1.3] {
            let s = series_taylor(2, theta, CalibrationTarget::Consistent).unwrap();
            let p = taylor_coeffs(2, theta).unwrap();
            assert!((s.alpha - p.alpha).abs() < 1e-12);
            assert!((s.beta - p.beta).abs() < 1e-11);
        }
        for n in 3..=5 {
            let s = series_taylor(n, 0.6f64, CalibrationTarget::Printed).unwrap();
            let p = taylor_coeffs(n, 0.6f64).unwrap();
            assert!((s.alpha - p.alpha).abs() < 1e-11, "n = {n}");
            assert!((s.beta - p.beta).abs() < 1e-10, "n = {n}");
        }
    }

    #[test]
    fn out_of_range_dimension() {
        assert!(taylor_coeffs(6, 0.5f64).is_err());
        assert!(taylor_coeffs(1, 0.5f64).is_err());
    }
}
