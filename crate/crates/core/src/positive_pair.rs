//! One-dimensional solutions of the eigenvalue problem with positive
//! eigenvalue, built from the quadrature of the first integral
//! `v'^2 = a (v^3 - v0^{1-2 theta} v^{2 theta + 2})`, `v = u''`.

use crate::error::{Error, Result};
use crate::model::RadialProfile;
use crate::numerics::cumulative::{cumulative_hermite, cumulative_uniform};
use crate::numerics::ode::{solve_to_nodes, OdeOptions};
use crate::numerics::quad::{integrate, QuadOptions};
use crate::numerics::roots::newton_bracketed;
use crate::real::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PositivePairConfig<T> {
    /// `u''(0)`.
    pub v0: T,
    pub lambda: T,
    pub theta: T,
    /// `2 lambda / (2 theta - 1)`.
    pub a: T,
}

impl<T: Real> PositivePairConfig<T> {
    pub fn new(v0: T, lambda: T, theta: T) -> Result<Self> {
        if !(v0 > T::zero()) {
            return Err(Error::Parameter(format!("v0 must be positive, got {v0}")));
        }
        if !(lambda > T::zero()) {
            return Err(Error::Parameter(format!("lambda must be positive, got {lambda}")));
        }
        if !(theta > T::lit(0.5)) {
            return Err(Error::Parameter(format!("theta must exceed 1/2, got {theta}")));
        }
        let a = T::lit(2.0) * lambda / (T::lit(2.0) * theta - T::one());
        Ok(Self { v0, lambda, theta, a })
    }

    fn power(&self) -> T {
        T::lit(2.0) * self.theta - T::one()
    }

    /// `v'` from the first integral, nonpositive.
    pub fn slope(&self, v: T) -> T {
        let rad = v * v * v - self.v0.powf(-self.power()) * v.powf(self.power() + T::lit(3.0));
        -(self.a * rad.max(T::zero())).sqrt()
    }

    /// `v''` from differentiating the first integral.
    pub fn curvature(&self, v: T) -> T {
        let a = self.a;
        T::lit(1.5) * a * v * v - (self.theta + T::one()) * a * self.v0.powf(-self.power()) * v.powf(self.power() + T::lit(2.0))
    }

    /// Lower bound `4 / (2/sqrt(v0) + sqrt(a) r)^2`.
    pub fn lower_bound(&self, r: T) -> T {
        let d = T::lit(2.0) / self.v0.sqrt() + self.a.sqrt() * r;
        T::lit(4.0) / (d * d)
    }

    /// Integrand in `tau` with `s = v0 exp(-tau^2)`, scaled by `sqrt(a v0)`.
    fn tau_integrand(&self, tau: T) -> T {
        if tau == T::zero() {
            return T::lit(2.0) / self.power().sqrt();
        }
        let t2 = tau * tau;
        T::lit(2.0) * tau * (t2 / T::lit(2.0)).exp() / (-(-self.power() * t2).exp_m1()).sqrt()
    }

    fn scale(&self) -> T {
        T::one() / (self.a * self.v0).sqrt()
    }

    fn tau_of_v(&self, v: T) -> T {
        (self.v0 / v).ln().sqrt()
    }

    fn r_of_tau(&self, tau: T) -> Result<T> {
        let opts = QuadOptions { abs_tol: T::lit(1e-14), rel_tol: T::lit(1e-13), ..QuadOptions::default() };
        Ok(self.scale() * integrate(|s| self.tau_integrand(s), T::zero(), tau, &opts)?.value)
    }
}

/// Radius at which the solution takes the value `v`.
pub fn quadrature_r_of_v<T: Real>(v: T, config: &PositivePairConfig<T>) -> Result<T> {
    if !(v > T::zero() && v < config.v0) {
        return Err(Error::Domain(format!("v = {v} outside (0, v0)")));
    }
    config.r_of_tau(config.tau_of_v(v))
}

/// Inverse of [`quadrature_r_of_v`] by safeguarded Newton on `tau`.
pub fn v_of_r<T: Real>(r: T, config: &PositivePairConfig<T>, tol: T) -> Result<T> {
    if !(r >= T::zero()) {
        return Err(Error::Domain(format!("r = {r} must be nonnegative")));
    }
    if r == T::zero() {
        return Ok(config.v0);
    }
    let eps = T::lit(1e-14);
    let lo = config.tau_of_v(config.v0 * (T::one() - eps));
    let hi = config.tau_of_v(config.v0 * eps);
    if config.r_of_tau(hi)? < r {
        return Err(Error::Domain(format!("r = {r} beyond the representable range")));
    }
    if config.r_of_tau(lo)? >= r {
        return Ok(config.v0 * (T::one() - eps));
    }
    let scale = config.scale();
    let tau = newton_bracketed(
        |t| Ok((config.r_of_tau(t)? - r, scale * config.tau_integrand(t))),
        lo,
        hi,
        tol / (scale * config.tau_integrand(hi)).max(T::one()),
        200,
    )?;
    Ok(config.v0 * (-tau * tau).exp())
}

/// Values of `v` on an increasing grid from 0, by integrating the inverse
/// quadrature map `d tau / dr = sqrt(a v0) / G(tau)`, which is regular at `r = 0`.
pub fn v_on_grid<T: Real>(config: &PositivePairConfig<T>, grid: &[T]) -> Result<Vec<T>> {
    let speed = T::one() / config.scale();
    let opts = QuadOptions { abs_tol: T::zero(), rel_tol: T::lit(4.0) * T::epsilon(), max_intervals: 200 };
    let mut out = Vec::with_capacity(grid.len());
    let mut tau = T::zero();
    let mut prev_r = T::zero();
    for &r in grid {
        let need = (r - prev_r) * speed;
        if need > T::zero() {
            // Newton on int_{tau}^{next} G = need, seeded by the local slope
            let g0 = config.tau_integrand(tau);
            let mut next = tau + need / g0;
            for _ in 0..60 {
                let got = match integrate(|s| config.tau_integrand(s), tau, next, &opts) {
                    Ok(q) => q.value,
                    Err(Error::Quadrature { .. }) => gk15_fallback(config, tau, next),
                    Err(e) => return Err(e),
                };
                let step = (got - need) / config.tau_integrand(next);
                next = (next - step).max(tau + (next - tau) / T::lit(2.0));
                if step.abs() <= T::lit(2.0) * T::epsilon() * next.abs() {
                    break;
                }
            }
            tau = next;
        }
        prev_r = r;
        out.push(config.v0 * (-tau * tau).exp());
    }
    Ok(out)
}

fn gk15_fallback<T: Real>(config: &PositivePairConfig<T>, a: T, b: T) -> T {
    crate::numerics::quad::gk15(&mut |s| config.tau_integrand(s), a, b).0
}

/// The three derivative levels of a positive-pair solution.
#[derive(Debug, Clone, PartialEq)]
pub struct PositiveProfile<T> {
    pub r: Vec<T>,
    /// `u''`.
    pub v_upp: Vec<T>,
    /// `u'`.
    pub v_up: Vec<T>,
    pub u: Vec<T>,
}

impl<T: Real> PositiveProfile<T> {
    /// The profile as a radial factor in one dimension (`v = u'`).
    pub fn to_radial(&self) -> Result<RadialProfile<T>> {
        RadialProfile::new(1, self.r.clone(), self.v_up.clone(), self.u.clone())
    }
}

fn uniform_grid<T: Real>(r_max: T, cells: usize) -> Vec<T> {
    (0..=cells).map(|k| r_max * T::from_usize_lossy(k) / T::from_usize_lossy(cells)).collect()
}

/// Direct integration of `v'' = (3a/2) v^2 - (theta+1) a v0^{1-2theta} v^{2theta+1}`
/// from `v(0) = v0`, `v'(0) = 0`, together with `u'` and `u`.
pub fn integrate_direct<T: Real>(config: &PositivePairConfig<T>, r_max: T, cells: usize) -> Result<PositiveProfile<T>> {
    if !(r_max > T::zero()) || cells < 1 {
        return Err(Error::Parameter("r_max must be positive with at least one cell".into()));
    }
    let grid = uniform_grid(r_max, cells);
    let opts = OdeOptions { rtol: T::lit(1e-13), atol: T::lit(1e-15), ..OdeOptions::default() };
    let (states, _) = solve_to_nodes(
        |_, y: &[T; 4]| Ok([y[1], config.curvature(y[0]), y[0], y[2]]),
        T::zero(),
        [config.v0, T::zero(), T::zero(), T::zero()],
        &grid[1..],
        &opts,
    )?;
    let mut v_upp = vec![config.v0];
    let mut v_up = vec![T::zero()];
    let mut u = vec![T::zero()];
    for s in states {
        v_upp.push(s[0]);
        v_up.push(s[2]);
        u.push(s[3]);
    }
    Ok(PositiveProfile { r: grid, v_upp, v_up, u })
}

/// Builds `u = int_0^r int_0^t v` on `grid` (starting at 0) with `v` from the quadrature.
pub fn build_phi<T: Real>(config: &PositivePairConfig<T>, grid: &[T]) -> Result<PositiveProfile<T>> {
    if grid.first() != Some(&T::zero()) {
        return Err(Error::Parameter("grid must start at r = 0".into()));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Parameter("grid must be strictly increasing".into()));
    }
    let v_upp = v_on_grid(config, grid)?;
    let slopes: Vec<T> = v_upp.iter().map(|&v| config.slope(v)).collect();
    let v_up = cumulative_hermite(grid, &v_upp, &slopes);
    let u = cumulative_hermite(grid, &v_up, &v_upp);
    Ok(PositiveProfile { r: grid.to_vec(), v_upp, v_up, u })
}

/// Finite boundary radius and boundary value of the one-dimensional solution
/// with negative eigenvalue `-lambda`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NegativeBoundary<T> {
    pub radius: T,
    /// `lim u(r)` as `r -> R`.
    pub u_at_boundary: T,
    /// Contribution of `sigma > SIGMA_CUT` summed analytically.
    pub tail: T,
}

/// Truncation point of the boundary-value integral, in units of `v0`.
pub const SIGMA_CUT: f64 = 1e8;

/// `R` and `u(R)` for `v' = sqrt(a (v0^{1-2 theta} v^{2 theta+2} - v^3))`, `v(0) = v0`.
pub fn negative_pair_boundary<T: Real>(config: &PositivePairConfig<T>, cells: usize) -> Result<NegativeBoundary<T>> {
    let p = config.power();
    let theta = config.theta;
    // sigma = exp(z^2): k(sigma) d sigma = kz(z) dz
    let kz = |z: T| -> T {
        if z == T::zero() {
            return T::lit(2.0) / p.sqrt();
        }
        let z2 = z * z;
        T::lit(2.0) * z * (-z2 / T::lit(2.0)).exp() / (p * z2).exp_m1().sqrt()
    };
    let opts = QuadOptions { abs_tol: T::lit(1e-15), rel_tol: T::lit(1e-13), ..QuadOptions::default() };
    let z_end = (T::lit(700.0) / theta).sqrt();
    let total_k = integrate(kz, T::zero(), z_end, &opts)?.value;
    let radius = total_k / (config.a * config.v0).sqrt();

    // series in x = sigma^{1-2 theta} for sigma beyond the cut
    let cut = T::lit(SIGMA_CUT);
    let ratio = cut.powf(-p);
    let mut coef = vec![T::one()];
    while coef.len() < 2000 {
        let j = T::from_usize_lossy(coef.len());
        let next = coef[coef.len() - 1] * (T::lit(2.0) * j - T::one()) / (T::lit(2.0) * j);
        if next * ratio.powf(j) < T::lit(1e-18) {
            break;
        }
        coef.push(next);
    }
    let big_k_cut: T = coef
        .iter()
        .enumerate()
        .map(|(j, &c)| {
            let jf = T::from_usize_lossy(j);
            c * cut.powf(-theta - jf * p) / (theta + jf * p)
        })
        .sum();
    let mut tail = T::zero();
    for (i, &ci) in coef.iter().enumerate() {
        for (j, &cj) in coef.iter().enumerate() {
            let m = T::from_usize_lossy(1 + i + j);
            tail = tail + ci * cj * ratio.powf(m) / ((theta + T::from_usize_lossy(j) * p) * p * m);
        }
    }

    let z_cut = cut.ln().sqrt();
    let h = z_cut / T::from_usize_lossy(cells);
    let zs: Vec<T> = (0..=cells).map(|k| h * T::from_usize_lossy(k)).collect();
    let kvals: Vec<T> = zs.iter().map(|&z| kz(z)).collect();
    let cum = cumulative_uniform(&kvals, h);
    let inner_total = cum[cells];
    let outer: Vec<T> = zs
        .iter()
        .zip(&kvals)
        .zip(&cum)
        .map(|((&z, &k), &c)| (z * z).exp() * k * (big_k_cut + inner_total - c))
        .collect();
    let body = cumulative_uniform(&outer, h)[cells];
    Ok(NegativeBoundary { radius, u_at_boundary: (body + tail) / config.a, tail: tail / config.a })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_slope_and_curvature_at_origin() {
        let c = PositivePairConfig::new(1.0f64, 0.05, 0.55).unwrap();
        assert_eq!(c.slope(1.0), 0.0);
        assert!((c.curvature(1.0) - c.a * (0.5 - 0.55)).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(PositivePairConfig::new(1.0, 1.0, 0.5).is_err());
        assert!(PositivePairConfig::new(-1.0, 1.0, 0.6).is_err());
        let c = PositivePairConfig::new(1.0, 0.05, 0.55).unwrap();
        assert!(matches!(quadrature_r_of_v(1.0, &c), Err(Error::Domain(_))));
        assert!(matches!(quadrature_r_of_v(0.0, &c), Err(Error::Domain(_))));
    }
}
