//! Sampled phase curves `zeta(eta)` and their interpolant in `x = ln(eta - 1)`.

use crate::error::{Error, Result};
use crate::model::{ModelParams, TaylorData};
use crate::numerics::fd::{apply, fornberg_weights};
use crate::numerics::interp::{hermite_cell, locate};
use crate::numerics::quad::gk15;
use crate::numerics::roots::newton_bracketed;
use crate::phase_plane::PhaseRhs;
use crate::real::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSample<T> {
    pub eta: T,
    pub zeta: T,
    /// `I(eta) = int_{eta0}^{eta} (s + 1) / zeta(s) ds`.
    pub integral: T,
    /// `d zeta / d eta`.
    pub slope: T,
}

/// A phase curve on `(1, eta_max]`. Empty samples encode the degenerate
/// branch `eta = 1`, `zeta = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseCurve<T> {
    pub params: ModelParams<T>,
    pub taylor: TaylorData<T>,
    pub samples: Vec<PhaseSample<T>>,
    pub eta_max: T,
}

impl<T: Real> PhaseCurve<T> {
    pub fn new(params: ModelParams<T>, taylor: TaylorData<T>, samples: Vec<PhaseSample<T>>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::GridTooCoarse("a phase curve needs at least 2 samples".into()));
        }
        for s in &samples {
            if !(s.eta > T::one()) {
                return Err(Error::Domain(format!("sample eta = {} must exceed 1", s.eta)));
            }
            if !(s.zeta > T::zero()) {
                return Err(Error::PositivityLoss { eta: s.eta.as_f64() });
            }
        }
        if samples.windows(2).any(|w| !(w[1].eta > w[0].eta)) {
            return Err(Error::Parameter("samples must be strictly increasing in eta".into()));
        }
        let eta_max = samples[samples.len() - 1].eta;
        Ok(Self { params, taylor, samples, eta_max })
    }

    /// The stationary branch `eta = 1`, which rebuilds to a paraboloid.
    pub fn degenerate(params: ModelParams<T>) -> Self {
        let taylor = TaylorData { d1: T::lit(2.0), alpha: T::zero(), beta: T::zero(), gamma: T::zero() };
        Self { params, taylor, samples: Vec::new(), eta_max: T::one() }
    }

    pub fn is_degenerate(&self) -> bool {
        self.samples.is_empty()
    }

    /// Builds a curve from `(eta, zeta, I)` rows, estimating slopes with
    /// five-point finite differences on the sample grid.
    pub fn from_rows(params: ModelParams<T>, taylor: TaylorData<T>, rows: &[(T, T, T)]) -> Result<Self> {
        let len = rows.len();
        if len < 5 {
            return Err(Error::GridTooCoarse(format!("{len} rows, need at least 5")));
        }
        let eta: Vec<T> = rows.iter().map(|r| r.0).collect();
        let zeta: Vec<T> = rows.iter().map(|r| r.1).collect();
        let samples = (0..len)
            .map(|i| {
                let start = i.saturating_sub(2).min(len - 5);
                let w = fornberg_weights(eta[i], &eta[start..start + 5], 1);
                PhaseSample { eta: eta[i], zeta: zeta[i], integral: rows[i].2, slope: apply(&w, 1, &zeta[start..start + 5]) }
            })
            .collect();
        Self::new(params, taylor, samples)
    }

    /// Builds a curve from `(eta, zeta, I)` rows with slopes from the phase ODE
    /// at `params.lambda3`.
    pub fn from_rows_ode(params: ModelParams<T>, taylor: TaylorData<T>, rows: &[(T, T, T)]) -> Result<Self> {
        let rhs = PhaseRhs::new(params);
        let samples = rows
            .iter()
            .map(|&(eta, zeta, integral)| Ok(PhaseSample { eta, zeta, integral, slope: rhs.eval(eta, zeta, integral)?.0 }))
            .collect::<Result<Vec<_>>>()?;
        Self::new(params, taylor, samples)
    }

    /// Anchor `eta0` recovered from the sign change of `I`.
    pub fn anchor_from_integral(&self) -> Option<T> {
        let s = &self.samples;
        let k = s.windows(2).position(|w| w[0].integral <= T::zero() && w[1].integral >= T::zero())?;
        let (a, b) = (s[k], s[k + 1]);
        if b.integral == a.integral {
            return Some(a.eta);
        }
        Some(a.eta + (b.eta - a.eta) * (-a.integral) / (b.integral - a.integral))
    }

    pub fn interpolant(&self, eta0: T) -> Result<CurveInterpolant<T>> {
        CurveInterpolant::new(&self.samples, eta0)
    }
}

/// Hermite interpolant of `L = ln(zeta / (eta - 1))` in `x = ln(eta - 1)`,
/// with cumulative integrals for `t` and `I` and an analytic linear model
/// of `zeta / (eta - 1)` below the first sample.
#[derive(Debug, Clone)]
pub struct CurveInterpolant<T> {
    x: Vec<T>,
    l: Vec<T>,
    dl: Vec<T>,
    t_knots: Vec<T>,
    i_knots: Vec<T>,
    head_c: T,
    head_s: T,
    t_anchor: T,
    i_anchor: T,
    pub eta0: T,
}

fn log_ratio_over<T: Real>(s: T, num: T, den: T) -> T {
    // (1/s) ln(1 + s num / den), continuous at s = 0
    let z = s * num / den;
    if z == T::zero() {
        num / den
    } else {
        z.ln_1p() / s
    }
}

impl<T: Real> CurveInterpolant<T> {
    pub fn new(samples: &[PhaseSample<T>], eta0: T) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::GridTooCoarse("interpolant needs at least 2 samples".into()));
        }
        let x: Vec<T> = samples.iter().map(|s| (s.eta - T::one()).ln()).collect();
        let l: Vec<T> = samples.iter().map(|s| (s.zeta / (s.eta - T::one())).ln()).collect();
        let dl: Vec<T> = samples.iter().map(|s| (s.eta - T::one()) * s.slope / s.zeta - T::one()).collect();
        let q0 = l[0].exp();
        let e0 = x[0].exp();
        let head_s = q0 * dl[0] / e0;
        let head_c = q0 - head_s * e0;
        if !(head_c > T::zero()) {
            return Err(Error::SingularityMismatch { slope: head_c.as_f64() });
        }
        let mut it = Self {
            x,
            l,
            dl,
            t_knots: Vec::new(),
            i_knots: Vec::new(),
            head_c,
            head_s,
            t_anchor: T::zero(),
            i_anchor: T::zero(),
            eta0,
        };
        let len = it.x.len();
        let mut tk = vec![T::zero(); len];
        let mut ik = vec![T::zero(); len];
        for k in 0..len - 1 {
            let (a, b) = (it.x[k], it.x[k + 1]);
            tk[k + 1] = tk[k] + gk15(&mut |x| it.cell_inv_q(k, x), a, b).0;
            ik[k + 1] = ik[k] + gk15(&mut |x: T| (x.exp() + T::lit(2.0)) * it.cell_inv_q(k, x), a, b).0;
        }
        it.t_knots = tk;
        it.i_knots = ik;
        let xa = (eta0 - T::one()).ln();
        if xa > it.x[len - 1] {
            return Err(Error::Domain(format!("anchor {eta0} beyond the sampled range")));
        }
        it.t_anchor = it.raw_t(xa);
        it.i_anchor = it.raw_i(xa);
        Ok(it)
    }

    fn cell_l(&self, k: usize, x: T) -> (T, T) {
        hermite_cell(self.x[k], self.x[k + 1], self.l[k], self.l[k + 1], self.dl[k], self.dl[k + 1], x)
    }

    fn cell_inv_q(&self, k: usize, x: T) -> T {
        (-self.cell_l(k, x).0).exp()
    }

    fn head_q(&self, x: T) -> T {
        self.head_c + self.head_s * x.exp()
    }

    fn raw_t(&self, x: T) -> T {
        let x0 = self.x[0];
        if x < x0 {
            let (c, s) = (self.head_c, self.head_s);
            let den = c + s * x0.exp();
            let num = x.exp() - x0.exp();
            return (x - x0) / c - log_ratio_over(s, num, den) * s / c;
        }
        let k = locate(&self.x, x);
        let a = self.x[k];
        self.t_knots[k] + gk15(&mut |y| self.cell_inv_q(k, y), a, x.min(self.x[k + 1])).0
    }

    fn raw_i(&self, x: T) -> T {
        let x0 = self.x[0];
        if x < x0 {
            let (c, s) = (self.head_c, self.head_s);
            let den = c + s * x0.exp();
            let num = x.exp() - x0.exp();
            return log_ratio_over(s, num, den) + T::lit(2.0) * self.raw_t(x);
        }
        let k = locate(&self.x, x);
        let a = self.x[k];
        self.i_knots[k] + gk15(&mut |y: T| (y.exp() + T::lit(2.0)) * self.cell_inv_q(k, y), a, x.min(self.x[k + 1])).0
    }

    /// `q = zeta / (eta - 1)` in log form and its `x`-derivative.
    fn log_q(&self, x: T) -> (T, T) {
        if x < self.x[0] {
            let q = self.head_q(x);
            return (q.ln(), self.head_s * x.exp() / q);
        }
        let k = locate(&self.x, x);
        self.cell_l(k, x)
    }

    fn x_of(&self, eta: T) -> Result<T> {
        if !(eta > T::one()) {
            return Err(Error::Domain(format!("eta = {eta} must exceed 1")));
        }
        let x = (eta - T::one()).ln();
        if x > self.x[self.x.len() - 1] * (T::one() + T::epsilon()) + T::epsilon() {
            return Err(Error::Domain(format!("eta = {eta} beyond the sampled range")));
        }
        Ok(x.min(self.x[self.x.len() - 1]))
    }

    pub fn eta_max(&self) -> T {
        T::one() + self.x[self.x.len() - 1].exp()
    }

    pub fn zeta(&self, eta: T) -> Result<T> {
        let x = self.x_of(eta)?;
        Ok((eta - T::one()) * self.log_q(x).0.exp())
    }

    /// `zeta` and `d zeta / d eta`.
    pub fn zeta_with_slope(&self, eta: T) -> Result<(T, T)> {
        let x = self.x_of(eta)?;
        let (lq, dlq) = self.log_q(x);
        let q = lq.exp();
        Ok(((eta - T::one()) * q, q * (T::one() + dlq)))
    }

    /// `t(eta) = int_{eta0}^{eta} ds / zeta(s)`.
    pub fn t(&self, eta: T) -> Result<T> {
        Ok(self.raw_t(self.x_of(eta)?) - self.t_anchor)
    }

    /// `I(eta) = int_{eta0}^{eta} (s + 1) / zeta(s) ds`.
    pub fn integral(&self, eta: T) -> Result<T> {
        Ok(self.raw_i(self.x_of(eta)?) - self.i_anchor)
    }

    /// `t` at the last sample.
    pub fn t_end(&self) -> T {
        self.t_knots[self.t_knots.len() - 1] - self.t_anchor
    }

    /// Limit of `I(eta) - 2 t(eta)` as `eta -> 1+`.
    pub fn origin_log_gap(&self) -> T {
        let x0 = self.x[0];
        let (c, s) = (self.head_c, self.head_s);
        let den = c + s * x0.exp();
        let gap_at_x0 = (self.i_knots[0] - self.i_anchor) - T::lit(2.0) * (self.t_knots[0] - self.t_anchor);
        gap_at_x0 + log_ratio_over(s, -x0.exp(), den)
    }

    /// Inverse of `t` as `x = ln(eta - 1)`, finite even where `eta - 1` underflows.
    pub fn x_of_t(&self, target: T) -> Result<T> {
        let raw = target + self.t_anchor;
        let last = self.x.len() - 1;
        if raw > self.t_knots[last] {
            return Err(Error::Domain(format!("t = {target} beyond the sampled range")));
        }
        if raw >= self.t_knots[0] {
            let k = locate(&self.t_knots, raw);
            let (a, b) = (self.x[k], self.x[k + 1]);
            return newton_bracketed(
                |x| Ok((self.raw_t(x) - raw, (-self.log_q(x).0).exp())),
                a,
                b,
                T::lit(4.0) * T::epsilon() * (T::one() + a.abs()),
                200,
            );
        }
        let x0 = self.x[0];
        let mut lo = x0 - T::one();
        while self.raw_t(lo) > raw {
            lo = x0 - (x0 - lo) * T::lit(2.0);
            if lo < T::lit(-1e6) {
                return Err(Error::Domain(format!("t = {target} too far below the anchor")));
            }
        }
        newton_bracketed(
            |x| Ok((self.raw_t(x) - raw, T::one() / self.head_q(x))),
            lo,
            x0,
            T::lit(4.0) * T::epsilon() * (T::one() + lo.abs()),
            200,
        )
    }

    /// Inverse of `t`: the `eta` with `t(eta) = target`.
    pub fn eta_of_t(&self, target: T) -> Result<T> {
        Ok(T::one() + self.x_of_t(target)?.exp())
    }

    /// `(x, I - 2t)` at `x = ln(eta - 1)`, evaluated without cancellation below the first sample.
    pub fn log_gap_at_x(&self, x: T) -> T {
        let x0 = self.x[0];
        if x < x0 {
            let (c, s) = (self.head_c, self.head_s);
            let den = c + s * x0.exp();
            let gap0 = (self.i_knots[0] - self.i_anchor) - T::lit(2.0) * (self.t_knots[0] - self.t_anchor);
            return gap0 + log_ratio_over(s, x.exp() - x0.exp(), den);
        }
        (self.raw_i(x) - self.i_anchor) - T::lit(2.0) * (self.raw_t(x) - self.t_anchor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> ModelParams<f64> {
        ModelParams::new(2, 0.55, 0.0, 1.1).unwrap()
    }

    fn taylor() -> TaylorData<f64> {
        TaylorData { d1: 2.0, alpha: 0.0, beta: 0.0, gamma: 0.0 }
    }

    fn linear_curve(eta0: f64) -> PhaseCurve<f64> {
        // zeta = 2(eta - 1): I = ln((e-1)/(e0-1)) + (e - e0)/2
        let samples = (0..400)
            .map(|k| {
                let eta = 1.0 + (-12.0 + 0.04 * k as f64).exp();
                let lr = ((eta - 1.0) / (eta0 - 1.0)).ln();
                PhaseSample { eta, zeta: 2.0 * (eta - 1.0), integral: lr + (eta - eta0) / 2.0, slope: 2.0 }
            })
            .collect();
        PhaseCurve::new(params(), taylor(), samples).unwrap()
    }

    #[test]
    fn linear_curve_integrals_match_closed_form() {
        let eta0 = 1.1;
        let c = linear_curve(eta0);
        let it = c.interpolant(eta0).unwrap();
        for &eta in &[1.0 + 1e-9, 1.0 + 1e-6, 1.05, 1.1, 2.0, 30.0] {
            let lr = ((eta - 1.0) / (eta0 - 1.0)).ln();
            assert!((it.t(eta).unwrap() - 0.5 * lr).abs() < 1e-12, "t at {eta}");
            let exact = lr + (eta - eta0) / 2.0;
            assert!((it.integral(eta).unwrap() - exact).abs() < 1e-11, "I at {eta}");
            assert!((it.zeta(eta).unwrap() - 2.0 * (eta - 1.0)).abs() < 1e-12 * eta);
        }
        // t(eta) = 1/2 ln((eta-1)/(eta0-1)) inverts to eta - 1 = (eta0 - 1) e^{2t}
        for &t in &[-20.0, -3.0, 0.0, 1.2] {
            let eta = it.eta_of_t(t).unwrap();
            let exact = 1.0 + (eta0 - 1.0) * (2.0 * t).exp();
            assert!((eta - exact).abs() < 1e-12 * exact);
        }
        assert!((it.origin_log_gap() + (eta0 - 1.0) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn rows_constructor_recovers_slopes() {
        let rows: Vec<(f64, f64, f64)> =
            (0..200).map(|k| 1.0 + 0.01 * (k + 1) as f64).map(|e| (e, e * e - 1.0, 0.0)).collect();
        let c = PhaseCurve::from_rows(params(), taylor(), &rows).unwrap();
        for s in &c.samples {
            assert!((s.slope - 2.0 * s.eta).abs() < 1e-9);
        }
    }

    #[test]
    fn degenerate_and_invalid_curves() {
        assert!(PhaseCurve::degenerate(params()).is_degenerate());
        let bad = vec![
            PhaseSample { eta: 1.1, zeta: 0.2, integral: 0.0, slope: 2.0 },
            PhaseSample { eta: 1.2, zeta: -0.1, integral: 0.0, slope: 2.0 },
        ];
        assert!(matches!(PhaseCurve::new(params(), taylor(), bad), Err(Error::PositivityLoss { .. })));
    }
}
