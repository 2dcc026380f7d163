//! Adaptive Gauss-Kronrod (7, 15) quadrature.

use crate::error::{Error, Result};
use crate::real::Real;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions<T> {
    pub abs_tol: T,
    pub rel_tol: T,
    pub max_intervals: usize,
}

impl<T: Real> Default for QuadOptions<T> {
    fn default() -> Self {
        Self { abs_tol: T::lit(1e-13), rel_tol: T::lit(1e-12), max_intervals: 4000 }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadResult<T> {
    pub value: T,
    pub error: T,
    pub intervals: usize,
}

/// Single 15-point Kronrod panel; returns (kronrod, |kronrod - gauss|).
pub fn gk15<T: Real, F: FnMut(T) -> T>(f: &mut F, a: T, b: T) -> (T, T) {
    let half = T::lit(0.5);
    let c = half * (a + b);
    let h = half * (b - a);
    let fc = f(c);
    let mut k = fc * T::lit(WGK[7]);
    let mut g = fc * T::lit(WG[3]);
    for j in 0..7 {
        let dx = h * T::lit(XGK[j]);
        let s = f(c - dx) + f(c + dx);
        k = k + s * T::lit(WGK[j]);
        if j % 2 == 1 {
            g = g + s * T::lit(WG[j / 2]);
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Globally adaptive integration of `f` over `[a, b]`.
pub fn integrate<T: Real, F: FnMut(T) -> T>(
    mut f: F,
    a: T,
    b: T,
    opts: &QuadOptions<T>,
) -> Result<QuadResult<T>> {
    if a == b {
        return Ok(QuadResult { value: T::zero(), error: T::zero(), intervals: 0 });
    }
    let (v, e) = gk15(&mut f, a, b);
    let mut panels = vec![(a, b, v, e)];
    loop {
        let value: T = panels.iter().map(|p| p.2).sum();
        let error: T = panels.iter().map(|p| p.3).sum();
        if !value.is_finite() {
            return Err(Error::Quadrature { error: f64::INFINITY });
        }
        let target = opts.abs_tol.max(opts.rel_tol * value.abs());
        if error <= target {
            return Ok(QuadResult { value, error, intervals: panels.len() });
        }
        if panels.len() >= opts.max_intervals {
            return Err(Error::Quadrature { error: error.as_f64() });
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.partial_cmp(&y.1 .3).unwrap_or(std::cmp::Ordering::Equal))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let (pa, pb, _, _) = panels.swap_remove(worst);
        let mid = T::lit(0.5) * (pa + pb);
        let (v1, e1) = gk15(&mut f, pa, mid);
        let (v2, e2) = gk15(&mut f, mid, pb);
        panels.push((pa, mid, v1, e1));
        panels.push((mid, pb, v2, e2));
    }
}

/// Integration over `[a, b]` subdivided at the given breakpoints.
pub fn integrate_pieces<T: Real, F: FnMut(T) -> T>(
    mut f: F,
    breaks: &[T],
    opts: &QuadOptions<T>,
) -> Result<QuadResult<T>> {
    let mut total = QuadResult { value: T::zero(), error: T::zero(), intervals: 0 };
    for w in breaks.windows(2) {
        let r = integrate(&mut f, w[0], w[1], opts)?;
        total.value = total.value + r.value;
        total.error = total.error + r.error;
        total.intervals += r.intervals;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact_on_one_panel() {
        let mut f = |x: f64| x.powi(9) - 3.0 * x * x;
        let (v, _) = gk15(&mut f, -1.0, 2.0);
        let exact = (2f64.powi(10) - 1.0) / 10.0 - (8.0 + 1.0);
        assert!((v - exact).abs() < 1e-12);
    }

    #[test]
    fn sqrt_endpoint_singularity() {
        let r = integrate(|x: f64| 1.0 / x.sqrt(), 0.0, 1.0, &QuadOptions::default()).unwrap();
        assert!((r.value - 2.0).abs() < 1e-9, "{}", r.value);
    }

    #[test]
    fn exponential_in_f32() {
        let r = integrate(|x: f32| x.exp(), 0.0, 1.0, &QuadOptions { abs_tol: 1e-6, rel_tol: 1e-6, max_intervals: 100 })
            .unwrap();
        assert!((r.value - (1f32.exp() - 1.0)).abs() < 1e-5);
    }
}
