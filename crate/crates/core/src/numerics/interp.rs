//! Piecewise cubic Hermite interpolation.

use crate::real::Real;

/// Index `i` with `x[i] <= t < x[i+1]`, clamped to the valid cell range.
pub fn locate<T: Real>(x: &[T], t: T) -> usize {
    let n = x.len();
    if n < 2 || t <= x[0] {
        return 0;
    }
    if t >= x[n - 1] {
        return n - 2;
    }
    let mut lo = 0;
    let mut hi = n - 1;
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if x[mid] <= t {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Cubic Hermite cell evaluation: value and slope.
#[inline]
pub fn hermite_cell<T: Real>(x0: T, x1: T, y0: T, y1: T, d0: T, d1: T, t: T) -> (T, T) {
    let h = x1 - x0;
    let s = (t - x0) / h;
    let s2 = s * s;
    let s3 = s2 * s;
    let two = T::lit(2.0);
    let three = T::lit(3.0);
    let h00 = two * s3 - three * s2 + T::one();
    let h10 = s3 - two * s2 + s;
    let h01 = three * s2 - two * s3;
    let h11 = s3 - s2;
    let value = h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1;
    let six = T::lit(6.0);
    let dh00 = (six * s2 - six * s) / h;
    let dh10 = three * s2 - T::lit(4.0) * s + T::one();
    let dh01 = (six * s - six * s2) / h;
    let dh11 = three * s2 - two * s;
    (value, dh00 * y0 + dh10 * d0 + dh01 * y1 + dh11 * d1)
}

/// Exact integral of the Hermite cubic over its cell.
#[inline]
pub fn hermite_cell_integral<T: Real>(x0: T, x1: T, y0: T, y1: T, d0: T, d1: T) -> T {
    let h = x1 - x0;
    h * (y0 + y1) / T::lit(2.0) + h * h * (d0 - d1) / T::lit(12.0)
}

#[derive(Debug, Clone)]
pub struct CubicHermite<T> {
    pub x: Vec<T>,
    pub y: Vec<T>,
    pub dy: Vec<T>,
}

impl<T: Real> CubicHermite<T> {
    pub fn new(x: Vec<T>, y: Vec<T>, dy: Vec<T>) -> Self {
        debug_assert!(x.len() == y.len() && y.len() == dy.len() && x.len() >= 2);
        Self { x, y, dy }
    }

    pub fn eval(&self, t: T) -> T {
        self.eval_with_slope(t).0
    }

    pub fn eval_with_slope(&self, t: T) -> (T, T) {
        let i = locate(&self.x, t);
        hermite_cell(self.x[i], self.x[i + 1], self.y[i], self.y[i + 1], self.dy[i], self.dy[i + 1], t)
    }

    pub fn domain(&self) -> (T, T) {
        (self.x[0], self.x[self.x.len() - 1])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_cubics() {
        let f = |t: f64| t * t * t - 2.0 * t + 1.0;
        let df = |t: f64| 3.0 * t * t - 2.0;
        let x: Vec<f64> = vec![0.0, 0.4, 1.1, 2.0];
        let h = CubicHermite::new(x.clone(), x.iter().map(|&t| f(t)).collect(), x.iter().map(|&t| df(t)).collect());
        for t in [0.1, 0.7, 1.9] {
            let (v, d) = h.eval_with_slope(t);
            assert!((v - f(t)).abs() < 1e-13 && (d - df(t)).abs() < 1e-12);
        }
        let integral = hermite_cell_integral(0.4, 1.1, f(0.4), f(1.1), df(0.4), df(1.1));
        let anti = |t: f64| t.powi(4) / 4.0 - t * t + t;
        assert!((integral - (anti(1.1) - anti(0.4))).abs() < 1e-14);
    }
}
