//! Cumulative integration on sampled grids.

use crate::numerics::interp::hermite_cell_integral;
use crate::real::Real;

/// Fourth-order cumulative integral on a uniform grid, starting at 0.
///
/// Each cell is integrated with the cubic through four neighbouring nodes.
pub fn cumulative_uniform<T: Real>(y: &[T], h: T) -> Vec<T> {
    let n = y.len();
    let mut out = vec![T::zero(); n];
    if n < 2 {
        return out;
    }
    if n < 4 {
        for i in 1..n {
            out[i] = out[i - 1] + h * (y[i - 1] + y[i]) / T::lit(2.0);
        }
        return out;
    }
    let w24 = h / T::lit(24.0);
    for i in 0..n - 1 {
        let cell = if i == 0 {
            w24 * (T::lit(9.0) * y[0] + T::lit(19.0) * y[1] - T::lit(5.0) * y[2] + y[3])
        } else if i == n - 2 {
            w24 * (T::lit(9.0) * y[n - 1] + T::lit(19.0) * y[n - 2] - T::lit(5.0) * y[n - 3] + y[n - 4])
        } else {
            w24 * (T::lit(13.0) * (y[i] + y[i + 1]) - y[i - 1] - y[i + 2])
        };
        out[i + 1] = out[i] + cell;
    }
    out
}

/// Cumulative integral using values and exact slopes (corrected trapezoid).
pub fn cumulative_hermite<T: Real>(x: &[T], y: &[T], dy: &[T]) -> Vec<T> {
    let mut out = vec![T::zero(); x.len()];
    let mut sum = T::zero();
    let mut carry = T::zero();
    for i in 1..x.len() {
        let cell = hermite_cell_integral(x[i - 1], x[i], y[i - 1], y[i], dy[i - 1], dy[i]);
        // Neumaier compensated summation
        let t = sum + cell;
        carry = carry + if sum.abs() >= cell.abs() { (sum - t) + cell } else { (cell - t) + sum };
        sum = t;
        out[i] = sum + carry;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_rule_is_exact_for_cubics() {
        let h = 0.1;
        let y: Vec<f64> = (0..11).map(|i| (i as f64 * h).powi(3)).collect();
        let c = cumulative_uniform(&y, h);
        for (i, ci) in c.iter().enumerate() {
            assert!((ci - (i as f64 * h).powi(4) / 4.0).abs() < 1e-14);
        }
    }

    #[test]
    fn hermite_rule_fourth_order() {
        let x: Vec<f64> = (0..=50).map(|i| (i as f64 / 50.0).powi(2) * 3.0).collect();
        let y: Vec<f64> = x.iter().map(|t| t.sin()).collect();
        let d: Vec<f64> = x.iter().map(|t| t.cos()).collect();
        let c = cumulative_hermite(&x, &y, &d);
        assert!((c[50] - (1.0 - 3f64.cos())).abs() < 1e-6);
    }
}
