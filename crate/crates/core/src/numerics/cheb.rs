//! Least-squares Chebyshev fits on an interval.

use crate::error::{Error, Result};
use crate::real::Real;

#[derive(Debug, Clone)]
pub struct ChebFit<T> {
    a: T,
    b: T,
    coef: Vec<T>,
}

impl<T: Real> ChebFit<T> {
    /// Fits a degree-`degree` polynomial to `(x, y)` by QR least squares.
    pub fn fit(x: &[T], y: &[T], degree: usize) -> Result<Self> {
        let m = x.len();
        let p = degree + 1;
        if m < p || y.len() != m {
            return Err(Error::GridTooCoarse(format!("{m} samples for degree {degree} fit")));
        }
        let a = x.iter().copied().fold(T::infinity(), T::min);
        let b = x.iter().copied().fold(T::neg_infinity(), T::max);
        if b <= a {
            return Err(Error::Domain("degenerate fit interval".into()));
        }
        // design matrix stored by columns
        let mut q: Vec<Vec<T>> = vec![vec![T::zero(); m]; p];
        for (i, &xi) in x.iter().enumerate() {
            let s = map_to_unit(xi, a, b);
            let mut t0 = T::one();
            let mut t1 = s;
            for (k, col) in q.iter_mut().enumerate() {
                col[i] = if k == 0 { T::one() } else { t1 };
                if k >= 1 {
                    let t2 = T::lit(2.0) * s * t1 - t0;
                    t0 = t1;
                    t1 = t2;
                }
            }
        }
        let mut r = vec![vec![T::zero(); p]; p];
        for j in 0..p {
            for k in 0..j {
                let dot = dot(&q[k], &q[j]);
                r[k][j] = dot;
                let qk = q[k].clone();
                for (qj, qk) in q[j].iter_mut().zip(&qk) {
                    *qj = *qj - dot * *qk;
                }
            }
            // second pass of Gram-Schmidt for stability
            for k in 0..j {
                let dot = dot(&q[k], &q[j]);
                r[k][j] = r[k][j] + dot;
                let qk = q[k].clone();
                for (qj, qk) in q[j].iter_mut().zip(&qk) {
                    *qj = *qj - dot * *qk;
                }
            }
            let norm = dot(&q[j], &q[j]).sqrt();
            if norm == T::zero() {
                return Err(Error::Domain("rank-deficient fit".into()));
            }
            r[j][j] = norm;
            for v in q[j].iter_mut() {
                *v = *v / norm;
            }
        }
        let rhs: Vec<T> = q.iter().map(|col| dot(col, y)).collect();
        let mut coef = vec![T::zero(); p];
        for j in (0..p).rev() {
            let mut s = rhs[j];
            for k in j + 1..p {
                s = s - r[j][k] * coef[k];
            }
            coef[j] = s / r[j][j];
        }
        Ok(Self { a, b, coef })
    }

    pub fn eval(&self, x: T) -> T {
        let s = map_to_unit(x, self.a, self.b);
        // Clenshaw recurrence
        let mut b1 = T::zero();
        let mut b2 = T::zero();
        for &c in self.coef.iter().skip(1).rev() {
            let b0 = T::lit(2.0) * s * b1 - b2 + c;
            b2 = b1;
            b1 = b0;
        }
        s * b1 - b2 + self.coef[0]
    }

    pub fn derivative(&self) -> Self {
        let n = self.coef.len();
        if n <= 1 {
            return Self { a: self.a, b: self.b, coef: vec![T::zero()] };
        }
        let mut d = vec![T::zero(); n + 1];
        for k in (1..n).rev() {
            d[k - 1] = d[k + 1] + T::lit(2.0) * T::from_usize_lossy(k) * self.coef[k];
        }
        d[0] = d[0] / T::lit(2.0);
        d.truncate(n - 1);
        let scale = T::lit(2.0) / (self.b - self.a);
        Self { a: self.a, b: self.b, coef: d.into_iter().map(|c| c * scale).collect() }
    }
}

fn map_to_unit<T: Real>(x: T, a: T, b: T) -> T {
    (T::lit(2.0) * x - a - b) / (b - a)
}

fn dot<T: Real>(u: &[T], v: &[T]) -> T {
    u.iter().zip(v).fold(T::zero(), |acc, (a, b)| acc + *a * *b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_polynomial_and_derivatives() {
        let x: Vec<f64> = (0..200).map(|i| 1.0 + 0.05 * i as f64 / 199.0).collect();
        let f = |t: f64| 3.0 - 2.0 * t + 0.5 * t.powi(3) + 0.1 * t.powi(5);
        let y: Vec<f64> = x.iter().map(|&t| f(t)).collect();
        let fit = ChebFit::fit(&x, &y, 8).unwrap();
        assert!((fit.eval(1.02) - f(1.02)).abs() < 1e-12);
        let d3 = fit.derivative().derivative().derivative();
        let exact = 3.0 + 6.0 * 1.02f64.powi(2);
        assert!((d3.eval(1.02) - exact).abs() < 1e-5, "{}", d3.eval(1.02));
    }
}
