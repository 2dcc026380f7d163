//! Truncated power series arithmetic.

use crate::real::Real;

/// Coefficients `c[k]` of `sum c[k] x^k`, truncated at a fixed length.
#[derive(Debug, Clone, PartialEq)]
pub struct Series<T> {
    pub c: Vec<T>,
}

impl<T: Real> Series<T> {
    pub fn zeros(len: usize) -> Self {
        Self { c: vec![T::zero(); len] }
    }

    pub fn from_coeffs(mut c: Vec<T>, len: usize) -> Self {
        c.resize(len, T::zero());
        Self { c }
    }

    pub fn constant(a: T, len: usize) -> Self {
        Self::from_coeffs(vec![a], len)
    }

    /// `a + b x`.
    pub fn linear(a: T, b: T, len: usize) -> Self {
        Self::from_coeffs(vec![a, b], len)
    }

    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        Self { c: self.c.iter().zip(&o.c).map(|(a, b)| *a + *b).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self { c: self.c.iter().zip(&o.c).map(|(a, b)| *a - *b).collect() }
    }

    pub fn scale(&self, s: T) -> Self {
        Self { c: self.c.iter().map(|a| *a * s).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.len();
        let mut c = vec![T::zero(); n];
        for i in 0..n {
            for j in 0..n - i {
                c[i + j] = c[i + j] + self.c[i] * o.c[j];
            }
        }
        Self { c }
    }

    /// Quotient; requires a nonzero constant term in the divisor.
    pub fn div(&self, o: &Self) -> Self {
        let n = self.len();
        let mut q = vec![T::zero(); n];
        for k in 0..n {
            let mut s = self.c[k];
            for j in 1..=k {
                s = s - o.c[j] * q[k - j];
            }
            q[k] = s / o.c[0];
        }
        Self { c: q }
    }

    pub fn exp(&self) -> Self {
        let n = self.len();
        let mut e = vec![T::zero(); n];
        e[0] = self.c[0].exp();
        for k in 1..n {
            let mut s = T::zero();
            for j in 1..=k {
                s = s + T::from_usize_lossy(j) * self.c[j] * e[k - j];
            }
            e[k] = s / T::from_usize_lossy(k);
        }
        Self { c: e }
    }

    /// Antiderivative vanishing at 0.
    pub fn integrate(&self) -> Self {
        let n = self.len();
        let mut c = vec![T::zero(); n];
        for (k, ck) in c.iter_mut().enumerate().skip(1) {
            *ck = self.c[k - 1] / T::from_usize_lossy(k);
        }
        Self { c }
    }

    pub fn derivative(&self) -> Self {
        let n = self.len();
        let mut c = vec![T::zero(); n];
        for k in 1..n {
            c[k - 1] = self.c[k] * T::from_usize_lossy(k);
        }
        Self { c }
    }

    /// Division by `x`; the constant term is discarded and the top coefficient is lost.
    pub fn shift_down(&self) -> Self {
        let n = self.len();
        let mut c = vec![T::zero(); n];
        c[..(n - 1)].copy_from_slice(&self.c[1..n]);
        Self { c }
    }

    pub fn eval(&self, x: T) -> T {
        self.c.iter().rev().fold(T::zero(), |acc, &a| acc * x + a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_log_identities() {
        let n = 8;
        let x = Series::linear(0.0f64, 1.0, n);
        let e = x.exp();
        let mut fact = 1.0;
        for k in 0..n {
            if k > 0 {
                fact *= k as f64;
            }
            assert!((e.c[k] - 1.0 / fact).abs() < 1e-15);
        }
        let one_plus_x = Series::<f64>::linear(1.0, 1.0, n);
        let inv = Series::constant(1.0, n).div(&one_plus_x);
        for k in 0..n {
            assert_eq!(inv.c[k], if k % 2 == 0 { 1.0 } else { -1.0 });
        }
        assert_eq!(one_plus_x.mul(&inv).c[0], 1.0);
        assert!(one_plus_x.mul(&inv).c[1..].iter().all(|c: &f64| c.abs() < 1e-15));
    }
}
