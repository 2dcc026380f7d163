//! Bracketing root finders for monotone scalar maps.

use crate::error::{Error, Result};
use crate::real::Real;

/// Bisection on `[lo, hi]` where `f(lo)` and `f(hi)` differ in sign.
pub fn bisect<T: Real, F: FnMut(T) -> Result<T>>(mut f: F, mut lo: T, mut hi: T, xtol: T, max_iter: usize) -> Result<T> {
    let mut flo = f(lo)?;
    if flo == T::zero() {
        return Ok(lo);
    }
    let fhi = f(hi)?;
    if fhi == T::zero() {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::Domain("root not bracketed".into()));
    }
    for _ in 0..max_iter {
        let mid = (lo + hi) / T::lit(2.0);
        if (hi - lo).abs() <= xtol || mid == lo || mid == hi {
            return Ok(mid);
        }
        let fm = f(mid)?;
        if fm == T::zero() {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Err(Error::Convergence { iterations: max_iter })
}

/// Newton iteration safeguarded by a bisection bracket. `fdf` returns `(f, f')`.
pub fn newton_bracketed<T: Real, F: FnMut(T) -> Result<(T, T)>>(
    mut fdf: F,
    mut lo: T,
    mut hi: T,
    xtol: T,
    max_iter: usize,
) -> Result<T> {
    let (flo, _) = fdf(lo)?;
    let (fhi, _) = fdf(hi)?;
    if flo == T::zero() {
        return Ok(lo);
    }
    if fhi == T::zero() {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::Domain("root not bracketed".into()));
    }
    let lo_sign = flo.signum();
    let mut x = (lo + hi) / T::lit(2.0);
    for _ in 0..max_iter {
        let (fx, dfx) = fdf(x)?;
        if fx == T::zero() {
            return Ok(x);
        }
        if fx.signum() == lo_sign {
            lo = x;
        } else {
            hi = x;
        }
        let newton = x - fx / dfx;
        let next = if dfx != T::zero() && newton.is_finite() && (newton - lo) * (newton - hi) < T::zero() {
            newton
        } else {
            (lo + hi) / T::lit(2.0)
        };
        if (next - x).abs() <= xtol || (hi - lo).abs() <= xtol {
            return Ok(next);
        }
        x = next;
    }
    Err(Error::Convergence { iterations: max_iter })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisection_finds_sqrt2() {
        let r = bisect(|x: f64| Ok(x * x - 2.0), 0.0, 2.0, 1e-14, 200).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn newton_matches_bisection() {
        let r = newton_bracketed(|x: f64| Ok((x.exp() - 3.0, x.exp())), 0.0, 2.0, 1e-15, 100).unwrap();
        assert!((r - 3f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn reports_missing_bracket() {
        assert!(bisect(|x: f64| Ok(x * x + 1.0), -1.0, 1.0, 1e-12, 50).is_err());
    }
}
