//! Finite-difference weights on arbitrary stencils.

use crate::real::Real;

/// Fornberg's recursion: `w[k][j]` is the weight of node `x[j]` in the
/// k-th derivative at `z`, for `k = 0..=m`.
pub fn fornberg_weights<T: Real>(z: T, x: &[T], m: usize) -> Vec<Vec<T>> {
    let n = x.len();
    let mut c = vec![vec![T::zero(); n]; m + 1];
    if n == 0 {
        return c;
    }
    let mut c1 = T::one();
    let mut c4 = x[0] - z;
    c[0][0] = T::one();
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = T::one();
        let c5 = c4;
        c4 = x[i] - z;
        for j in 0..i {
            let c3 = x[i] - x[j];
            c2 = c2 * c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    let kk = T::from_usize_lossy(k);
                    c[k][i] = c1 * (kk * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                let kk = T::from_usize_lossy(k);
                c[k][j] = (c4 * c[k][j] - kk * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// Applies weights for derivative `k` to sampled values.
pub fn apply<T: Real>(w: &[Vec<T>], k: usize, values: &[T]) -> T {
    w[k].iter().zip(values).fold(T::zero(), |acc, (a, b)| acc + *a * *b)
}

/// Second derivative by a central difference with one Richardson step.
pub fn second_derivative<T: Real, F: FnMut(T) -> T>(mut f: F, x: T, h: T) -> T {
    let two = T::lit(2.0);
    let f0 = f(x);
    let d = |f: &mut F, h: T| (f(x + h) - two * f0 + f(x - h)) / (h * h);
    let coarse = d(&mut f, h);
    let fine = d(&mut f, h / two);
    (T::lit(4.0) * fine - coarse) / T::lit(3.0)
}
