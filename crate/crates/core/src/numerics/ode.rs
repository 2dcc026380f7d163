//! Dormand-Prince 5(4) with step control and output at prescribed nodes.

use crate::error::{Error, Result};
use crate::real::Real;

#[derive(Debug, Clone, Copy)]
pub struct OdeOptions<T> {
    pub rtol: T,
    pub atol: T,
    pub h_init: Option<T>,
    pub h_max: Option<T>,
    pub max_steps: usize,
}

impl<T: Real> Default for OdeOptions<T> {
    fn default() -> Self {
        Self { rtol: T::lit(1e-12), atol: T::lit(1e-14), h_init: None, h_max: None, max_steps: 2_000_000 }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OdeStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Integrates `y' = f(x, y)` from `x0`, returning the state at each node.
///
/// Nodes must be ordered in the direction of integration; steps are clipped
/// so that every node is hit exactly.
pub fn solve_to_nodes<T, const D: usize, F>(
    mut f: F,
    x0: T,
    y0: [T; D],
    nodes: &[T],
    opts: &OdeOptions<T>,
) -> Result<(Vec<[T; D]>, OdeStats)>
where
    T: Real,
    F: FnMut(T, &[T; D]) -> Result<[T; D]>,
{
    let mut stats = OdeStats::default();
    let mut out = Vec::with_capacity(nodes.len());
    let Some(&last) = nodes.last() else {
        return Ok((out, stats));
    };
    let dir = if last >= x0 { T::one() } else { -T::one() };
    let mut x = x0;
    let mut y = y0;
    let mut k1 = f(x, &y)?;
    stats.evaluations += 1;
    let span = (last - x0).abs();
    let mut h = opts.h_init.unwrap_or_else(|| span * T::lit(1e-4)).abs().max(T::min_positive_value());
    let h_max = opts.h_max.unwrap_or(span).abs();
    let tiny = T::epsilon() * T::lit(16.0);

    for &node in nodes {
        if (node - x) * dir < T::zero() {
            return Err(Error::Domain("output nodes not ordered along integration direction".into()));
        }
        while (node - x) * dir > T::zero() {
            if stats.accepted + stats.rejected >= opts.max_steps {
                return Err(Error::StepFailure { x: x.as_f64() });
            }
            let remaining = (node - x).abs();
            let mut step = h.min(h_max);
            let hits_node = step >= remaining;
            if hits_node {
                step = remaining;
            }
            if step <= tiny * x.abs().max(T::one()) && !hits_node {
                return Err(Error::StepFailure { x: x.as_f64() });
            }
            let hs = step * dir;
            let mut k = [[T::zero(); D]; 7];
            k[0] = k1;
            let mut stage_failed = None;
            for s in 1..7 {
                let mut ys = y;
                for (i, yi) in ys.iter_mut().enumerate() {
                    let mut acc = T::zero();
                    for (j, kj) in k.iter().enumerate().take(s) {
                        acc = acc + T::lit(A[s][j]) * kj[i];
                    }
                    *yi = *yi + hs * acc;
                }
                stats.evaluations += 1;
                match f(x + T::lit(C[s]) * hs, &ys) {
                    Ok(v) => k[s] = v,
                    Err(e) => {
                        stage_failed = Some(e);
                        break;
                    }
                }
            }
            if let Some(e) = stage_failed {
                if step <= tiny * x.abs().max(T::one()) {
                    return Err(e);
                }
                stats.rejected += 1;
                h = step * T::lit(0.25);
                continue;
            }
            let mut y_new = y;
            let mut err_sq = T::zero();
            for i in 0..D {
                let mut acc = T::zero();
                let mut eacc = T::zero();
                for s in 0..6 {
                    acc = acc + T::lit(A[6][s]) * k[s][i];
                }
                for s in 0..7 {
                    eacc = eacc + T::lit(E[s]) * k[s][i];
                }
                y_new[i] = y[i] + hs * acc;
                let sc = opts.atol + opts.rtol * y[i].abs().max(y_new[i].abs());
                let ei = hs * eacc / sc;
                err_sq = err_sq + ei * ei;
            }
            let err = (err_sq / T::from_usize_lossy(D)).sqrt();
            if !err.is_finite() {
                stats.rejected += 1;
                h = step * T::lit(0.2);
                continue;
            }
            let fac = if err == T::zero() {
                T::lit(5.0)
            } else {
                (T::lit(0.9) * err.powf(T::lit(-0.2))).min(T::lit(5.0)).max(T::lit(0.2))
            };
            if err <= T::one() {
                x = if hits_node { node } else { x + hs };
                y = y_new;
                k1 = k[6];
                stats.accepted += 1;
                if !hits_node || fac < T::one() {
                    h = step * fac;
                }
            } else {
                stats.rejected += 1;
                h = step * fac.min(T::one());
            }
        }
        out.push(y);
    }
    Ok((out, stats))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator_period() {
        let nodes = [std::f64::consts::PI, 2.0 * std::f64::consts::PI];
        let (ys, _) = solve_to_nodes(|_, y: &[f64; 2]| Ok([y[1], -y[0]]), 0.0, [1.0, 0.0], &nodes, &OdeOptions::default())
            .unwrap();
        assert!((ys[0][0] + 1.0).abs() < 1e-10);
        assert!((ys[1][0] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn backward_integration() {
        let (ys, _) = solve_to_nodes(|_, y: &[f64; 1]| Ok([y[0]]), 1.0, [1.0], &[0.0], &OdeOptions::default()).unwrap();
        assert!((ys[0][0] - (-1f64).exp()).abs() < 1e-12);
    }
}
