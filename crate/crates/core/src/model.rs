//! Domain types and the transformation chain between radial profiles and
//! phase-plane variables.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::fd::{apply, fornberg_weights};
use crate::real::Real;

/// Half-width of the centred stencils used on profile grids.
pub const STENCIL_HALF_WIDTH: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams<T> {
    /// Dimension of the radial factor.
    pub n: usize,
    pub theta: T,
    /// Phase-plane eigenvalue parameter; negative for the negative pair.
    pub lambda3: T,
    /// Anchor of the exponential integral, `> 1`.
    pub eta0: T,
}

impl<T: Real> ModelParams<T> {
    pub fn new(n: usize, theta: T, lambda3: T, eta0: T) -> Result<Self> {
        if n < 1 {
            return Err(Error::Parameter("n must be at least 1".into()));
        }
        if !(theta > T::zero()) {
            return Err(Error::Parameter(format!("theta must be positive, got {theta}")));
        }
        if !(eta0 > T::one()) {
            return Err(Error::Parameter(format!("eta0 must exceed 1, got {eta0}")));
        }
        if !lambda3.is_finite() {
            return Err(Error::Parameter("lambda3 must be finite".into()));
        }
        Ok(Self { n, theta, lambda3, eta0 })
    }

    /// Hypotheses of the negative-pair construction.
    pub fn check_negative_pair(n: usize, theta: T) -> Result<()> {
        if !(2..=5).contains(&n) {
            return Err(Error::Parameter(format!("negative-pair solve needs 2 <= n <= 5, got {n}")));
        }
        let nf = T::from_usize_lossy(n);
        if !(theta > (nf - T::lit(7.0)) / (nf * nf)) {
            return Err(Error::Parameter(format!("theta = {theta} must exceed (n-7)/n^2")));
        }
        Ok(())
    }

    /// Whether `theta` lies in `[1/n, n/(n+1))`, where the quadratic upper bound is claimed.
    pub fn upper_bound_claimed(n: usize, theta: T) -> bool {
        let nf = T::from_usize_lossy(n);
        theta >= T::one() / nf && theta < nf / (nf + T::one())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TaylorData<T> {
    /// `zeta'(1)`, always 2.
    pub d1: T,
    /// `zeta''(1)`.
    pub alpha: T,
    /// `zeta'''(1)`.
    pub beta: T,
    /// Centre of the band for `zeta''''`.
    pub gamma: T,
}

/// Radial factor sampled on a grid; `v = u'`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialProfile<T> {
    pub n: usize,
    pub r: Vec<T>,
    pub v: Vec<T>,
    pub u: Vec<T>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualNode<T> {
    pub r: T,
    /// `LHS - lambda' (u'')^2`.
    pub raw: T,
    /// `LHS / (u'')^2 - lambda'`.
    pub scaled: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint<T> {
    pub r: T,
    pub eta: T,
    pub zeta: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LambdaFit<T> {
    /// Coefficient of `(u'')^2` in the radial eigen-ODE.
    pub lambda_prime: T,
    /// Eigenvalue of `u^{ij} D_ij w = lambda w`, equal to `theta * lambda_prime`.
    pub eigenvalue: T,
    /// Relative spread of the per-node estimates.
    pub fit_residual: T,
    pub nodes: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct LambdaFitOptions<T> {
    pub threshold: T,
    /// Added to `|lambda'|` in the spread denominator.
    pub abs_floor: T,
    pub r_min: Option<T>,
    pub r_max: Option<T>,
}

impl<T: Real> Default for LambdaFitOptions<T> {
    fn default() -> Self {
        Self { threshold: T::lit(1e-3), abs_floor: T::lit(1e-8), r_min: None, r_max: None }
    }
}

impl<T: Real> RadialProfile<T> {
    pub fn new(n: usize, r: Vec<T>, v: Vec<T>, u: Vec<T>) -> Result<Self> {
        if r.len() != v.len() || r.len() != u.len() {
            return Err(Error::Parameter("profile columns differ in length".into()));
        }
        if r.first().is_some_and(|&r0| r0 < T::zero()) {
            return Err(Error::Parameter("radii must be nonnegative".into()));
        }
        if r.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Parameter("radii must be strictly increasing".into()));
        }
        Ok(Self { n, r, v, u })
    }

    pub fn from_fn(n: usize, r: Vec<T>, v: impl Fn(T) -> T, u: impl Fn(T) -> T) -> Result<Self> {
        let vs = r.iter().map(|&x| v(x)).collect();
        let us = r.iter().map(|&x| u(x)).collect();
        Self::new(n, r, vs, us)
    }

    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    /// Multiplies `u` (hence `v`) by `kappa`.
    pub fn scaled(&self, kappa: T) -> Self {
        Self {
            n: self.n,
            r: self.r.clone(),
            v: self.v.iter().map(|&x| x * kappa).collect(),
            u: self.u.iter().map(|&x| x * kappa).collect(),
        }
    }

    /// Centred stencil around node `i`, reflecting `v` as an odd function
    /// through `r = 0` when the grid starts at the origin.
    pub fn stencil(&self, i: usize, half: usize) -> Option<(Vec<T>, Vec<T>)> {
        let len = self.len();
        if i + half >= len {
            return None;
        }
        let at_origin = self.r.first().is_some_and(|&r0| r0 == T::zero());
        if i < half && !at_origin {
            return None;
        }
        let mut nodes = Vec::with_capacity(2 * half + 1);
        let mut vals = Vec::with_capacity(2 * half + 1);
        for k in 0..=2 * half {
            let j = i as isize + k as isize - half as isize;
            if j >= 0 {
                nodes.push(self.r[j as usize]);
                vals.push(self.v[j as usize]);
            } else {
                nodes.push(-self.r[(-j) as usize]);
                vals.push(-self.v[(-j) as usize]);
            }
        }
        Some((nodes, vals))
    }

    /// Finite-difference estimates of `v', v'', v''', v''''` at node `i`.
    pub fn derivatives_at(&self, i: usize) -> Option<[T; 4]> {
        let (nodes, vals) = self.stencil(i, STENCIL_HALF_WIDTH)?;
        let w = fornberg_weights(self.r[i], &nodes, 4);
        Some([apply(&w, 1, &vals), apply(&w, 2, &vals), apply(&w, 3, &vals), apply(&w, 4, &vals)])
    }

    /// Derivative estimates at every node with a full centred stencil.
    pub fn derivative_samples(&self) -> Vec<(usize, [T; 4])> {
        (0..self.len()).filter_map(|i| self.derivatives_at(i).map(|d| (i, d))).collect()
    }
}

/// Left-hand side of the radial eigen-ODE given `u', u'', u''', u''''`.
pub fn radial_lhs<T: Real>(r: T, d1: T, d2: T, d3: T, d4: T, theta: T, n: usize) -> T {
    let one = T::one();
    let two = T::lit(2.0);
    let mut lhs = -d4 + (theta + one) * d3 * d3 / d2;
    if n > 1 {
        let m = T::from_usize_lossy(n - 1);
        let ratio = d2 / d1;
        let inv_r = one / r;
        lhs = lhs + two * m * d3 * ((theta - one) * ratio - theta * inv_r);
        lhs = lhs
            + m * d2
                * (ratio - inv_r)
                * ((m * theta - (m - one)) * ratio - (m * theta - one) * inv_r);
    }
    lhs
}

/// Residual of the radial eigen-ODE at every interior node of `profile`.
pub fn radial_residual<T: Real>(
    profile: &RadialProfile<T>,
    theta: T,
    n: usize,
    lambda_prime: T,
) -> Result<Vec<ResidualNode<T>>> {
    if profile.len() < 5 {
        return Err(Error::GridTooCoarse(format!("{} nodes, need at least 5", profile.len())));
    }
    let mut out = Vec::new();
    for (i, d) in profile.derivative_samples() {
        let r = profile.r[i];
        if n > 1 && r == T::zero() {
            continue;
        }
        let [d2, d3, d4, _] = d;
        if !(d2 > T::zero()) {
            return Err(Error::NonConvexProfile { r: r.as_f64() });
        }
        let lhs = radial_lhs(r, profile.v[i], d2, d3, d4, theta, n);
        let sq = d2 * d2;
        out.push(ResidualNode { r, raw: lhs - lambda_prime * sq, scaled: lhs / sq - lambda_prime });
    }
    if out.is_empty() {
        return Err(Error::GridTooCoarse("no node has a full centred stencil".into()));
    }
    Ok(out)
}

/// Least-squares fit of `lambda'` in `LHS = lambda' (u'')^2`.
pub fn effective_lambda_fit<T: Real>(
    profile: &RadialProfile<T>,
    theta: T,
    n: usize,
    opts: &LambdaFitOptions<T>,
) -> Result<LambdaFit<T>> {
    let nodes: Vec<ResidualNode<T>> = radial_residual(profile, theta, n, T::zero())?
        .into_iter()
        .filter(|nd| opts.r_min.map_or(true, |a| nd.r >= a) && opts.r_max.map_or(true, |b| nd.r <= b))
        .collect();
    if nodes.is_empty() {
        return Err(Error::GridTooCoarse("no nodes inside the fit window".into()));
    }
    // LHS = raw (lambda' = 0), weight (u'')^2 = raw / scaled
    let mut num = T::zero();
    let mut den = T::zero();
    for nd in &nodes {
        let sq = if nd.scaled != T::zero() { nd.raw / nd.scaled } else { T::zero() };
        num = num + nd.raw * sq;
        den = den + sq * sq;
    }
    let lambda_prime = if den > T::zero() {
        num / den
    } else {
        nodes.iter().map(|nd| nd.scaled).sum::<T>() / T::from_usize_lossy(nodes.len())
    };
    let spread = nodes.iter().map(|nd| (nd.scaled - lambda_prime).abs()).fold(T::zero(), T::max)
        / (lambda_prime.abs() + opts.abs_floor);
    if spread > opts.threshold {
        return Err(Error::InconsistentProfile { spread: spread.as_f64(), threshold: opts.threshold.as_f64() });
    }
    Ok(LambdaFit { lambda_prime, eigenvalue: theta * lambda_prime, fit_residual: spread, nodes: nodes.len() })
}

/// Phase variables `eta = r v'/v` and `zeta = r d(eta)/dr` at nodes with `r >= r_floor`.
pub fn profile_to_phase<T: Real>(profile: &RadialProfile<T>, r_floor: T) -> Result<Vec<PhasePoint<T>>> {
    let mut out = Vec::new();
    for (i, d) in profile.derivative_samples() {
        let r = profile.r[i];
        if r < r_floor || r == T::zero() {
            continue;
        }
        let v = profile.v[i];
        if !(v.abs() > T::zero()) {
            return Err(Error::DegenerateProfile { r: r.as_f64() });
        }
        let eta = r * d[0] / v;
        let zeta = eta + r * r * d[1] / v - eta * eta;
        out.push(PhasePoint { r, eta, zeta });
    }
    if out.is_empty() {
        return Err(Error::GridTooCoarse("no phase samples above the radius floor".into()));
    }
    Ok(out)
}

/// `(eta, zeta)` pairs sorted by `eta` when `eta` is strictly monotone in `r`.
pub fn monotone_phase_pairs<T: Real>(points: &[PhasePoint<T>]) -> Option<Vec<(T, T)>> {
    let increasing = points.windows(2).all(|w| w[1].eta > w[0].eta);
    let decreasing = points.windows(2).all(|w| w[1].eta < w[0].eta);
    if !(increasing || decreasing) {
        return None;
    }
    let mut pairs: Vec<(T, T)> = points.iter().map(|p| (p.eta, p.zeta)).collect();
    if decreasing {
        pairs.reverse();
    }
    Some(pairs)
}
