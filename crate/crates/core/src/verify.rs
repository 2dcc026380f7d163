//! Assembly of `u(x, y, z) = kappa phi(|x|) + psi(|y|) + |z|^2 / 2` and
//! independent finite-difference verification of the full equation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{effective_lambda_fit, LambdaFitOptions, RadialProfile};
use crate::numerics::fd::{apply, fornberg_weights};
use crate::numerics::interp::locate;
use crate::real::Real;
use crate::reconstruct::{large_condition_check, LargeCondition};

/// Nodes used by the local interpolant of a sampled profile.
pub const INTERP_NODES: usize = 8;
/// Relative finite-difference step for `D^2 w`.
pub const FD_STEP: f64 = 1e-3;
/// Determinant below which a point is rejected.
pub const DET_FLOOR: f64 = 1e-12;
pub const RESIDUAL_TOLERANCE: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparableSolution<T> {
    pub theta: T,
    /// Scale applied to the one-dimensional factor.
    pub kappa: T,
    /// Eigenvalue of the scaled one-dimensional factor.
    pub lambda_phi: T,
    /// Eigenvalue of the radial factor.
    pub lambda_psi: T,
    pub m_cylinder: usize,
    /// `1 + n + m`.
    pub dimension: usize,
    /// Scaled one-dimensional factor; `v = phi'`.
    pub phi: RadialProfile<T>,
    /// Radial factor on `B_R`; `v = psi'`.
    pub psi: RadialProfile<T>,
    /// `ln R` of the radial factor's domain, `None` for an entire factor.
    pub t_inf: Option<T>,
    pub anchor_radius: T,
    /// `psi'` at the anchor radius.
    pub anchor_value: T,
}

#[derive(Debug, Clone, Copy)]
pub struct AssembleOptions<T> {
    pub theta: T,
    pub phi_fit: LambdaFitOptions<T>,
    pub psi_fit: LambdaFitOptions<T>,
    pub t_inf: Option<T>,
    pub anchor_radius: T,
}

impl<T: Real> AssembleOptions<T> {
    /// Fit windows `[0.05, 8]` for `phi` and `[0.05, 0.85 r_last]` for `psi`.
    pub fn new(theta: T, psi: &RadialProfile<T>, t_inf: Option<T>) -> Self {
        let r_last = psi.r.last().copied().unwrap_or(T::one());
        Self {
            theta,
            phi_fit: LambdaFitOptions { r_min: Some(T::lit(0.05)), r_max: Some(T::lit(8.0)), ..Default::default() },
            psi_fit: LambdaFitOptions { r_min: Some(T::lit(0.05)), r_max: Some(T::lit(0.85) * r_last), ..Default::default() },
            t_inf,
            anchor_radius: T::one(),
        }
    }
}

/// `theta` range in which a positive and a negative pair can be glued in dimension `n + 1`.
pub fn assembly_range<T: Real>(n: usize) -> (T, T) {
    let n = T::from_usize_lossy(n);
    (T::lit(0.5), n / (n + T::one()))
}

/// Fits both eigenvalues, rescales `phi` so they cancel and appends `m_cylinder` flat coordinates.
pub fn assemble<T: Real>(
    phi: &RadialProfile<T>,
    psi: &RadialProfile<T>,
    m_cylinder: usize,
    opts: &AssembleOptions<T>,
) -> Result<SeparableSolution<T>> {
    if phi.n != 1 {
        return Err(Error::Parameter(format!("phi must be one-dimensional, got n = {}", phi.n)));
    }
    let fp = effective_lambda_fit(phi, opts.theta, 1, &opts.phi_fit)?;
    let fq = effective_lambda_fit(psi, opts.theta, psi.n, &opts.psi_fit)?;
    let (lp, lq) = (fp.eigenvalue, fq.eigenvalue);
    if !(lp > T::zero() && lq < T::zero()) {
        return Err(Error::SignError { lambda_phi: lp.as_f64(), lambda_psi: lq.as_f64() });
    }
    let (lo, hi) = assembly_range::<T>(psi.n);
    if !(opts.theta > lo && opts.theta < hi) {
        return Err(Error::Parameter(format!(
            "theta = {} outside ({lo}, {hi}) for dimension {}",
            opts.theta,
            psi.n + 1
        )));
    }
    let kappa = lp / (-lq);
    let anchor_value = ProfileSampler::new(psi).sample(opts.anchor_radius).0;
    Ok(SeparableSolution {
        theta: opts.theta,
        kappa,
        lambda_phi: lp / kappa,
        lambda_psi: lq,
        m_cylinder,
        dimension: 1 + psi.n + m_cylinder,
        phi: phi.scaled(kappa),
        psi: psi.clone(),
        t_inf: opts.t_inf,
        anchor_radius: opts.anchor_radius,
        anchor_value,
    })
}

/// Local Lagrange interpolant of `v` and `v'`, odd through `r = 0`.
#[derive(Debug, Clone, Copy)]
pub struct ProfileSampler<'a, T> {
    r: &'a [T],
    v: &'a [T],
}

impl<'a, T: Real> ProfileSampler<'a, T> {
    pub fn new(profile: &'a RadialProfile<T>) -> Self {
        Self { r: &profile.r, v: &profile.v }
    }

    /// `(v, v')` at `rho >= 0`.
    pub fn sample(&self, rho: T) -> (T, T) {
        let len = self.r.len() as isize;
        let half = (INTERP_NODES / 2) as isize;
        let at_origin = self.r.first() == Some(&T::zero());
        let i = locate(self.r, rho) as isize;
        let lo_limit = if at_origin { -(len - 1) } else { 0 };
        let start = (i - half + 1).max(lo_limit).min(len - INTERP_NODES as isize).max(lo_limit);
        let mut nodes = Vec::with_capacity(INTERP_NODES);
        let mut vals = Vec::with_capacity(INTERP_NODES);
        for j in start..(start + INTERP_NODES as isize).min(len) {
            if j >= 0 {
                nodes.push(self.r[j as usize]);
                vals.push(self.v[j as usize]);
            } else {
                nodes.push(-self.r[(-j) as usize]);
                vals.push(-self.v[(-j) as usize]);
            }
        }
        let w = fornberg_weights(rho, &nodes, 1);
        (apply(&w, 0, &vals), apply(&w, 1, &vals))
    }
}

/// Radial factor seen from a point of the product space.
struct Factors<'a, T> {
    phi: ProfileSampler<'a, T>,
    psi: ProfileSampler<'a, T>,
    n: usize,
    theta: T,
}

/// Eigen-data of the Hessian at a point.
struct LocalHessian<T> {
    /// `phi''(x)`.
    phi2: T,
    /// `psi'(rho) / rho`, or `psi''(0)` at the origin.
    tangential: T,
    /// `psi''(rho)`.
    radial: T,
    rho: T,
}

impl<T: Real> LocalHessian<T> {
    fn det(&self, n: usize) -> T {
        self.phi2 * self.radial * self.tangential.powi(n as i32 - 1)
    }

    fn min_eigenvalue(&self, n: usize, m: usize) -> T {
        let mut e = self.phi2.min(self.radial);
        if n > 1 {
            e = e.min(self.tangential);
        }
        if m > 0 {
            e = e.min(T::one());
        }
        e
    }
}

impl<'a, T: Real> Factors<'a, T> {
    fn hessian(&self, p: &[T]) -> LocalHessian<T> {
        let x = p[0].abs();
        let rho = p[1..=self.n].iter().map(|&c| c * c).sum::<T>().sqrt();
        let (_, phi2) = self.phi.sample(x);
        let (v, dv) = self.psi.sample(rho);
        let tangential = if rho > T::zero() { v / rho } else { dv };
        LocalHessian { phi2, tangential, radial: dv, rho }
    }

    fn w(&self, p: &[T]) -> T {
        self.hessian(p).det(self.n).powf(-self.theta)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions<T> {
    pub points: usize,
    pub seed: u64,
    /// Relative step of the nested differences.
    pub step: T,
    /// `|x| <= x_range`.
    pub x_range: T,
    /// `|y| <= y_fraction * R`, or `<= y_fraction * r_last` for an entire factor.
    pub y_fraction: T,
    /// `|z_k| <= z_range`.
    pub z_range: T,
    pub tolerance: T,
    /// Growth target for the completeness check.
    pub ceiling: T,
}

impl<T: Real> Default for VerifyOptions<T> {
    fn default() -> Self {
        Self {
            points: 1000,
            seed: 20240607,
            step: T::lit(FD_STEP),
            x_range: T::lit(10.0),
            y_fraction: T::lit(0.9),
            z_range: T::one(),
            tolerance: T::lit(RESIDUAL_TOLERANCE),
            ceiling: T::lit(1e6),
        }
    }
}

/// Seeded interior points, away from the origin of the radial factor by `10 step`.
pub fn sample_points<T: Real>(sol: &SeparableSolution<T>, opts: &VerifyOptions<T>) -> Vec<Vec<T>> {
    let n = sol.psi.n;
    let y_max = opts.y_fraction * sol.t_inf.map_or_else(|| sol.psi.r.last().copied().unwrap_or(T::one()), |t| t.exp());
    let x_max = opts.x_range.min(sol.phi.r.last().copied().unwrap_or(T::one()) * T::lit(0.9));
    let exclusion = T::lit(10.0) * opts.step;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut uniform = |a: T| a * T::lit(rng.gen_range(-1.0..=1.0));
    let mut out = Vec::with_capacity(opts.points);
    while out.len() < opts.points {
        let mut p = Vec::with_capacity(sol.dimension);
        p.push(uniform(x_max));
        let y: Vec<T> = (0..n).map(|_| uniform(y_max)).collect();
        let rho = y.iter().map(|&c| c * c).sum::<T>().sqrt();
        if rho > y_max || rho < exclusion {
            continue;
        }
        p.extend(y);
        p.extend((0..sol.m_cylinder).map(|_| uniform(opts.z_range)));
        out.push(p);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PointResidual<T> {
    /// `u^{ij} D_ij w / w`.
    pub residual: T,
    pub det: T,
    pub min_eigenvalue: T,
}

fn residual_at<T: Real>(f: &Factors<'_, T>, m: usize, p: &[T], step: T) -> Result<PointResidual<T>> {
    let hess = f.hessian(p);
    let det = hess.det(f.n);
    if !(det >= T::lit(DET_FLOOR)) {
        return Err(Error::NearSingular { det: det.as_f64() });
    }
    let dim = 1 + f.n + m;
    let w0 = f.w(p);
    let steps: Vec<T> = p.iter().map(|&c| step * c.abs().max(T::one())).collect();
    let eval = |q: &mut Vec<T>, i: usize, a: T, j: usize, b: T| {
        q[i] = q[i] + a;
        q[j] = q[j] + b;
        let r = f.w(q);
        q[i] = q[i] - a;
        q[j] = q[j] - b;
        r
    };
    let mut q = p.to_vec();
    let mut second = |i: usize, j: usize, scale: T| -> T {
        let (hi, hj) = (steps[i] * scale, steps[j] * scale);
        if i == j {
            let two = T::lit(2.0);
            (eval(&mut q, i, hi, i, T::zero()) - two * w0 + eval(&mut q, i, -hi, i, T::zero())) / (hi * hi)
        } else {
            (eval(&mut q, i, hi, j, hj) - eval(&mut q, i, hi, j, -hj) - eval(&mut q, i, -hi, j, hj)
                + eval(&mut q, i, -hi, j, -hj))
                / (T::lit(4.0) * hi * hj)
        }
    };
    let mut d2 = |i: usize, j: usize| (T::lit(4.0) * second(i, j, T::lit(0.5)) - second(i, j, T::one())) / T::lit(3.0);

    let mut sum = d2(0, 0) / hess.phi2;
    let yhat: Vec<T> = p[1..=f.n].iter().map(|&c| c / hess.rho).collect();
    for a in 0..f.n {
        for b in a..f.n {
            let proj = yhat[a] * yhat[b];
            let delta = if a == b { T::one() } else { T::zero() };
            let inv = (delta - proj) / hess.tangential + proj / hess.radial;
            let mult = if a == b { T::one() } else { T::lit(2.0) };
            sum = sum + mult * inv * d2(1 + a, 1 + b);
        }
    }
    for k in (1 + f.n)..dim {
        sum = sum + d2(k, k);
    }
    Ok(PointResidual { residual: sum / w0, det, min_eigenvalue: hess.min_eigenvalue(f.n, m) })
}

fn factors<T: Real>(sol: &SeparableSolution<T>) -> Factors<'_, T> {
    Factors { phi: ProfileSampler::new(&sol.phi), psi: ProfileSampler::new(&sol.psi), n: sol.psi.n, theta: sol.theta }
}

/// `u^{ij} D_ij w / w` at one point.
pub fn point_residual<T: Real>(sol: &SeparableSolution<T>, p: &[T], step: T) -> Result<PointResidual<T>> {
    if p.len() != sol.dimension {
        return Err(Error::Parameter(format!("point has {} coordinates, expected {}", p.len(), sol.dimension)));
    }
    residual_at(&factors(sol), sol.m_cylinder, p, step)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport<T> {
    pub dimension: usize,
    pub theta: T,
    pub kappa: T,
    pub points: usize,
    pub max_abs_residual: T,
    pub mean_abs_residual: T,
    pub rms_residual: T,
    pub worst_point: Vec<T>,
    /// `lambda_phi + lambda_psi` after scaling.
    pub eigenvalue_sum: T,
    pub min_hessian_eigenvalue: T,
    pub min_det: T,
    pub tolerance: T,
    pub residual_pass: bool,
    pub convexity_pass: bool,
    pub completeness: Option<Completeness<T>>,
    pub pass: bool,
}

/// Residual, convexity and determinant statistics over `points`.
pub fn full_residual<T: Real>(sol: &SeparableSolution<T>, points: &[Vec<T>], opts: &VerifyOptions<T>) -> Result<VerificationReport<T>> {
    let f = factors(sol);
    let mut max_abs = T::zero();
    let mut sum_abs = T::zero();
    let mut sum_sq = T::zero();
    let mut worst = Vec::new();
    let mut min_eig = T::infinity();
    let mut min_det = T::infinity();
    for p in points {
        if p.len() != sol.dimension {
            return Err(Error::Parameter(format!("point has {} coordinates, expected {}", p.len(), sol.dimension)));
        }
        let r = residual_at(&f, sol.m_cylinder, p, opts.step)?;
        let a = r.residual.abs();
        if !(a <= max_abs) {
            max_abs = a;
            worst = p.clone();
        }
        sum_abs = sum_abs + a;
        sum_sq = sum_sq + a * a;
        min_eig = min_eig.min(r.min_eigenvalue);
        min_det = min_det.min(r.det);
    }
    let count = T::from_usize_lossy(points.len().max(1));
    let residual_pass = !points.is_empty() && max_abs < opts.tolerance;
    let convexity_pass = !points.is_empty() && min_eig > T::zero();
    Ok(VerificationReport {
        dimension: sol.dimension,
        theta: sol.theta,
        kappa: sol.kappa,
        points: points.len(),
        max_abs_residual: max_abs,
        mean_abs_residual: sum_abs / count,
        rms_residual: (sum_sq / count).sqrt(),
        worst_point: worst,
        eigenvalue_sum: sol.lambda_phi + sol.lambda_psi,
        min_hessian_eigenvalue: min_eig,
        min_det,
        tolerance: opts.tolerance,
        residual_pass,
        convexity_pass,
        completeness: None,
        pass: residual_pass && convexity_pass,
    })
}

/// Residual, convexity and completeness in one report.
pub fn verify_solution<T: Real>(sol: &SeparableSolution<T>, opts: &VerifyOptions<T>) -> Result<VerificationReport<T>> {
    let points = sample_points(sol, opts);
    let mut report = full_residual(sol, &points, opts)?;
    let c = completeness_check(sol, opts.ceiling);
    report.pass = report.pass && c.pass;
    report.completeness = Some(c);
    Ok(report)
}

/// Minimum Hessian eigenvalue over `points`.
pub fn convexity_check<T: Real>(sol: &SeparableSolution<T>, points: &[Vec<T>]) -> T {
    let f = factors(sol);
    points
        .iter()
        .map(|p| f.hessian(p).min_eigenvalue(sol.psi.n, sol.m_cylinder))
        .fold(T::infinity(), T::min)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Completeness<T> {
    pub pass: bool,
    pub ceiling: T,
    /// `phi` grows at least linearly.
    pub phi_divergent: bool,
    /// Radius where the convex minorant of `phi` reaches the ceiling.
    pub phi_radius_to_ceiling: T,
    pub psi: LargeCondition<T>,
    /// Radius where the fitted divergence of `psi` reaches the ceiling.
    pub psi_radius_to_ceiling: T,
}

/// Tangent-line minorant `u_k + v_k (r - r_k)` of a convex radial factor at its last node.
fn linear_escape<T: Real>(p: &RadialProfile<T>, ceiling: T) -> (bool, T) {
    let k = p.len() - 1;
    let (r, u, v) = (p.r[k], p.u[k], p.v[k]);
    let convex_tail = p.v[k.saturating_sub(8)..].windows(2).all(|w| w[1] >= w[0]);
    let ok = v > T::zero() && convex_tail;
    let radius = if ok { r + (ceiling - u).max(T::zero()) / v } else { T::infinity() };
    (ok, radius)
}

/// `u -> +infinity` at the boundary of `R^{1+m} x B_R`.
pub fn completeness_check<T: Real>(sol: &SeparableSolution<T>, ceiling: T) -> Completeness<T> {
    let (phi_divergent, phi_radius) = linear_escape(&sol.phi, ceiling);
    let psi = large_condition_check(&sol.psi, sol.t_inf, sol.anchor_radius, sol.anchor_value);
    let psi_radius = match sol.t_inf {
        None => linear_escape(&sol.psi, ceiling).1,
        Some(t_inf) => {
            let k = sol.psi.len() - 1;
            let (r, u) = (sol.psi.r[k], sol.psi.u[k]);
            if psi.divergent {
                let log_gap = (t_inf - r.ln()).ln() - (ceiling - u).max(T::zero()) / psi.divergence_rate;
                (t_inf - log_gap.exp()).exp()
            } else {
                T::infinity()
            }
        }
    };
    let psi_ok = match sol.t_inf {
        None => linear_escape(&sol.psi, ceiling).0,
        Some(_) => psi.divergent,
    };
    Completeness {
        pass: phi_divergent && psi_ok,
        ceiling,
        phi_divergent,
        phi_radius_to_ceiling: phi_radius,
        psi,
        psi_radius_to_ceiling: psi_radius,
    }
}

/// Largest `|psi'''|` over interior nodes with a full stencil, and where it occurs.
pub fn non_quadratic_witness<T: Real>(profile: &RadialProfile<T>, r_max: T) -> Option<(T, T)> {
    profile
        .derivative_samples()
        .into_iter()
        .filter(|(i, _)| profile.r[*i] > T::zero() && profile.r[*i] <= r_max)
        .map(|(i, d)| (profile.r[i], d[1].abs()))
        .fold(None, |best: Option<(T, T)>, c| match best {
            Some(b) if b.1 >= c.1 => Some(b),
            _ => Some(c),
        })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Domain1d {
    Line,
    /// `(0, 1)` after translation and scaling.
    Interval,
    /// `(0, infinity)` after translation and reflection.
    HalfLine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict1d {
    /// Quadratic branch on the line.
    Admissible,
    NotConvex,
    NotLarge,
    /// A non-quadratic branch that is convex and large.
    Counterexample,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Branch1d<T> {
    pub domain: Domain1d,
    pub c2: T,
    pub c3: T,
    pub verdict: Verdict1d,
    /// First point where `(u'')^{-theta}` is not positive, or the endpoint where `u` stays bounded.
    pub witness: Option<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Bernstein1dReport<T> {
    pub theta: T,
    pub samples: usize,
    pub pass: bool,
    pub branches: Vec<Branch1d<T>>,
}

/// `u` up to an affine function for `u'' = (c3 - theta c2 x)^{-1/theta}`.
pub fn branch_potential<T: Real>(theta: T, c2: T, c3: T, x: T) -> T {
    let a = c3;
    let b = -theta * c2;
    let p = theta.recip();
    if b == T::zero() {
        return x * x / (T::lit(2.0) * a.powf(p));
    }
    let l = a + b * x;
    let one = T::one();
    let two = T::lit(2.0);
    if (p - one).abs() < T::epsilon() {
        (l * l.ln() - l) / (b * b)
    } else if (p - two).abs() < T::epsilon() {
        -l.ln() / (b * b)
    } else {
        l.powf(two - p) / (b * b * (one - p) * (two - p))
    }
}

/// Sampled `(C2, C3)` values.
const C_GRID: [f64; 7] = [-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0];
/// Half-width of the sampled part of the line.
const LINE_EXTENT: f64 = 1e3;
const SCAN_POINTS: usize = 4001;

fn classify<T: Real>(theta: T, domain: Domain1d, c2: T, c3: T) -> Branch1d<T> {
    let lin = |x: T| c3 - theta * c2 * x;
    let (a, b) = match domain {
        Domain1d::Line => (-T::lit(LINE_EXTENT), T::lit(LINE_EXTENT)),
        Domain1d::Interval => (T::zero(), T::one()),
        Domain1d::HalfLine => (T::zero(), T::lit(LINE_EXTENT)),
    };
    let branch = |verdict, witness| Branch1d { domain, c2, c3, verdict, witness };
    // convexity on the open domain: the linear factor stays positive at interior samples
    let mut first_bad = None;
    for k in 1..SCAN_POINTS - 1 {
        let x = a + (b - a) * T::from_usize_lossy(k) / T::from_usize_lossy(SCAN_POINTS - 1);
        if !(lin(x) > T::zero()) {
            first_bad = Some(x);
            break;
        }
    }
    // the factor is affine: positivity on the open domain reduces to its endpoint limits
    if first_bad.is_none() && domain != Domain1d::Line {
        if lin(a) < T::zero() {
            first_bad = Some(a);
        } else if domain == Domain1d::Interval && lin(b) < T::zero() {
            first_bad = Some(b);
        } else if domain == Domain1d::HalfLine && theta * c2 > T::zero() {
            first_bad = Some(c3 / (theta * c2));
        }
    }
    if domain == Domain1d::Line && c2 != T::zero() {
        // the zero of the linear factor, if outside the sampled window
        first_bad = first_bad.or(Some(c3 / (theta * c2)));
    }
    if let Some(x) = first_bad {
        return branch(Verdict1d::NotConvex, Some(x));
    }
    if domain == Domain1d::Line {
        return if c2 == T::zero() && c3 > T::zero() {
            branch(Verdict1d::Admissible, None)
        } else {
            branch(Verdict1d::NotConvex, Some(T::zero()))
        };
    }
    // largeness at finite endpoints: u bounded there unless the factor vanishes and 1/theta >= 2
    let ends: &[T] = match domain {
        Domain1d::Interval => &[T::zero(), T::one()],
        _ => &[T::zero()],
    };
    for &e in ends {
        let bounded = lin(e) > T::zero() || theta.recip() < T::lit(2.0);
        if bounded {
            let inward = if e == T::zero() { T::one() } else { -T::one() };
            let near = e + inward * T::lit(1e-12);
            let value = branch_potential(theta, c2, c3, near);
            if value.is_finite() {
                return branch(Verdict1d::NotLarge, Some(e));
            }
        }
    }
    branch(Verdict1d::Counterexample, None)
}

/// Case analysis for `N = 1`: every non-quadratic branch on the line, the
/// interval and the half-line fails convexity or the large condition.
pub fn bernstein_1d_check<T: Real>(theta: T) -> Result<Bernstein1dReport<T>> {
    if !(theta > T::zero()) {
        return Err(Error::Parameter(format!("theta = {theta} must be positive")));
    }
    let mut branches = Vec::new();
    for domain in [Domain1d::Line, Domain1d::Interval, Domain1d::HalfLine] {
        for &c2 in &C_GRID {
            for &c3 in &C_GRID {
                branches.push(classify(theta, domain, T::lit(c2), T::lit(c3)));
            }
        }
    }
    let pass = branches.iter().all(|b| b.verdict != Verdict1d::Counterexample)
        && branches.iter().any(|b| b.verdict == Verdict1d::Admissible);
    Ok(Bernstein1dReport { theta, samples: branches.len(), pass, branches })
}
