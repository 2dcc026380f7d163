//! End-to-end runs shared by the command line, the examples and the tests.

use serde::Serialize;

use crate::error::Result;
use crate::model::RadialProfile;
use crate::negative_pair::{
    blowup_time, extend_global, fixed_point_solve, growth_bounds_check, phase_residual, Blowup, BoundCheck,
    FixedPointOptions, GlobalSolve, GrowthBounds, LocalSolve, PhaseResidual, DEFAULT_ETA_MAX,
};
use crate::positive_pair::{build_phi, PositivePairConfig};
use crate::real::Real;
use crate::reconstruct::{profile_grid, rebuild_profile, ANCHOR_RADIUS};
use crate::verify::{assemble, AssembleOptions, SeparableSolution};

#[derive(Debug, Clone, Copy)]
pub struct NegativeOptions<T> {
    pub fixed_point: FixedPointOptions<T>,
    pub eta_max: T,
}

impl<T: Real> Default for NegativeOptions<T> {
    fn default() -> Self {
        Self { fixed_point: FixedPointOptions::default(), eta_max: T::lit(DEFAULT_ETA_MAX) }
    }
}

#[derive(Debug, Clone)]
pub struct NegativeRun<T> {
    pub local: LocalSolve<T>,
    pub global: GlobalSolve<T>,
    pub bounds: GrowthBounds<T>,
    pub blowup: Blowup<T>,
    pub residual: PhaseResidual<T>,
}

/// Fixed point on the local window, global extension, bounds and blow-up time.
pub fn solve_negative<T: Real>(n: usize, theta: T, opts: &NegativeOptions<T>) -> Result<NegativeRun<T>> {
    let local = fixed_point_solve(n, theta, &opts.fixed_point)?;
    let global = extend_global(&local, opts.eta_max)?;
    let bounds = growth_bounds_check(&global.curve, n, theta);
    let blowup = blowup_time(&global.curve, global.eta0)?;
    let residual = phase_residual(&global.curve)?;
    Ok(NegativeRun { local, global, bounds, blowup, residual })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TaylorReport<T> {
    pub alpha: T,
    pub beta: T,
    pub gamma: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundsReport<T> {
    pub rho: T,
    pub eps0: Option<T>,
    pub eta1: Option<T>,
    pub eta2: Option<T>,
}

/// Summary written next to a phase curve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NegativeReport<T> {
    pub n: usize,
    pub theta: T,
    pub eta0: T,
    pub eta_max: T,
    pub taylor: TaylorReport<T>,
    pub printed_taylor: TaylorReport<T>,
    pub lambda_cal: T,
    pub iterations: usize,
    pub bounds: BoundsReport<T>,
    pub upper_bound_claimed: bool,
    pub checks: Vec<BoundCheck<T>>,
    #[serde(rename = "T_inf")]
    pub t_inf: T,
    pub tail_bound: T,
    #[serde(rename = "R_inf")]
    pub r_inf: T,
    pub phase_residual: T,
}

impl<T: Real> NegativeRun<T> {
    pub fn report(&self) -> NegativeReport<T> {
        let t = self.global.curve.taylor;
        let p = self.local.printed_taylor;
        NegativeReport {
            n: self.global.curve.params.n,
            theta: self.global.curve.params.theta,
            eta0: self.global.eta0,
            eta_max: self.global.curve.eta_max,
            taylor: TaylorReport { alpha: t.alpha, beta: t.beta, gamma: t.gamma },
            printed_taylor: TaylorReport { alpha: p.alpha, beta: p.beta, gamma: p.gamma },
            lambda_cal: self.local.lambda_cal,
            iterations: self.local.iterations,
            bounds: BoundsReport { rho: self.bounds.rho, eps0: self.bounds.eps0, eta1: self.bounds.eta1, eta2: self.bounds.eta2 },
            upper_bound_claimed: self.bounds.upper_claimed,
            checks: self.bounds.checks.clone(),
            t_inf: self.blowup.t_inf,
            tail_bound: self.blowup.tail_bound,
            r_inf: self.blowup.r_inf,
            phase_residual: self.residual.max_relative,
        }
    }

    /// Radial factor on the curve-adapted grid with uniform spacing `step` up to `r_split`.
    pub fn profile(&self, v0: T, step: T, r_split: T) -> Result<RadialProfile<T>> {
        let curve = &self.global.curve;
        let r0 = T::lit(ANCHOR_RADIUS);
        let grid = profile_grid(curve, self.global.eta0, r0, step, r_split)?;
        rebuild_profile(curve, self.global.eta0, v0, r0, &grid)
    }
}

/// One-dimensional positive factor on a uniform grid of `[0, r_max]`.
pub fn positive_profile<T: Real>(v0: T, lambda: T, theta: T, r_max: T, step: T) -> Result<RadialProfile<T>> {
    let config = PositivePairConfig::new(v0, lambda, theta)?;
    let cells = (r_max / step).ceil().to_usize().unwrap_or(1).max(1);
    let h = r_max / T::from_usize_lossy(cells);
    let grid: Vec<T> = (0..=cells).map(|k| h * T::from_usize_lossy(k)).collect();
    build_phi(&config, &grid)?.to_radial()
}

#[derive(Debug, Clone, Copy)]
pub struct CounterexampleOptions<T> {
    pub negative: NegativeOptions<T>,
    pub v0_psi: T,
    pub v0_phi: T,
    pub lambda_phi: T,
    pub phi_r_max: T,
    pub step: T,
    pub r_split: T,
}

impl<T: Real> Default for CounterexampleOptions<T> {
    fn default() -> Self {
        Self {
            negative: NegativeOptions { eta_max: T::lit(1e4), ..Default::default() },
            v0_psi: T::one(),
            v0_phi: T::one(),
            lambda_phi: T::one(),
            phi_r_max: T::lit(12.0),
            step: T::lit(0.01),
            r_split: T::lit(3.0),
        }
    }
}

/// Separable solution on `R^{1+m} x B_R` in dimension `n + 1 + m`.
pub fn build_counterexample<T: Real>(
    n: usize,
    theta: T,
    m_cylinder: usize,
    opts: &CounterexampleOptions<T>,
) -> Result<(SeparableSolution<T>, NegativeRun<T>)> {
    let run = solve_negative(n, theta, &opts.negative)?;
    let psi = run.profile(opts.v0_psi, opts.step, opts.r_split)?;
    let phi = positive_profile(opts.v0_phi, opts.lambda_phi, theta, opts.phi_r_max, opts.step)?;
    let sol = assemble(&phi, &psi, m_cylinder, &AssembleOptions::new(theta, &psi, Some(run.blowup.t_inf)))?;
    Ok((sol, run))
}
