//! Separable non-quadratic solutions of the affine maximal type equation
//! `u^{ij} D_ij w = 0`, `w = (det D^2 u)^{-theta}`, built from a radial
//! positive eigenpair and a radial negative eigenpair, together with
//! independent numerical checks of every step.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod curve;
pub mod error;
pub mod io;
pub mod model;
pub mod negative_pair;
pub mod numerics;
pub mod phase_plane;
pub mod pipeline;
pub mod positive_pair;
pub mod real;
pub mod reconstruct;
pub mod verify;

pub use error::{Error, Result};
pub use real::Real;

pub type Curve = curve::PhaseCurve<f64>;
pub type Profile = model::RadialProfile<f64>;
pub type Params = model::ModelParams<f64>;
pub type Taylor = model::TaylorData<f64>;
pub type Solution = verify::SeparableSolution<f64>;
pub type Report = verify::VerificationReport<f64>;
