//! Numerical building blocks shared by the solver modules.

pub mod cheb;
pub mod cumulative;
pub mod fd;
pub mod interp;
pub mod ode;
pub mod quad;
pub mod roots;
pub mod series;
