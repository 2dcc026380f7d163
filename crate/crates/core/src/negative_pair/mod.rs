//! Phase curves with negative eigenvalue parameter: the local solution at
//! the singular point, its global extension, growth bounds and blow-up time.

pub mod global;
pub mod local;
pub mod taylor;

pub use global::*;
pub use local::*;
pub use taylor::*;
