use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("argument outside domain: {0}")]
    Domain(String),
    #[error("profile is not strictly convex at r = {r}")]
    NonConvexProfile { r: f64 },
    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),
    #[error("degenerate profile: v vanishes at interior node r = {r}")]
    DegenerateProfile { r: f64 },
    #[error("inconsistent profile: relative spread {spread:.3e} exceeds {threshold:.3e}")]
    InconsistentProfile { spread: f64, threshold: f64 },
    #[error("root finder did not converge after {iterations} iterations")]
    Convergence { iterations: usize },
    #[error("step size underflow at x = {x}")]
    StepFailure { x: f64 },
    #[error("quadrature did not reach tolerance (estimated error {error:.3e})")]
    Quadrature { error: f64 },
    #[error("singular part mismatch: zeta'(1) estimate {slope} differs from 2")]
    SingularityMismatch { slope: f64 },
    #[error("iterate left [0, 1] on the local window at eta = {eta}")]
    BlowupInsideWindow { eta: f64 },
    #[error("fixed-point iteration did not converge: last change {last_change:.3e} after {iterations} iterations")]
    NoConvergence { iterations: usize, last_change: f64 },
    #[error("limit left the admissible set: {0}")]
    MembershipViolation(String),
    #[error("positivity lost at eta = {eta}")]
    PositivityLoss { eta: f64 },
    #[error("quadratic lower bound not certified on the tail")]
    TailUnbounded,
    #[error("eigenvalues share a sign: {lambda_phi} and {lambda_psi}")]
    SignError { lambda_phi: f64, lambda_psi: f64 },
    #[error("Hessian determinant {det:.3e} below threshold")]
    NearSingular { det: f64 },
    #[error("io: {0}")]
    Io(String),
    #[error("parse: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
