//! Command-line arguments and TOML configuration.
//!
//! Every flag has a key of the same name in the section of its subcommand.
//! Flags take precedence over the file, which takes precedence over defaults.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use crate::error::CliError;

pub const VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), " (reference revision 1)");

#[derive(Debug, Parser)]
#[command(name = "affmax", version = VERSION, about = "Separable solutions of the affine maximal type equation")]
pub struct Cli {
    /// TOML file with one section per subcommand.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// One-dimensional factor with positive eigenvalue, as `r,v,u` CSV.
    SolvePositive(SolvePositive),
    /// Phase curve of the negative pair, with a JSON report.
    SolveNegative(SolveNegative),
    /// Radial profile from a phase curve.
    Reconstruct(Reconstruct),
    /// Separable solution from a positive and a negative factor.
    Assemble(Assemble),
    /// Residual, convexity and completeness of an assembled solution.
    Verify(Verify),
    /// Sign argument excluding non-degenerate radial solutions near `eta = 1`.
    BernsteinRadial(BernsteinRadial),
    /// Case analysis of the one-dimensional equation.
    #[command(name = "bernstein-1d")]
    Bernstein1d(Bernstein1d),
    /// Negative-pair solves over a range of `theta`.
    Sweep(Sweep),
    /// Whitespace-separated columns for external plotting.
    PlotData(PlotData),
}

/// Fills unset fields from the configuration file.
pub trait Merge {
    fn merge(&mut self, file: Self);
}

macro_rules! mergeable {
    ($t:ty { $($f:ident),* $(,)? }) => {
        impl Merge for $t {
            fn merge(&mut self, file: Self) {
                $(if self.$f.is_none() {
                    self.$f = file.$f;
                })*
            }
        }
    };
}

#[derive(Debug, Default, Clone, Args, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct SolvePositive {
    /// `u''(0)`.
    #[arg(long)]
    pub v0: Option<f64>,
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub rmax: Option<f64>,
    #[arg(long)]
    pub step: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
mergeable!(SolvePositive { v0, theta, lambda, rmax, step, out });

#[derive(Debug, Default, Clone, Args, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct SolveNegative {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long)]
    pub eta0: Option<f64>,
    /// Sup-norm change at which the fixed point stops.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub max_iter: Option<usize>,
    #[arg(long)]
    pub eta_max: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub report: Option<PathBuf>,
}
mergeable!(SolveNegative { n, theta, eta0, tol, max_iter, eta_max, out, report });

#[derive(Debug, Default, Clone, Args, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct Reconstruct {
    #[arg(long)]
    pub curve: Option<PathBuf>,
    /// Report of the run that wrote the curve; supplies n, theta, eta0 and lambda_cal.
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub theta: Option<f64>,
    /// Anchor; read from the sign change of I when absent.
    #[arg(long)]
    pub eta0: Option<f64>,
    /// Slopes come from the phase ODE when given, from finite differences otherwise.
    #[arg(long)]
    pub lambda_cal: Option<f64>,
    /// `v` at the anchor radius 1.
    #[arg(long)]
    pub v0: Option<f64>,
    #[arg(long)]
    pub step: Option<f64>,
    #[arg(long)]
    pub r_split: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
mergeable!(Reconstruct { curve, report, n, theta, eta0, lambda_cal, v0, step, r_split, out });

#[derive(Debug, Default, Clone, Args, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct Assemble {
    #[arg(long)]
    pub phi: Option<PathBuf>,
    #[arg(long)]
    pub psi: Option<PathBuf>,
    /// Dimension of the radial factor.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub theta: Option<f64>,
    /// Number of flat quadratic coordinates.
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub t_inf: Option<f64>,
    /// Negative-pair report; supplies n, theta and T_inf.
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
mergeable!(Assemble { phi, psi, n, theta, m, t_inf, report, out });

#[derive(Debug, Default, Clone, Args, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct Verify {
    #[arg(long)]
    pub solution: Option<PathBuf>,
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub step: Option<f64>,
    #[arg(long)]
    pub tolerance: Option<f64>,
    #[arg(long)]
    pub ceiling: Option<f64>,
    #[arg(long)]
    pub report: Option<PathBuf>,
}
mergeable!(Verify { solution, points, seed, step, tolerance, ceiling, report });

#[derive(Debug, Default, Clone, Args, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct BernsteinRadial {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub theta: Option<f64>,
    /// Half-width of the window around `eta = 1`.
    #[arg(long)]
    pub window: Option<f64>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub report: Option<PathBuf>,
}
mergeable!(BernsteinRadial { n, theta, window, samples, report });

#[derive(Debug, Default, Clone, Args, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct Bernstein1d {
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long)]
    pub report: Option<PathBuf>,
}
mergeable!(Bernstein1d { theta, report });

#[derive(Debug, Default, Clone, Args, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct Sweep {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub theta_min: Option<f64>,
    #[arg(long)]
    pub theta_max: Option<f64>,
    /// Number of `theta` values, endpoints included.
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long)]
    pub eta0: Option<f64>,
    #[arg(long)]
    pub eta_max: Option<f64>,
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Summary CSV; printed to standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Directory for one JSON report per row.
    #[arg(long)]
    pub report_dir: Option<PathBuf>,
}
mergeable!(Sweep { n, theta_min, theta_max, steps, eta0, eta_max, jobs, out, report_dir });

#[derive(Debug, Default, Clone, Args, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct PlotData {
    /// One of phase, profile, bounds.
    #[arg(long)]
    pub kind: Option<String>,
    /// Curve CSV for phase and bounds, profile CSV for profile.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Negative-pair report, needed for bounds.
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
mergeable!(PlotData { kind, input, report, out });

#[derive(Debug, Default, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default)]
    pub solve_positive: SolvePositive,
    #[serde(default)]
    pub solve_negative: SolveNegative,
    #[serde(default)]
    pub reconstruct: Reconstruct,
    #[serde(default)]
    pub assemble: Assemble,
    #[serde(default)]
    pub verify: Verify,
    #[serde(default)]
    pub bernstein_radial: BernsteinRadial,
    #[serde(default, rename = "bernstein-1d")]
    pub bernstein_1d: Bernstein1d,
    #[serde(default)]
    pub sweep: Sweep,
    #[serde(default)]
    pub plot_data: PlotData,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))?;
        toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }
}

/// Applies the file section of the chosen subcommand to its flags.
pub fn resolve(command: &mut Command, file: ConfigFile) {
    match command {
        Command::SolvePositive(a) => a.merge(file.solve_positive),
        Command::SolveNegative(a) => a.merge(file.solve_negative),
        Command::Reconstruct(a) => a.merge(file.reconstruct),
        Command::Assemble(a) => a.merge(file.assemble),
        Command::Verify(a) => a.merge(file.verify),
        Command::BernsteinRadial(a) => a.merge(file.bernstein_radial),
        Command::Bernstein1d(a) => a.merge(file.bernstein_1d),
        Command::Sweep(a) => a.merge(file.sweep),
        Command::PlotData(a) => a.merge(file.plot_data),
    }
}

/// Value of a required option.
pub fn required<T>(value: Option<T>, flag: &str) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::Usage(format!("missing --{flag} (flag or config key)")))
}
