//! Whitespace-separated columns with a `#` header line.

use std::fmt::Write as _;
use std::str::FromStr;

use affmax::io::{read_curve_rows, read_profile};

use crate::commands::{emit, open, run_summary, Status};
use crate::config::{self, required};
use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    /// `eta zeta`.
    Phase,
    /// `r v u`.
    Profile,
    /// `eta zeta rho(eta-1) eps0*eta^2`.
    Bounds,
}

impl FromStr for PlotKind {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "phase" => Ok(PlotKind::Phase),
            "profile" => Ok(PlotKind::Profile),
            "bounds" => Ok(PlotKind::Bounds),
            other => Err(CliError::UnknownKind(other.to_string())),
        }
    }
}

pub fn plot_data(a: config::PlotData) -> Result<Status, CliError> {
    let kind: PlotKind = required(a.kind, "kind")?.parse()?;
    let input = required(a.input, "input")?;
    let mut text = String::new();
    match kind {
        PlotKind::Phase => {
            text.push_str("# eta zeta\n");
            for (eta, zeta, _) in read_curve_rows::<f64, _>(open(&input)?)? {
                let _ = writeln!(text, "{eta} {zeta}");
            }
        }
        PlotKind::Profile => {
            let p = read_profile::<f64, _>(open(&input)?, 1)?;
            text.push_str("# r v u\n");
            for ((r, v), u) in p.r.iter().zip(&p.v).zip(&p.u) {
                let _ = writeln!(text, "{r} {v} {u}");
            }
        }
        PlotKind::Bounds => {
            let run = run_summary(Some(&required(a.report, "report")?))?;
            let rho = run.rho.ok_or_else(|| CliError::Usage("report has no bounds.rho".into()))?;
            let eps0 = run.eps0.unwrap_or(f64::NAN);
            text.push_str("# eta zeta rho(eta-1) eps0*eta^2\n");
            for (eta, zeta, _) in read_curve_rows::<f64, _>(open(&input)?)? {
                let _ = writeln!(text, "{eta} {zeta} {} {}", rho * (eta - 1.0), eps0 * eta * eta);
            }
        }
    }
    emit(text.as_bytes(), a.out.as_deref())?;
    Ok(Status::Pass)
}
