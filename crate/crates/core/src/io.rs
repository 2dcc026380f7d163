//! CSV files: profiles as `r,v,u`, phase curves as `eta,zeta,I`.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::curve::PhaseCurve;
use crate::error::{Error, Result};
use crate::model::RadialProfile;
use crate::real::Real;

#[derive(Debug, Serialize, Deserialize)]
struct ProfileRow {
    r: f64,
    v: f64,
    u: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct CurveRow {
    eta: f64,
    zeta: f64,
    #[serde(rename = "I")]
    integral: f64,
}

pub fn write_profile<T: Real, W: Write>(profile: &RadialProfile<T>, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for ((&r, &v), &u) in profile.r.iter().zip(&profile.v).zip(&profile.u) {
        w.serialize(ProfileRow { r: r.as_f64(), v: v.as_f64(), u: u.as_f64() })?;
    }
    w.flush()?;
    Ok(())
}

/// Reads `r,v,u` rows into a profile of dimension `n`.
pub fn read_profile<T: Real, R: Read>(input: R, n: usize) -> Result<RadialProfile<T>> {
    let mut rd = csv::Reader::from_reader(input);
    check_headers(&mut rd, &["r", "v", "u"])?;
    let (mut r, mut v, mut u) = (Vec::new(), Vec::new(), Vec::new());
    for row in rd.deserialize::<ProfileRow>() {
        let row = row?;
        r.push(T::lit(row.r));
        v.push(T::lit(row.v));
        u.push(T::lit(row.u));
    }
    if r.is_empty() {
        return Err(Error::Parse("profile file has no rows".into()));
    }
    RadialProfile::new(n, r, v, u)
}

pub fn write_curve<T: Real, W: Write>(curve: &PhaseCurve<T>, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if curve.samples.is_empty() {
        w.write_record(["eta", "zeta", "I"])?;
    }
    for s in &curve.samples {
        w.serialize(CurveRow { eta: s.eta.as_f64(), zeta: s.zeta.as_f64(), integral: s.integral.as_f64() })?;
    }
    w.flush()?;
    Ok(())
}

/// Reads `eta,zeta,I` rows.
pub fn read_curve_rows<T: Real, R: Read>(input: R) -> Result<Vec<(T, T, T)>> {
    let mut rd = csv::Reader::from_reader(input);
    check_headers(&mut rd, &["eta", "zeta", "I"])?;
    rd.deserialize::<CurveRow>()
        .map(|row| row.map(|c| (T::lit(c.eta), T::lit(c.zeta), T::lit(c.integral))).map_err(Error::from))
        .collect()
}

fn check_headers<R: Read>(rd: &mut csv::Reader<R>, expected: &[&str]) -> Result<()> {
    let h = rd.headers()?;
    if h.iter().map(str::trim).ne(expected.iter().copied()) {
        return Err(Error::Parse(format!("expected header {}, found {}", expected.join(","), h.iter().collect::<Vec<_>>().join(","))));
    }
    Ok(())
}
