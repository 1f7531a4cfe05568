//! CSV tables. Floats are written with 17 significant digits so that they
//! round-trip exactly.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use qprobe_core::protocol::DensityEstimate;
use qprobe_core::{CoherenceSeries, CorrelationEstimate};

use crate::error::{CliError, Result};

pub const SERIES_HEADER: &str = "delta_c,t,re_zeta,im_zeta,re_err,im_err";
pub const CORRELATION_HEADER: &str = "delta_c,cor,cor_err,g2,g2_err,method";
pub const SWEEP_HEADER: &str = "interaction,delta_c,cor,cor_err,g2,g2_err,method";
pub const CONVERGENCE_HEADER: &str = "interaction,max_occupancy,dimension,delta_c,g2,deviation";
pub const DENSITY_HEADER: &str = "density,density_err";

pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn series_csv(series: &[CoherenceSeries]) -> String {
    let mut out = format!("{SERIES_HEADER}\n");
    for s in series {
        for (r, z) in s.values.iter().enumerate() {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                s.separation,
                num(s.grid.time(r)),
                num(z.re),
                num(z.im),
                num(s.re_err[r]),
                num(s.im_err[r])
            );
        }
    }
    out
}

fn correlation_row(e: &CorrelationEstimate) -> String {
    format!("{},{},{},{},{},{}", e.separation, num(e.cor), num(e.cor_err), num(e.g2), num(e.g2_err), e.method.as_str())
}

pub fn correlation_csv(rows: &[CorrelationEstimate]) -> String {
    let mut out = format!("{CORRELATION_HEADER}\n");
    for e in rows {
        out.push_str(&correlation_row(e));
        out.push('\n');
    }
    out
}

pub fn sweep_csv(rows: &[(f64, Vec<CorrelationEstimate>)]) -> String {
    let mut out = format!("{SWEEP_HEADER}\n");
    for (u, estimates) in rows {
        for e in estimates {
            let _ = writeln!(out, "{},{}", num(*u), correlation_row(e));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub interaction: f64,
    pub max_occupancy: usize,
    pub dimension: usize,
    pub separation: usize,
    pub g2: f64,
    /// Difference from the largest cap at the same `U/J` and `Δc`.
    pub deviation: f64,
}

pub fn convergence_csv(rows: &[ConvergenceRow]) -> String {
    let mut out = format!("{CONVERGENCE_HEADER}\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            num(r.interaction),
            r.max_occupancy,
            r.dimension,
            r.separation,
            num(r.g2),
            num(r.deviation)
        );
    }
    out
}

pub fn density_csv(d: &DensityEstimate) -> String {
    format!("{DENSITY_HEADER}\n{},{}\n", num(d.value), num(d.err))
}

/// Writes through a temporary file in the same directory and renames it.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path.parent().unwrap_or(Path::new("."));
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("out");
    let tmp = dir.join(format!(".{name}.tmp"));
    let mut file = fs::File::create(&tmp).map_err(|e| CliError::io(&tmp, e))?;
    file.write_all(contents.as_bytes()).map_err(|e| CliError::io(&tmp, e))?;
    file.sync_all().map_err(|e| CliError::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| CliError::io(path, e))
}
