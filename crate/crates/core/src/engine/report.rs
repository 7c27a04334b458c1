//! CSV serialization of engine reports: one row per step.

use std::io::Write;

use super::RRReport;
use crate::error::Result;

pub fn write_csv_header<W: Write>(mut w: W) -> Result<()> {
    writeln!(
        w,
        "algorithm,i,a_size,d_size,n_i,lambda,tested,N_i,alpha,step1_ms,step2_ms"
    )?;
    Ok(())
}

/// Appends the per-step rows of one report (no header).
pub fn write_csv_rows<W: Write>(report: &RRReport, mut w: W) -> Result<()> {
    for s in &report.steps {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{:.6},{:.3},{:.3}",
            report.algorithm,
            s.i,
            s.a_size,
            s.d_size,
            s.n_i,
            s.lambda,
            s.tested,
            s.n_cum,
            s.alpha,
            s.step1_ms,
            s.step2_ms,
        )?;
    }
    Ok(())
}

/// Header plus rows for a single report.
pub fn write_csv<W: Write>(report: &RRReport, mut w: W) -> Result<()> {
    write_csv_header(&mut w)?;
    write_csv_rows(report, &mut w)
}
