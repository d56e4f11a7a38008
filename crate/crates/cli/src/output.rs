//! CSV schemas of the sweep and table outputs.
//!
//! Every file starts with a fixed header row. Numbers use Rust's shortest
//! round-trip formatting, so they are locale-independent and re-parse to the
//! same `f64`.

use std::io::Write;

use dmimo_core::{ApsRow, CctRow, MaoRow, RateTable};

use crate::error::CliError;

pub const RATE_TABLE_HEADER: [&str; 6] = ["k", "snr_db", "mean_rate", "stderr", "trials", "redraws"];
pub const CCT_HEADER: [&str; 8] =
    ["k", "t", "snr_db", "full_nsr", "effective_nsr", "best_partition", "stderr", "full_stderr"];
pub const APS_HEADER: [&str; 8] =
    ["k", "snr_db", "t", "ideal_nsr", "effective_nsr", "best_partition", "stderr", "ideal_stderr"];
pub const MAO_HEADER: [&str; 7] = ["k", "t", "snr_db", "alpha_th", "ratio_pct", "feasible", "best_partition"];

fn writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out)
}

pub fn write_rate_table<W: Write>(out: W, table: &RateTable) -> Result<(), CliError> {
    let mut w = writer(out);
    w.write_record(RATE_TABLE_HEADER)?;
    for e in table.entries() {
        w.write_record([
            e.size.to_string(),
            e.snr_db.to_string(),
            e.mean.to_string(),
            e.stderr.to_string(),
            e.trials.to_string(),
            e.redraws.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_cct<W: Write>(out: W, rows: &[CctRow]) -> Result<(), CliError> {
    let mut w = writer(out);
    w.write_record(CCT_HEADER)?;
    for r in rows {
        w.write_record([
            r.k.to_string(),
            r.t.to_string(),
            r.snr_db.to_string(),
            r.full_nsr.to_string(),
            r.effective_nsr.to_string(),
            r.best_partition.clone(),
            r.partitioned_stderr.to_string(),
            r.full_stderr.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_aps<W: Write>(out: W, rows: &[ApsRow]) -> Result<(), CliError> {
    let mut w = writer(out);
    w.write_record(APS_HEADER)?;
    for r in rows {
        w.write_record([
            r.k.to_string(),
            r.snr_db.to_string(),
            r.t.to_string(),
            r.ideal_nsr.to_string(),
            r.effective_nsr.to_string(),
            r.best_partition.clone(),
            r.effective_stderr.to_string(),
            r.ideal_stderr.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_mao<W: Write>(out: W, rows: &[MaoRow]) -> Result<(), CliError> {
    let mut w = writer(out);
    w.write_record(MAO_HEADER)?;
    for r in rows {
        w.write_record([
            r.k.to_string(),
            r.t.to_string(),
            r.snr_db.to_string(),
            r.alpha_th.to_string(),
            r.ratio_pct.to_string(),
            r.feasible.to_string(),
            r.best_partition.clone(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
