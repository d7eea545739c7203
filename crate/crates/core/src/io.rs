//! CSV files exchanged with plotting and analysis tools.
//!
//! Floats are written in scientific notation with 17 significant digits,
//! which round-trips every `f64` exactly.

use std::path::Path;

use crate::error::{Error, Result};
use crate::sweep::{SweepRecord, ThresholdPoint, TradeoffPoint};

pub const SWEEP_HEADER: [&str; 6] = ["gamma", "beta_angle", "energy", "entropy", "beta_eff", "tvd_min"];
pub const THRESHOLD_HEADER: [&str; 5] = ["threshold", "best_beta_eff", "t_eff", "gamma", "beta_angle"];
pub const TRADEOFF_HEADER: [&str; 4] = ["t_eff", "tvd_min", "gamma", "beta_angle"];

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

fn writer(path: &Path) -> Result<csv::Writer<std::fs::File>> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::Writer::from_writer(file))
}

pub fn write_sweep_csv(path: impl AsRef<Path>, records: &[SweepRecord]) -> Result<()> {
    let mut w = writer(path.as_ref())?;
    w.write_record(SWEEP_HEADER)?;
    for r in records {
        w.write_record([
            fmt_f64(r.gamma),
            fmt_f64(r.beta_angle),
            fmt_f64(r.energy),
            fmt_f64(r.entropy),
            fmt_opt(r.beta_eff),
            fmt_opt(r.tvd_min),
        ])?;
    }
    w.flush().map_err(|e| Error::io(path.as_ref(), e))
}

pub fn write_thresholds_csv(path: impl AsRef<Path>, points: &[ThresholdPoint]) -> Result<()> {
    let mut w = writer(path.as_ref())?;
    w.write_record(THRESHOLD_HEADER)?;
    for p in points {
        let b = p.best_beta_eff();
        w.write_record([
            fmt_f64(p.threshold),
            fmt_opt(b),
            fmt_opt(b.map(|b| 1.0 / b)),
            fmt_opt(p.best.map(|r| r.gamma)),
            fmt_opt(p.best.map(|r| r.beta_angle)),
        ])?;
    }
    w.flush().map_err(|e| Error::io(path.as_ref(), e))
}

pub fn write_tradeoff_csv(path: impl AsRef<Path>, points: &[TradeoffPoint]) -> Result<()> {
    let mut w = writer(path.as_ref())?;
    w.write_record(TRADEOFF_HEADER)?;
    for p in points {
        w.write_record([
            fmt_f64(p.t_eff),
            fmt_f64(p.tvd_min),
            fmt_f64(p.gamma),
            fmt_f64(p.beta_angle),
        ])?;
    }
    w.flush().map_err(|e| Error::io(path.as_ref(), e))
}

fn parse_field(row: usize, column: &str, text: &str) -> Result<Option<f64>> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(None);
    }
    text.parse::<f64>()
        .map(Some)
        .map_err(|e| Error::parse(format!("row {row}, column `{column}`"), e.to_string()))
}

/// Reads a sweep CSV. Fit columns may be absent or empty.
pub fn read_sweep_csv(path: impl AsRef<Path>) -> Result<Vec<SweepRecord>> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut rdr = csv::Reader::from_reader(file);
    let headers = rdr.headers()?.clone();
    let col = |name: &str| headers.iter().position(|h| h.trim() == name);
    let mut idx = [None; 6];
    for (slot, name) in idx.iter_mut().zip(SWEEP_HEADER) {
        *slot = col(name);
    }
    for (k, name) in SWEEP_HEADER.iter().enumerate().take(4) {
        if idx[k].is_none() {
            return Err(Error::parse(*name, "missing column"));
        }
    }

    let mut records = Vec::new();
    for (row, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let get = |k: usize| -> Result<Option<f64>> {
            match idx[k] {
                Some(c) => parse_field(row + 1, SWEEP_HEADER[k], rec.get(c).unwrap_or("")),
                None => Ok(None),
            }
        };
        let required = |k: usize| -> Result<f64> {
            get(k)?.ok_or_else(|| Error::parse(format!("row {}, column `{}`", row + 1, SWEEP_HEADER[k]), "empty"))
        };
        records.push(SweepRecord {
            gamma: required(0)?,
            beta_angle: required(1)?,
            energy: required(2)?,
            entropy: required(3)?,
            beta_eff: get(4)?,
            tvd_min: get(5)?,
        });
    }
    Ok(records)
}
