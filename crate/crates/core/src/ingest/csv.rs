//! CSV sweep format: header `freq_hz,re,im`, one row per grid point.

use num_complex::Complex64;

use super::{finite_value, grid_from_rows, IngestError};
use crate::sweep::FrequencySweep;

const HEADER: &str = "freq_hz,re,im";

pub fn parse_csv(text: &str) -> Result<FrequencySweep, IngestError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let header_ok = lines
        .next()
        .map(|(_, l)| {
            let fields: Vec<&str> = l.split(',').map(str::trim).collect();
            fields.len() == 3
                && fields
                    .iter()
                    .zip(HEADER.split(','))
                    .all(|(a, b)| a.eq_ignore_ascii_case(b))
        })
        .unwrap_or(false);
    if !header_ok {
        return Err(IngestError::MissingHeader);
    }

    let mut freqs: Vec<(usize, f64)> = Vec::new();
    let mut values: Vec<Complex64> = Vec::new();
    for (idx, raw) in lines {
        let line = idx + 1;
        let fields: Vec<&str> = raw.split(',').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(IngestError::BadRow {
                line,
                detail: format!("expected 3 comma-separated fields, found {}", fields.len()),
            });
        }
        let nums: Result<Vec<f64>, _> = fields.iter().map(|f| f.parse::<f64>()).collect();
        let nums = nums.map_err(|e| IngestError::BadRow {
            line,
            detail: format!("non-numeric field: {e}"),
        })?;
        if !nums[0].is_finite() {
            return Err(IngestError::BadRow { line, detail: "non-finite frequency".into() });
        }
        freqs.push((line, nums[0]));
        values.push(finite_value(line, Complex64::new(nums[1], nums[2]))?);
    }

    let grid = grid_from_rows(&freqs)?;
    Ok(FrequencySweep::new(grid, values)?)
}

/// Serialize with shortest-round-trip number formatting, so
/// `parse_csv(write_csv(s))` reproduces `s` exactly.
pub fn write_csv(sweep: &FrequencySweep) -> String {
    let mut out = String::with_capacity(sweep.len() * 24 + HEADER.len() + 1);
    out.push_str(HEADER);
    out.push('\n');
    for (f, v) in sweep.grid().frequencies().zip(sweep.values()) {
        out.push_str(&format!("{f},{},{}\n", v.re, v.im));
    }
    out
}
