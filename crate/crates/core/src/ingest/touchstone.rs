//! Touchstone v1 reader/writer, restricted to 1-port reflection data.
//!
//! Accepted layout: optional `!` comments, one option line
//! `# <HZ|KHZ|MHZ|GHZ> S <RI|MA|DB> R <impedance>` (tokens in any order,
//! case-insensitive, each defaultable per the v1 standard), then one
//! 3-column data row per frequency. Multi-port files are rejected rather
//! than down-selected — with more than one port it is ambiguous which
//! parameter carries the reflection.

use num_complex::Complex64;

use super::{finite_value, grid_from_rows, IngestError};
use crate::sweep::FrequencySweep;

/// Numeric format of the two value columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TouchstoneFormat {
    /// real, imaginary
    Ri,
    /// linear magnitude, angle in degrees
    Ma,
    /// 20·log10 magnitude, angle in degrees
    Db,
}

#[derive(Debug, Clone, Copy)]
struct OptionLine {
    freq_scale: f64,
    format: TouchstoneFormat,
}

fn parse_option_line(line: usize, text: &str) -> Result<OptionLine, IngestError> {
    let err = |detail: String| IngestError::MalformedOptionLine(format!("line {line}: {detail}"));
    let mut freq_scale = None;
    let mut format = None;
    let mut tokens = text[1..].split_whitespace();
    while let Some(tok) = tokens.next() {
        match tok.to_ascii_uppercase().as_str() {
            u @ ("HZ" | "KHZ" | "MHZ" | "GHZ") => {
                if freq_scale.is_some() {
                    return Err(err("frequency unit given twice".into()));
                }
                freq_scale = Some(match u {
                    "HZ" => 1.0,
                    "KHZ" => 1e3,
                    "MHZ" => 1e6,
                    _ => 1e9,
                });
            }
            "S" => {}
            p @ ("Y" | "Z" | "G" | "H") => {
                return Err(err(format!("parameter type {p} not supported (only S)")));
            }
            f @ ("RI" | "MA" | "DB") => {
                if format.is_some() {
                    return Err(err("data format given twice".into()));
                }
                format = Some(match f {
                    "RI" => TouchstoneFormat::Ri,
                    "MA" => TouchstoneFormat::Ma,
                    _ => TouchstoneFormat::Db,
                });
            }
            "R" => {
                let z = tokens.next().ok_or_else(|| err("R without impedance".into()))?;
                z.parse::<f64>()
                    .map_err(|_| err(format!("bad reference impedance `{z}`")))?;
            }
            other => return Err(err(format!("unrecognized token `{other}`"))),
        }
    }
    Ok(OptionLine {
        freq_scale: freq_scale.unwrap_or(1e9),
        format: format.unwrap_or(TouchstoneFormat::Ma),
    })
}

fn decode(format: TouchstoneFormat, a: f64, b: f64) -> Complex64 {
    match format {
        TouchstoneFormat::Ri => Complex64::new(a, b),
        TouchstoneFormat::Ma => Complex64::from_polar(a, b.to_radians()),
        TouchstoneFormat::Db => Complex64::from_polar(10f64.powf(a / 20.0), b.to_radians()),
    }
}

pub fn parse_touchstone(text: &str) -> Result<FrequencySweep, IngestError> {
    let mut option: Option<OptionLine> = None;
    let mut freqs: Vec<(usize, f64)> = Vec::new();
    let mut values: Vec<Complex64> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('!').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        if body.starts_with('#') {
            if option.is_some() {
                return Err(IngestError::MalformedOptionLine(format!(
                    "line {line}: second option line"
                )));
            }
            if !freqs.is_empty() {
                return Err(IngestError::MalformedOptionLine(format!(
                    "line {line}: option line after data"
                )));
            }
            option = Some(parse_option_line(line, body)?);
            continue;
        }
        let opt = option.ok_or_else(|| {
            IngestError::MalformedOptionLine(format!("line {line}: data before option line"))
        })?;
        let cols: Result<Vec<f64>, _> = body.split_whitespace().map(str::parse::<f64>).collect();
        let cols = cols.map_err(|e| IngestError::BadRow {
            line,
            detail: format!("non-numeric column: {e}"),
        })?;
        if cols.len() != 3 {
            let hint = if cols.len() > 3 { " (multi-port data is not supported)" } else { "" };
            return Err(IngestError::BadRow {
                line,
                detail: format!("expected 3 columns for 1-port data, found {}{hint}", cols.len()),
            });
        }
        let f = cols[0] * opt.freq_scale;
        if !f.is_finite() {
            return Err(IngestError::BadRow { line, detail: "non-finite frequency".into() });
        }
        freqs.push((line, f));
        values.push(finite_value(line, decode(opt.format, cols[1], cols[2]))?);
    }

    if option.is_none() {
        return Err(IngestError::MalformedOptionLine("no option line found".into()));
    }
    let grid = grid_from_rows(&freqs)?;
    Ok(FrequencySweep::new(grid, values)?)
}

/// Serialize a sweep as a 1-port Touchstone v1 file. Frequencies are written
/// in GHz; numeric fields use the shortest representation that parses back
/// to the identical double, so RI output round-trips exactly.
pub fn write_touchstone(sweep: &FrequencySweep, format: TouchstoneFormat) -> String {
    let g = sweep.grid();
    let mut out = String::new();
    out.push_str("! 1-port reflection sweep\n");
    out.push_str(&format!(
        "! {} points, {} Hz to {} Hz\n",
        g.n_points(),
        g.f_start(),
        g.f_stop()
    ));
    let fmt_token = match format {
        TouchstoneFormat::Ri => "RI",
        TouchstoneFormat::Ma => "MA",
        TouchstoneFormat::Db => "DB",
    };
    out.push_str(&format!("# GHZ S {fmt_token} R 50\n"));
    for (f, v) in g.frequencies().zip(sweep.values()) {
        let f_ghz = f / 1e9;
        let (a, b) = match format {
            TouchstoneFormat::Ri => (v.re, v.im),
            TouchstoneFormat::Ma => (v.norm(), v.arg().to_degrees()),
            TouchstoneFormat::Db => (20.0 * v.norm().log10(), v.arg().to_degrees()),
        };
        out.push_str(&format!("{f_ghz} {a} {b}\n"));
    }
    out
}
