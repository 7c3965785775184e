//! File ingestion and emission: Touchstone v1 (1-port), CSV sweeps, band
//! stitching, and campaign manifests.

mod csv;
mod manifest;
mod stitch;
mod touchstone;

use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::sweep::{FrequencyGrid, FrequencySweep, SweepError};

pub use csv::{parse_csv, write_csv};
pub use manifest::{CampaignManifest, ManifestEntry};
pub use stitch::stitch_bands;
pub use touchstone::{parse_touchstone, write_touchstone, TouchstoneFormat};

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("malformed or missing option line: {0}")]
    MalformedOptionLine(String),
    #[error("non-uniform frequency grid at line {line}: {detail}")]
    NonUniformGrid { line: usize, detail: String },
    #[error("frequencies not strictly increasing at line {line}")]
    NonMonotonicFrequency { line: usize },
    #[error("fewer than 2 data rows")]
    EmptyData,
    #[error("missing or unrecognized CSV header (expected \"freq_hz,re,im\")")]
    MissingHeader,
    #[error("bad data row at line {line}: {detail}")]
    BadRow { line: usize, detail: String },
    #[error("cannot stitch bands: {0}")]
    GridMismatch(String),
    #[error("gap of {gap_hz:.6e} Hz between bands exceeds one grid step")]
    GapBetweenBands { gap_hz: f64 },
    #[error("bad manifest row at line {line}: {detail}")]
    BadManifestRow { line: usize, detail: String },
    #[error("duplicate angle {0}° in campaign")]
    DuplicateAngle(f64),
    #[error("angle {0}° outside the admissible range [1°, 90°]")]
    AngleOutOfRange(f64),
    #[error("angle {angle_deg}° is missing its counterpart file {}", missing.display())]
    IncompleteAngle { angle_deg: f64, missing: PathBuf },
    #[error("cannot tell the sweep format of `{}` (expected .s1p or .csv)", .0.display())]
    UnsupportedFile(PathBuf),
    #[error(transparent)]
    Sweep(#[from] SweepError),
    #[error("cannot access {}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

impl IngestError {
    fn io(path: &Path, source: std::io::Error) -> Self {
        Self::Io { path: path.to_path_buf(), source }
    }
}

/// Read a sweep file, choosing the parser from the extension
/// (`.s1p` → Touchstone, `.csv` → CSV).
pub fn read_sweep_file(path: &Path) -> Result<FrequencySweep, IngestError> {
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .map(|e| e.to_ascii_lowercase())
        .ok_or_else(|| IngestError::UnsupportedFile(path.to_path_buf()))?;
    let text = std::fs::read_to_string(path).map_err(|e| IngestError::io(path, e))?;
    match ext.as_str() {
        "s1p" => parse_touchstone(&text),
        "csv" => parse_csv(&text),
        _ => Err(IngestError::UnsupportedFile(path.to_path_buf())),
    }
}

/// Build a grid from parsed `(line_number, frequency)` pairs, enforcing
/// strictly increasing, uniformly spaced frequencies (relative spacing
/// tolerance 1e-6).
fn grid_from_rows(rows: &[(usize, f64)]) -> Result<FrequencyGrid, IngestError> {
    if rows.len() < 2 {
        return Err(IngestError::EmptyData);
    }
    for pair in rows.windows(2) {
        if pair[1].1 <= pair[0].1 {
            return Err(IngestError::NonMonotonicFrequency { line: pair[1].0 });
        }
    }
    let n = rows.len();
    let f_start = rows[0].1;
    let f_stop = rows[n - 1].1;
    let first_step = rows[1].1 - rows[0].1;
    for pair in rows.windows(2).skip(1) {
        let step = pair[1].1 - pair[0].1;
        if ((step - first_step) / first_step).abs() > crate::sweep::GRID_SPACING_TOL {
            return Err(IngestError::NonUniformGrid {
                line: pair[1].0,
                detail: format!("step {step:.6e} Hz vs {first_step:.6e} Hz"),
            });
        }
    }
    Ok(FrequencyGrid::new(f_start, f_stop, n)?)
}

/// Check a parsed value for finiteness, naming the offending line.
fn finite_value(line: usize, v: num_complex::Complex64) -> Result<num_complex::Complex64, IngestError> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(IngestError::BadRow { line, detail: "non-finite value".into() })
    }
}
