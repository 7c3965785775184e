//! RCS-reduction spectra and bi-static pattern assembly.
//!
//! The RCSR spectrum is the pointwise dB magnitude ratio of the gated DUT
//! sweep over the gated reference sweep. Any common system gain — cables,
//! antennas, VNA drive level — multiplies both sweeps by the same complex
//! constant and cancels in the ratio; this cancellation is the method's
//! calibration assumption and is preserved here to the last bit for
//! power-of-two constants (magnitudes are computed as `sqrt(re²+im²)` and
//! ratios are formed before the logarithm).

use num_complex::Complex64;
use thiserror::Error;

use crate::sweep::{FrequencyGrid, FrequencySweep};

const MIN_ANGLE_DEG: f64 = 1.0;
const MAX_ANGLE_DEG: f64 = 90.0;

#[derive(Debug, Error, PartialEq)]
pub enum RcsError {
    #[error("DUT and reference sweeps live on different grids")]
    GridMismatch,
    #[error("reference magnitude is exactly zero at {freq_hz:.6e} Hz; RCSR undefined there")]
    ReferenceNull { freq_hz: f64 },
    #[error("angle {0}° outside the admissible range [1°, 90°]")]
    AngleOutOfRange(f64),
    #[error("{f0_hz:.6e} Hz lies outside the band [{f_start:.6e}, {f_stop:.6e}] Hz")]
    OutOfBand { f0_hz: f64, f_start: f64, f_stop: f64 },
    #[error("spectrum length {got} does not match the grid's {expected} points")]
    SpectrumLength { expected: usize, got: usize },
    #[error("duplicate angle {0}° among cuts")]
    DuplicateAngle(f64),
    #[error("no angle cuts given")]
    NoCuts,
    #[error("every cut has zero magnitude at {f0_hz:.6e} Hz; nothing to normalize")]
    ZeroPattern { f0_hz: f64 },
}

fn magnitude(v: Complex64) -> f64 {
    v.norm_sqr().sqrt()
}

/// Pointwise `20·log10(|dut|/|ref|)`. Negative values mean the DUT reflects
/// less than the reference.
pub fn rcsr_spectrum(
    dut_gated: &FrequencySweep,
    ref_gated: &FrequencySweep,
) -> Result<Vec<f64>, RcsError> {
    if !dut_gated.grid().approx_eq(ref_gated.grid()) {
        return Err(RcsError::GridMismatch);
    }
    dut_gated
        .values()
        .iter()
        .zip(ref_gated.values())
        .enumerate()
        .map(|(i, (d, r))| {
            let rm = magnitude(*r);
            if rm == 0.0 {
                return Err(RcsError::ReferenceNull { freq_hz: dut_gated.grid().freq_at(i) });
            }
            Ok(20.0 * (magnitude(*d) / rm).log10())
        })
        .collect()
}

/// One observation angle's gated data plus its RCSR spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleCut {
    theta_deg: f64,
    dut_gated: FrequencySweep,
    ref_gated: FrequencySweep,
    rcsr_db: Vec<f64>,
}

impl AngleCut {
    pub fn new(
        theta_deg: f64,
        dut_gated: FrequencySweep,
        ref_gated: FrequencySweep,
    ) -> Result<Self, RcsError> {
        if !theta_deg.is_finite() || !(MIN_ANGLE_DEG..=MAX_ANGLE_DEG).contains(&theta_deg) {
            return Err(RcsError::AngleOutOfRange(theta_deg));
        }
        let rcsr_db = rcsr_spectrum(&dut_gated, &ref_gated)?;
        Ok(Self { theta_deg, dut_gated, ref_gated, rcsr_db })
    }

    pub fn theta_deg(&self) -> f64 {
        self.theta_deg
    }

    pub fn grid(&self) -> &FrequencyGrid {
        self.dut_gated.grid()
    }

    pub fn dut_gated(&self) -> &FrequencySweep {
        &self.dut_gated
    }

    pub fn ref_gated(&self) -> &FrequencySweep {
        &self.ref_gated
    }

    pub fn rcsr_db(&self) -> &[f64] {
        &self.rcsr_db
    }
}

/// Which per-angle quantity a pattern plots.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PatternSource {
    Dut,
    Ref,
    Rcsr,
}

/// Normalized bi-static pattern at one frequency: levels in dB with the
/// maximum at exactly 0, listed at ±1°…±90° in ascending angle order with
/// each −θ entry a bitwise copy of its +θ entry. θ = 0° cannot occur.
#[derive(Debug, Clone, PartialEq)]
pub struct BistaticPattern {
    f0_hz: f64,
    entries: Vec<(f64, f64)>,
}

impl BistaticPattern {
    pub fn f0_hz(&self) -> f64 {
        self.f0_hz
    }

    /// `(theta_deg, level_db)` pairs, ascending in angle.
    pub fn entries(&self) -> &[(f64, f64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn level_at(&self, theta_deg: f64) -> Option<f64> {
        self.entries
            .iter()
            .find(|(t, _)| (t - theta_deg).abs() < 1e-9)
            .map(|&(_, level)| level)
    }
}

fn interpolate(values: &[f64], grid: &FrequencyGrid, f0_hz: f64) -> Result<f64, RcsError> {
    if !grid.contains(f0_hz) {
        return Err(RcsError::OutOfBand {
            f0_hz,
            f_start: grid.f_start(),
            f_stop: grid.f_stop(),
        });
    }
    let pos = (f0_hz - grid.f_start()) / grid.spacing();
    let nearest = pos.round();
    if (pos - nearest).abs() < 1e-9 {
        return Ok(values[nearest as usize]);
    }
    let i = pos.floor() as usize;
    let frac = pos - i as f64;
    Ok(values[i] * (1.0 - frac) + values[i + 1] * frac)
}

/// Read a spectrum at `f0` by linear interpolation between the bracketing
/// grid points; exact on grid points.
pub fn sample_at(spectrum: &[f64], grid: &FrequencyGrid, f0_hz: f64) -> Result<f64, RcsError> {
    if spectrum.len() != grid.n_points() {
        return Err(RcsError::SpectrumLength {
            expected: grid.n_points(),
            got: spectrum.len(),
        });
    }
    interpolate(spectrum, grid, f0_hz)
}

/// Assemble the mirrored, normalized pattern at `f0` across all cuts.
///
/// Levels are interpolated in linear magnitude and normalized by the global
/// maximum before the single conversion to dB, so the peak is exactly 0 dB
/// and a common gain on every cut drops out.
pub fn assemble_pattern(
    cuts: &[AngleCut],
    f0_hz: f64,
    source: PatternSource,
) -> Result<BistaticPattern, RcsError> {
    if cuts.is_empty() {
        return Err(RcsError::NoCuts);
    }
    let mut order: Vec<usize> = (0..cuts.len()).collect();
    order.sort_by(|&a, &b| cuts[a].theta_deg.partial_cmp(&cuts[b].theta_deg).unwrap());
    for pair in order.windows(2) {
        if cuts[pair[0]].theta_deg == cuts[pair[1]].theta_deg {
            return Err(RcsError::DuplicateAngle(cuts[pair[0]].theta_deg));
        }
    }

    let mut mags = Vec::with_capacity(order.len());
    for &i in &order {
        let cut = &cuts[i];
        let profile: Vec<f64> = match source {
            PatternSource::Dut => cut.dut_gated.values().iter().map(|v| magnitude(*v)).collect(),
            PatternSource::Ref => cut.ref_gated.values().iter().map(|v| magnitude(*v)).collect(),
            PatternSource::Rcsr => cut
                .dut_gated
                .values()
                .iter()
                .zip(cut.ref_gated.values())
                .map(|(d, r)| magnitude(*d) / magnitude(*r))
                .collect(),
        };
        mags.push(interpolate(&profile, cut.grid(), f0_hz)?);
    }

    let peak = mags.iter().cloned().fold(0.0f64, f64::max);
    if peak == 0.0 {
        return Err(RcsError::ZeroPattern { f0_hz });
    }
    let levels: Vec<f64> = mags.iter().map(|m| 20.0 * (m / peak).log10()).collect();

    let mut entries = Vec::with_capacity(2 * order.len());
    for (&i, &level) in order.iter().rev().zip(levels.iter().rev()) {
        entries.push((-cuts[i].theta_deg, level));
    }
    for (&i, &level) in order.iter().zip(&levels) {
        entries.push((cuts[i].theta_deg, level));
    }
    Ok(BistaticPattern { f0_hz, entries })
}
