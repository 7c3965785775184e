//! Time-gate detection and application.
//!
//! The gate is located on the reference response — the strongest echo marks
//! the target's specular return — and the same interval is then applied to
//! both the reference and the DUT response of that angle. Inside the gate
//! samples are tapered by a Kaiser window; outside they are zeroed.

use num_complex::Complex64;
use thiserror::Error;

use crate::spectral::{to_freq, to_time, SpectralError, TimeResponse, WindowShape};
use crate::sweep::FrequencySweep;

/// Default Kaiser shape parameter. Sidelobes sit near −90 dB, giving the
/// ≥ 80 dB out-of-gate suppression target some margin.
pub const DEFAULT_BETA: f64 = 13.0;

/// Default half-width for gate detection: a 2 ns gate centered on the peak.
pub const DEFAULT_HALF_WIDTH: f64 = 1e-9;

/// Fraction of the alias span whose tail counts as "near the alias edge"
/// for the wrap-around warning.
const ALIAS_EDGE_FRACTION: f64 = 0.95;

#[derive(Debug, Error, PartialEq)]
pub enum GateError {
    #[error("invalid gate: {0}")]
    InvalidGate(String),
    #[error("reference time response is identically zero; no peak to gate on")]
    NoPeak,
    #[error("threshold gate collapsed to a single sample; raise the threshold toward 0 dB or use a fixed half-width")]
    GateCollapsed,
    #[error("gate [{t_start:.3e}, {t_stop:.3e}] s extends beyond the {span:.3e} s alias-free span")]
    GateOutsideAxis { t_start: f64, t_stop: f64, span: f64 },
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

/// How `detect_gate` turns the located peak into an interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateMode {
    /// Fixed interval `[peak − w, peak + w]`.
    HalfWidth(f64),
    /// Contiguous interval around the peak where the magnitude stays within
    /// the given (negative) dB of the peak.
    ThresholdDb(f64),
}

/// A time interval plus the taper applied across it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateSpec {
    t_start: f64,
    t_stop: f64,
    shape: WindowShape,
}

impl GateSpec {
    /// Requires `0 ≤ t_start < t_stop`. Fit to a concrete time axis is
    /// checked when the gate is applied.
    pub fn new(t_start: f64, t_stop: f64, shape: WindowShape) -> Result<Self, GateError> {
        if !t_start.is_finite() || !t_stop.is_finite() {
            return Err(GateError::InvalidGate("gate bounds must be finite".into()));
        }
        if t_start < 0.0 {
            return Err(GateError::InvalidGate(format!(
                "gate start {t_start:.3e} s is negative"
            )));
        }
        if t_stop <= t_start {
            return Err(GateError::InvalidGate(format!(
                "gate stop {t_stop:.3e} s does not exceed start {t_start:.3e} s"
            )));
        }
        Ok(Self { t_start, t_stop, shape })
    }

    pub fn t_start(&self) -> f64 {
        self.t_start
    }

    pub fn t_stop(&self) -> f64 {
        self.t_stop
    }

    pub fn shape(&self) -> WindowShape {
        self.shape
    }

    /// True when the gate reaches into the last 5% of the alias-free span,
    /// where wrap-around from delays beyond the span would fold in.
    pub fn near_alias_edge(&self, span: f64) -> bool {
        self.t_stop > ALIAS_EDGE_FRACTION * span
    }
}

/// Diagnostics from gate detection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateReport {
    pub gate: GateSpec,
    /// Location of the strongest reference sample.
    pub peak_time: f64,
    /// Magnitude of that sample.
    pub peak_magnitude: f64,
    /// Level of the strongest out-of-gate sample relative to the peak, in
    /// dB (negative; `-inf` when nothing lies outside the gate).
    pub suppression_estimate: f64,
}

/// Locate the gate on a reference response: find the strongest sample, then
/// open an interval around it according to `mode`. The interval is clamped
/// to the alias-free span. `shape` is recorded in the resulting spec and
/// does not influence detection.
pub fn detect_gate(
    ref_time: &TimeResponse,
    mode: GateMode,
    shape: WindowShape,
) -> Result<GateReport, GateError> {
    let (peak_idx, peak_mag) = ref_time.peak().ok_or(GateError::NoPeak)?;
    let dt = ref_time.dt();
    let span = ref_time.span();
    let peak_time = ref_time.time_at(peak_idx);

    let (t_start, t_stop) = match mode {
        GateMode::HalfWidth(w) => {
            if !w.is_finite() || w <= 0.0 {
                return Err(GateError::InvalidGate(format!(
                    "half-width {w:.3e} s must be positive and finite"
                )));
            }
            ((peak_time - w).max(0.0), (peak_time + w).min(span))
        }
        GateMode::ThresholdDb(db) => {
            if !db.is_finite() || db >= 0.0 {
                return Err(GateError::InvalidGate(format!(
                    "threshold {db} dB must be negative and finite"
                )));
            }
            let floor = peak_mag * 10f64.powf(db / 20.0);
            let mags: Vec<f64> =
                ref_time.values().iter().map(|v| v.norm_sqr().sqrt()).collect();
            let mut lo = peak_idx;
            while lo > 0 && mags[lo - 1] >= floor {
                lo -= 1;
            }
            let mut hi = peak_idx;
            while hi + 1 < mags.len() && mags[hi + 1] >= floor {
                hi += 1;
            }
            if lo == hi {
                return Err(GateError::GateCollapsed);
            }
            (lo as f64 * dt, hi as f64 * dt)
        }
    };

    let gate = GateSpec::new(t_start, t_stop, shape)?;
    let mut worst_outside = 0.0f64;
    for (k, v) in ref_time.values().iter().enumerate() {
        let t = k as f64 * dt;
        if t < t_start || t > t_stop {
            worst_outside = worst_outside.max(v.norm_sqr().sqrt());
        }
    }
    let suppression_estimate = if worst_outside > 0.0 {
        20.0 * (worst_outside / peak_mag).log10()
    } else {
        f64::NEG_INFINITY
    };

    Ok(GateReport { gate, peak_time, peak_magnitude: peak_mag, suppression_estimate })
}

/// Zero the response outside the gate and taper the in-gate samples with
/// the gate's window. Length and time axis are unchanged.
pub fn apply_gate(time: &TimeResponse, gate: &GateSpec) -> Result<TimeResponse, GateError> {
    let dt = time.dt();
    let span = time.span();
    if gate.t_stop > span {
        return Err(GateError::GateOutsideAxis {
            t_start: gate.t_start,
            t_stop: gate.t_stop,
            span,
        });
    }
    let lo = (gate.t_start / dt).ceil() as usize;
    let hi = ((gate.t_stop / dt).floor() as usize).min(time.len() - 1);
    let mut out = vec![Complex64::new(0.0, 0.0); time.len()];
    if lo <= hi {
        let weights = gate.shape.weights(hi - lo + 1);
        for (w, k) in weights.iter().zip(lo..=hi) {
            out[k] = time.values()[k] * w;
        }
    }
    Ok(TimeResponse::new(dt, out))
}

/// The full per-sweep loop body: transform to time, gate, transform back.
/// The output lives on the same grid as the input.
pub fn gate_sweep(
    sweep: &FrequencySweep,
    gate: &GateSpec,
    pad_factor: usize,
) -> Result<FrequencySweep, GateError> {
    let gated = apply_gate(&to_time(sweep, pad_factor), gate)?;
    Ok(to_freq(&gated, sweep.grid())?)
}
