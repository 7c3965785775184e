//! Frequency-domain sweep data model.
//!
//! A [`FrequencySweep`] is a complex reflection coefficient sampled on a
//! uniform [`FrequencyGrid`] — the unit of data every other module consumes.

use num_complex::Complex64;
use thiserror::Error;

/// Relative tolerance on grid spacing used when validating uniformity.
/// VNA grids are exact in practice; this absorbs text round-trip jitter only.
pub const GRID_SPACING_TOL: f64 = 1e-6;

#[derive(Debug, Error, PartialEq)]
pub enum SweepError {
    #[error("invalid frequency grid: {0}")]
    InvalidGrid(String),
    #[error("value count {got} does not match grid point count {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },
}

/// Uniform frequency grid from `f_start` to `f_stop` inclusive.
///
/// The spacing `(f_stop - f_start) / (n_points - 1)` is always derived,
/// never stored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyGrid {
    f_start_hz: f64,
    f_stop_hz: f64,
    n_points: usize,
}

impl FrequencyGrid {
    pub fn new(f_start_hz: f64, f_stop_hz: f64, n_points: usize) -> Result<Self, SweepError> {
        if !(f_start_hz.is_finite() && f_stop_hz.is_finite()) {
            return Err(SweepError::InvalidGrid("non-finite endpoint".into()));
        }
        if f_start_hz <= 0.0 {
            return Err(SweepError::InvalidGrid(format!(
                "f_start must be positive, got {f_start_hz}"
            )));
        }
        if f_stop_hz <= f_start_hz {
            return Err(SweepError::InvalidGrid(format!(
                "f_stop {f_stop_hz} must exceed f_start {f_start_hz}"
            )));
        }
        if n_points < 2 {
            return Err(SweepError::InvalidGrid(format!(
                "need at least 2 points, got {n_points}"
            )));
        }
        Ok(Self {
            f_start_hz,
            f_stop_hz,
            n_points,
        })
    }

    pub fn f_start(&self) -> f64 {
        self.f_start_hz
    }

    pub fn f_stop(&self) -> f64 {
        self.f_stop_hz
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    /// Grid spacing in Hz.
    pub fn spacing(&self) -> f64 {
        (self.f_stop_hz - self.f_start_hz) / (self.n_points - 1) as f64
    }

    /// Frequency of the `i`-th point.
    pub fn freq_at(&self, i: usize) -> f64 {
        self.f_start_hz + i as f64 * self.spacing()
    }

    pub fn frequencies(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(move |i| self.freq_at(i))
    }

    /// Maximum unambiguous delay representable by this grid, `1 / spacing`.
    pub fn alias_span(&self) -> f64 {
        1.0 / self.spacing()
    }

    pub fn contains(&self, f_hz: f64) -> bool {
        f_hz >= self.f_start_hz && f_hz <= self.f_stop_hz
    }

    /// True when both grids have the same endpoints and point count to
    /// within [`GRID_SPACING_TOL`] of the spacing.
    pub fn approx_eq(&self, other: &Self) -> bool {
        let tol = self.spacing() * GRID_SPACING_TOL;
        self.n_points == other.n_points
            && (self.f_start_hz - other.f_start_hz).abs() <= tol
            && (self.f_stop_hz - other.f_stop_hz).abs() <= tol
    }
}

/// Complex reflection coefficient on a uniform frequency grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencySweep {
    grid: FrequencyGrid,
    values: Vec<Complex64>,
}

impl FrequencySweep {
    pub fn new(grid: FrequencyGrid, values: Vec<Complex64>) -> Result<Self, SweepError> {
        if values.len() != grid.n_points() {
            return Err(SweepError::LengthMismatch {
                expected: grid.n_points(),
                got: values.len(),
            });
        }
        if let Some(index) = values.iter().position(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(SweepError::NonFinite { index });
        }
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Pointwise scaling by a complex constant. Used to model a common
    /// system gain applied to a measurement channel.
    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|v| v * factor).collect(),
        }
    }
}
