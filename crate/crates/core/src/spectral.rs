//! Discrete transform pair between frequency sweeps and time responses,
//! plus Kaiser window generation.
//!
//! The pair is defined so that a physical delay `tau` in a sweep
//! `e^{-i 2 pi f tau}` lands on the time axis at `t ≈ tau mod T_alias`
//! (with a constant residual phase `e^{-i 2 pi f_start tau}`):
//!
//! ```text
//! to_time:  X_k = sum_{n=0}^{M-1} x_n e^{+i 2 pi k n / M}        k = 0..M-1
//! to_freq:  x_n = (1/M) sum_{k=0}^{M-1} X_k e^{-i 2 pi k n / M}  n = 0..N-1
//! ```
//!
//! where `M = pad_factor * N` and the sweep is zero-padded to `M` before the
//! forward trip. The pair is exactly inverse up to truncation of the padding,
//! and satisfies `sum |x_n|^2 == (1/M) sum |X_k|^2`.
//!
//! Transforms run through an O(M log M) FFT; `to_time_direct` /
//! `to_freq_direct` are direct O(M^2) evaluations of the same sums, kept as
//! an independent reference path.

use num_complex::Complex64;
use rustfft::FftPlanner;
use thiserror::Error;

use crate::sweep::{FrequencyGrid, FrequencySweep, SweepError};

#[derive(Debug, Error, PartialEq)]
pub enum SpectralError {
    #[error("time response length {got} is not a multiple of the grid point count {original_n}")]
    LengthMismatch { original_n: usize, got: usize },
    #[error(transparent)]
    Sweep(#[from] SweepError),
}

/// Complex amplitude on the uniform time grid `t_k = k * dt`.
///
/// `dt = 1 / (M * spacing)` for a transform of `M` points, so the alias-free
/// span `M * dt = 1 / spacing` does not depend on zero padding.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeResponse {
    dt: f64,
    values: Vec<Complex64>,
}

impl TimeResponse {
    pub fn new(dt: f64, values: Vec<Complex64>) -> Self {
        assert!(dt > 0.0, "dt must be positive");
        assert!(values.len() >= 2, "need at least 2 time samples");
        Self { dt, values }
    }

    pub fn dt(&self) -> f64 {
        self.dt
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

    /// Time of the `k`-th sample.
    pub fn time_at(&self, k: usize) -> f64 {
        k as f64 * self.dt
    }

    /// Alias-free span `len * dt == 1 / spacing`.
    pub fn span(&self) -> f64 {
        self.values.len() as f64 * self.dt
    }

    /// Index and magnitude of the strongest sample, or `None` for an
    /// all-zero response. Comparisons run on `re²+im²`, so a common gain on
    /// all samples cannot perturb which index wins.
    pub fn peak(&self) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64)> = None;
        for (k, v) in self.values.iter().enumerate() {
            let m = v.norm_sqr();
            match best {
                Some((_, b)) if m <= b => {}
                _ => best = Some((k, m)),
            }
        }
        best.filter(|&(_, m)| m > 0.0).map(|(k, m)| (k, m.sqrt()))
    }
}

/// Taper applied across the in-gate samples of a time gate.
///
/// Only the Kaiser family is supported; the window length is chosen where
/// the window is materialized (it depends on the time grid), so the shape
/// carries just the `beta` parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WindowShape {
    Kaiser { beta: f64 },
}

impl WindowShape {
    pub fn kaiser(beta: f64) -> Self {
        assert!(beta.is_finite() && beta >= 0.0, "beta must be finite and non-negative");
        Self::Kaiser { beta }
    }

    pub fn beta(&self) -> f64 {
        match self {
            Self::Kaiser { beta } => *beta,
        }
    }

    /// Materialize the window at the given length.
    pub fn weights(&self, length: usize) -> Vec<f64> {
        kaiser_weights(length, self.beta())
    }
}

/// Modified Bessel function of the first kind, order zero.
///
/// Power series `sum_m (x/2)^{2m} / (m!)^2`, summed until the next term no
/// longer changes the result. All terms are positive so there is no
/// cancellation; relative error stays below 1e-12 over the range used by
/// Kaiser windows.
pub fn bessel_i0(x: f64) -> f64 {
    let base = x * x / 4.0;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut m = 1u32;
    loop {
        term *= base / ((m as f64) * (m as f64));
        let next = sum + term;
        if next == sum || !next.is_finite() {
            return next;
        }
        sum = next;
        m += 1;
    }
}

/// Kaiser window of the given length.
///
/// `w[n] = I0(beta * sqrt(1 - r^2)) / I0(beta)` with `r = 2n/(L-1) - 1`.
/// A length of 1 yields `[1.0]`, and `beta = 0` the rectangular window.
/// The offsets `r` are computed from the integer `2n - (L-1)` so that the
/// result is symmetric to the last bit.
pub fn kaiser_weights(length: usize, beta: f64) -> Vec<f64> {
    if length == 0 {
        return Vec::new();
    }
    if length == 1 {
        return vec![1.0];
    }
    let denom = (length - 1) as f64;
    let i0_beta = bessel_i0(beta);
    (0..length)
        .map(|n| {
            let num = 2 * n as i64 - (length as i64 - 1);
            let r = num as f64 / denom;
            bessel_i0(beta * (1.0 - r * r).sqrt()) / i0_beta
        })
        .collect()
}

/// Transform a sweep to the time domain, zero-padded to
/// `pad_factor * n_points` samples.
pub fn to_time(sweep: &FrequencySweep, pad_factor: usize) -> TimeResponse {
    assert!(pad_factor >= 1, "pad_factor must be at least 1");
    let n = sweep.len();
    let m = n * pad_factor;
    let mut buf = vec![Complex64::new(0.0, 0.0); m];
    buf[..n].copy_from_slice(sweep.values());
    FftPlanner::new().plan_fft_inverse(m).process(&mut buf);
    TimeResponse::new(1.0 / (m as f64 * sweep.grid().spacing()), buf)
}

/// Transform a time response back to the frequency domain on `grid`,
/// truncating any zero padding.
///
/// The response length must be an integer multiple of `grid.n_points()`.
pub fn to_freq(time: &TimeResponse, grid: &FrequencyGrid) -> Result<FrequencySweep, SpectralError> {
    let n = grid.n_points();
    let m = time.len();
    if m == 0 || !m.is_multiple_of(n) {
        return Err(SpectralError::LengthMismatch { original_n: n, got: m });
    }
    let mut buf = time.values().to_vec();
    FftPlanner::new().plan_fft_forward(m).process(&mut buf);
    let scale = 1.0 / m as f64;
    buf.truncate(n);
    for v in &mut buf {
        *v *= scale;
    }
    Ok(FrequencySweep::new(*grid, buf)?)
}

/// Direct O(M^2) evaluation of the `to_time` sum. Reference path; must agree
/// with [`to_time`] to within 1e-9.
pub fn to_time_direct(sweep: &FrequencySweep, pad_factor: usize) -> TimeResponse {
    assert!(pad_factor >= 1, "pad_factor must be at least 1");
    let n = sweep.len();
    let m = n * pad_factor;
    let tw = twiddle_table(m, 1.0);
    let x = sweep.values();
    let values = (0..m)
        .map(|k| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (i, &v) in x.iter().enumerate() {
                acc += v * tw[(k * i) % m];
            }
            acc
        })
        .collect();
    TimeResponse::new(1.0 / (m as f64 * sweep.grid().spacing()), values)
}

/// Direct O(M^2) evaluation of the `to_freq` sum. Reference path.
pub fn to_freq_direct(
    time: &TimeResponse,
    grid: &FrequencyGrid,
) -> Result<FrequencySweep, SpectralError> {
    let n = grid.n_points();
    let m = time.len();
    if m == 0 || !m.is_multiple_of(n) {
        return Err(SpectralError::LengthMismatch { original_n: n, got: m });
    }
    let tw = twiddle_table(m, -1.0);
    let scale = 1.0 / m as f64;
    let x = time.values();
    let values: Vec<Complex64> = (0..n)
        .map(|i| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, &v) in x.iter().enumerate() {
                acc += v * tw[(k * i) % m];
            }
            acc * scale
        })
        .collect();
    Ok(FrequencySweep::new(*grid, values)?)
}

fn twiddle_table(m: usize, sign: f64) -> Vec<Complex64> {
    (0..m)
        .map(|k| Complex64::from_polar(1.0, sign * 2.0 * std::f64::consts::PI * k as f64 / m as f64))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn grid(f0: f64, f1: f64, n: usize) -> FrequencyGrid {
        FrequencyGrid::new(f0, f1, n).unwrap()
    }

    fn delay_sweep(g: FrequencyGrid, tau: f64) -> FrequencySweep {
        let values = g
            .frequencies()
            .map(|f| Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * f * tau))
            .collect();
        FrequencySweep::new(g, values).unwrap()
    }

    /// Independent I0 oracle: trapezoid rule on the integral representation
    /// `I0(x) = (1/pi) int_0^pi e^{x cos t} dt`. The integrand extends to an
    /// even periodic function, so the trapezoid sum converges spectrally.
    fn bessel_i0_quadrature(x: f64) -> f64 {
        let n = 4000;
        let h = std::f64::consts::PI / n as f64;
        let mut sum = 0.5 * ((x).exp() + (-x).exp());
        for j in 1..n {
            sum += (x * (j as f64 * h).cos()).exp();
        }
        sum * h / std::f64::consts::PI
    }

    #[test]
    fn bessel_i0_matches_quadrature_oracle() {
        for i in 0..=300 {
            let x = i as f64 * 0.1;
            let got = bessel_i0(x);
            let want = bessel_i0_quadrature(x);
            let rel = ((got - want) / want).abs();
            assert!(rel < 1e-12, "I0({x}): got {got}, oracle {want}, rel {rel:.3e}");
        }
    }

    #[test]
    fn bessel_i0_reference_values() {
        assert_eq!(bessel_i0(0.0), 1.0);
        let cases = [
            (1.0, 1.2660658777520084),
            (5.0, 27.239871823604442),
            (6.0, 67.23440697647797),
            (10.0, 2815.7166284662545),
            (20.0, 43558282.559553534),
            (30.0, 781672297823.9775),
        ];
        for (x, want) in cases {
            let got = bessel_i0(x);
            let rel = ((got - want) / want).abs();
            assert!(rel < 1e-12, "I0({x}): got {got}, want {want}");
        }
    }

    #[test]
    fn kaiser_beta_zero_is_rectangular() {
        assert_eq!(kaiser_weights(5, 0.0), vec![1.0; 5]);
    }

    #[test]
    fn kaiser_length_one_is_unit() {
        assert_eq!(kaiser_weights(1, 8.0), vec![1.0]);
    }

    #[test]
    fn kaiser_endpoints_beta_six() {
        let w = kaiser_weights(5, 6.0);
        let want = 1.0 / bessel_i0(6.0); // I0(0)/I0(6)
        assert!((w[0] - want).abs() < 1e-15, "endpoint {} vs {want}", w[0]);
        assert!((w[0] - 0.014873).abs() < 1e-6);
        assert_eq!(w[2], 1.0, "odd-length center weight is exactly 1");
    }

    proptest! {
        #[test]
        fn kaiser_symmetry_is_exact(length in 1usize..200, beta in 0.0f64..20.0) {
            let w = kaiser_weights(length, beta);
            for n in 0..length {
                prop_assert_eq!(w[n], w[length - 1 - n]);
            }
            let max = w.iter().cloned().fold(f64::MIN, f64::max);
            prop_assert!(max <= 1.0);
            prop_assert!(w.iter().all(|&v| v > 0.0 && v <= 1.0));
        }
    }

    #[test]
    fn all_ones_sweep_peaks_at_zero() {
        let g = grid(10e9, 20e9, 64);
        let s = FrequencySweep::new(g, vec![Complex64::new(1.0, 0.0); 64]).unwrap();
        let t = to_time(&s, 1);
        let (k, _) = t.peak().unwrap();
        assert_eq!(k, 0);
    }

    #[test]
    fn delay_peak_lands_at_expected_bin() {
        // 22-40 GHz, 1601 points: spacing 11.25 MHz, alias span 88.9 ns.
        let g = grid(22e9, 40e9, 1601);
        let tau = 28e-9;
        for pad in [1usize, 4] {
            let t = to_time(&delay_sweep(g, tau), pad);
            let (k, _) = t.peak().unwrap();
            let expect = (tau / t.dt()).round() as usize;
            assert_eq!(k, expect, "pad {pad}: peak bin {k}, expected {expect}");
            assert!((t.time_at(k) - tau).abs() <= t.dt() / 2.0);
        }
    }

    #[test]
    fn roundtrip_identity_with_padding() {
        let g = grid(22e9, 40e9, 101);
        let s = delay_sweep(g, 13e-9);
        for pad in [1usize, 4] {
            let back = to_freq(&to_time(&s, pad), &g).unwrap();
            let mut worst = 0.0f64;
            for (a, b) in back.values().iter().zip(s.values()) {
                worst = worst.max((a - b).norm());
            }
            assert!(worst < 1e-10, "pad {pad}: max error {worst:.3e}");
        }
    }

    #[test]
    fn to_freq_rejects_non_multiple_length() {
        let g = grid(1e9, 2e9, 5);
        let t = TimeResponse::new(1e-12, vec![Complex64::new(0.0, 0.0); 7]);
        assert_eq!(
            to_freq(&t, &g).unwrap_err(),
            SpectralError::LengthMismatch { original_n: 5, got: 7 }
        );
    }

    #[test]
    fn zero_time_response_gives_zero_sweep() {
        let g = grid(1e9, 2e9, 8);
        let t = TimeResponse::new(1e-12, vec![Complex64::new(0.0, 0.0); 8]);
        let s = to_freq(&t, &g).unwrap();
        assert!(s.values().iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn direct_and_fft_paths_agree() {
        let g = grid(22e9, 40e9, 101);
        let s = delay_sweep(g, 40e-9);
        for pad in [1usize, 2] {
            let fast = to_time(&s, pad);
            let slow = to_time_direct(&s, pad);
            let scale = fast.values().iter().map(|v| v.norm()).fold(0.0, f64::max);
            for (a, b) in fast.values().iter().zip(slow.values()) {
                assert!((a - b).norm() / scale < 1e-9);
            }
            let back_fast = to_freq(&fast, &g).unwrap();
            let back_slow = to_freq_direct(&slow, &g).unwrap();
            for (a, b) in back_fast.values().iter().zip(back_slow.values()) {
                assert!((a - b).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn parseval_holds_in_pair_convention() {
        let g = grid(10e9, 40e9, 256);
        let s = delay_sweep(g, 20e-9);
        let t = to_time(&s, 1);
        let freq_energy: f64 = s.values().iter().map(|v| v.norm_sqr()).sum();
        let time_energy: f64 = t.values().iter().map(|v| v.norm_sqr()).sum();
        let rel = (freq_energy - time_energy / s.len() as f64).abs() / freq_energy;
        assert!(rel < 1e-9, "Parseval relative error {rel:.3e}");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn roundtrip_on_random_sweeps(
            seed in 0u64..1000,
            n in prop::sample::select(vec![16usize, 101]),
            pad in prop::sample::select(vec![1usize, 4]),
        ) {
            use rand_core::{RngCore, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut unit = || (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0;
            let g = grid(1e9, 5e9, n);
            let values: Vec<Complex64> = (0..n).map(|_| Complex64::new(unit(), unit())).collect();
            let s = FrequencySweep::new(g, values).unwrap();
            let back = to_freq(&to_time(&s, pad), &g).unwrap();
            let scale = s.values().iter().map(|v| v.norm()).fold(1e-30, f64::max);
            for (a, b) in back.values().iter().zip(s.values()) {
                prop_assert!((a - b).norm() / scale < 1e-10);
            }
        }

        #[test]
        fn to_time_is_linear(seed in 0u64..1000) {
            use rand_core::{RngCore, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut unit = || (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0;
            let g = grid(1e9, 5e9, 32);
            let a: Vec<Complex64> = (0..32).map(|_| Complex64::new(unit(), unit())).collect();
            let b: Vec<Complex64> = (0..32).map(|_| Complex64::new(unit(), unit())).collect();
            let sum: Vec<Complex64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
            let ta = to_time(&FrequencySweep::new(g, a).unwrap(), 1);
            let tb = to_time(&FrequencySweep::new(g, b).unwrap(), 1);
            let ts = to_time(&FrequencySweep::new(g, sum).unwrap(), 1);
            let scale = ts.values().iter().map(|v| v.norm()).fold(1e-30, f64::max);
            for k in 0..32 {
                let lin = ta.values()[k] + tb.values()[k];
                prop_assert!((ts.values()[k] - lin).norm() / scale < 1e-10);
            }
        }

        #[test]
        fn delay_peak_location_property(frac in 0.01f64..0.89) {
            let g = grid(22e9, 40e9, 128);
            let tau = frac * g.alias_span();
            let t = to_time(&delay_sweep(g, tau), 4);
            let (k, _) = t.peak().unwrap();
            prop_assert!((t.time_at(k) - tau).abs() <= t.dt() / 2.0,
                "tau {tau:.3e}, peak at {:.3e}", t.time_at(k));
        }
    }
}
