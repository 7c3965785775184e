//! Combine per-band sweeps into one sweep on the union grid.

use num_complex::Complex64;

use super::IngestError;
use crate::sweep::{FrequencyGrid, FrequencySweep, GRID_SPACING_TOL};

/// Stitch sweeps that share one grid spacing into a single sweep covering
/// the union of their bands. Bands may overlap or abut; overlapped points
/// take the pointwise complex average. Input order does not matter.
///
/// Errors: [`IngestError::GridMismatch`] when spacings differ (beyond 1e-6
/// relative) or bands sit off the common frequency lattice;
/// [`IngestError::GapBetweenBands`] when a hole wider than one grid step
/// separates two bands.
pub fn stitch_bands(sweeps: &[FrequencySweep]) -> Result<FrequencySweep, IngestError> {
    let Some(first) = sweeps.first() else {
        return Err(IngestError::EmptyData);
    };
    if sweeps.len() == 1 {
        return Ok(first.clone());
    }

    let mut order: Vec<usize> = (0..sweeps.len()).collect();
    order.sort_by(|&a, &b| {
        let ga = sweeps[a].grid();
        let gb = sweeps[b].grid();
        (ga.f_start(), ga.f_stop()).partial_cmp(&(gb.f_start(), gb.f_stop())).unwrap()
    });

    let base = sweeps[order[0]].grid();
    let df = base.spacing();
    for &i in &order[1..] {
        let g = sweeps[i].grid();
        if ((g.spacing() - df) / df).abs() > GRID_SPACING_TOL {
            return Err(IngestError::GridMismatch(format!(
                "spacing {:.6e} Hz differs from {:.6e} Hz",
                g.spacing(),
                df
            )));
        }
        let steps = (g.f_start() - base.f_start()) / df;
        if (steps - steps.round()).abs() > GRID_SPACING_TOL * steps.max(1.0) {
            return Err(IngestError::GridMismatch(format!(
                "band starting at {:.6e} Hz is off the common lattice (offset {steps:.6} steps)",
                g.f_start()
            )));
        }
    }

    // Coverage check in sorted order: each band must start within one step
    // of the span covered so far.
    let mut covered_stop = base.f_stop();
    for &i in &order[1..] {
        let g = sweeps[i].grid();
        let gap = g.f_start() - covered_stop;
        if gap > df * (1.0 + GRID_SPACING_TOL) {
            return Err(IngestError::GapBetweenBands { gap_hz: gap });
        }
        covered_stop = covered_stop.max(g.f_stop());
    }

    let n_total = ((covered_stop - base.f_start()) / df).round() as usize + 1;
    let mut sums = vec![Complex64::new(0.0, 0.0); n_total];
    let mut counts = vec![0usize; n_total];
    for &i in &order {
        let s = &sweeps[i];
        let offset = ((s.grid().f_start() - base.f_start()) / df).round() as usize;
        for (j, v) in s.values().iter().enumerate() {
            sums[offset + j] += v;
            counts[offset + j] += 1;
        }
    }
    let values: Vec<Complex64> =
        sums.iter().zip(&counts).map(|(s, &c)| s / c as f64).collect();

    let grid = FrequencyGrid::new(
        base.f_start(),
        base.f_start() + (n_total - 1) as f64 * df,
        n_total,
    )?;
    Ok(FrequencySweep::new(grid, values)?)
}
