//! Post-processing toolkit for bi-static RCS reduction measurements.
//!
//! The pipeline: ingest per-angle DUT and reference frequency sweeps,
//! transform to the time domain, gate the target echo with a Kaiser window,
//! transform back, form the gated RCS-reduction spectrum, and assemble
//! mirrored bi-static patterns at selected frequencies. A point-scatterer
//! forward model generates synthetic campaigns for validation.

pub mod gating;
pub mod ingest;
pub mod rcs;
pub mod spectral;
pub mod sweep;
pub mod synth;
pub mod units;

pub use ingest::{
    parse_csv, parse_touchstone, read_sweep_file, stitch_bands, write_csv, write_touchstone,
    CampaignManifest, IngestError, ManifestEntry, TouchstoneFormat,
};

pub use gating::{
    apply_gate, detect_gate, gate_sweep, GateError, GateMode, GateReport, GateSpec, DEFAULT_BETA,
    DEFAULT_HALF_WIDTH,
};
pub use rcs::{
    assemble_pattern, rcsr_spectrum, sample_at, AngleCut, BistaticPattern, PatternSource, RcsError,
};
pub use spectral::{
    bessel_i0, kaiser_weights, to_freq, to_freq_direct, to_time, to_time_direct, SpectralError,
    TimeResponse, WindowShape,
};
pub use sweep::{FrequencyGrid, FrequencySweep, SweepError};
pub use synth::{
    derive_seed, generate_campaign, simulate_sweep, AngleTaper, CampaignScript, Reflectivity,
    Scatterer, Scene, SynthError, TargetSpec,
};
