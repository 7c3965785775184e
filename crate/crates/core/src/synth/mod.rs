//! Point-scatterer forward model: synthesize the VNA sweeps a bi-static
//! measurement would record, as ground truth for the processing chain.
//!
//! A scene is a sum of discrete echoes `amp·Γ(f)·e^{−i2πf·delay}` plus
//! complex circular Gaussian noise. Noise is reproducible: a ChaCha8 stream
//! cipher keyed from the scene seed feeds a Box–Muller transform (uniforms
//! are `(next_u64() >> 11) · 2⁻⁵³`), so equal seeds give bit-identical
//! sweeps on every platform.

mod script;

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rand_core::{RngCore, SeedableRng};
use thiserror::Error;

use crate::ingest::{write_touchstone, CampaignManifest, IngestError, ManifestEntry, TouchstoneFormat};
use crate::sweep::{FrequencyGrid, FrequencySweep};

pub use script::{AngleTaper, CampaignScript, TargetSpec};

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("invalid scene: {0}")]
    InvalidScene(String),
    #[error("invalid campaign script: {0}")]
    Script(String),
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error("cannot write {}", path.display())]
    Io { path: std::path::PathBuf, source: std::io::Error },
}

/// Frequency dependence of a scatterer's reflection coefficient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Reflectivity {
    /// Frequency-flat, multiplier 1.
    Unit,
    /// Frequency-flat at the given level.
    ConstantDb(f64),
    /// Level ramps linearly in dB from the low band edge to the high one.
    RampDb { start_db: f64, stop_db: f64 },
}

impl Reflectivity {
    /// Linear magnitude at `f_hz` on the given band.
    pub fn magnitude(&self, grid: &FrequencyGrid, f_hz: f64) -> f64 {
        let db = match *self {
            Reflectivity::Unit => return 1.0,
            Reflectivity::ConstantDb(db) => db,
            Reflectivity::RampDb { start_db, stop_db } => {
                let frac = (f_hz - grid.f_start()) / (grid.f_stop() - grid.f_start());
                start_db + (stop_db - start_db) * frac
            }
        };
        10f64.powf(db / 20.0)
    }
}

/// One discrete echo.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scatterer {
    delay: f64,
    amplitude: Complex64,
    reflectivity: Reflectivity,
}

impl Scatterer {
    pub fn new(delay: f64, amplitude: Complex64) -> Result<Self, SynthError> {
        Self::with_reflectivity(delay, amplitude, Reflectivity::Unit)
    }

    pub fn with_reflectivity(
        delay: f64,
        amplitude: Complex64,
        reflectivity: Reflectivity,
    ) -> Result<Self, SynthError> {
        if !delay.is_finite() || delay < 0.0 {
            return Err(SynthError::InvalidScene(format!(
                "scatterer delay {delay:.3e} s must be finite and non-negative"
            )));
        }
        if !amplitude.re.is_finite() || !amplitude.im.is_finite() {
            return Err(SynthError::InvalidScene("scatterer amplitude must be finite".into()));
        }
        Ok(Self { delay, amplitude, reflectivity })
    }

    pub fn delay(&self) -> f64 {
        self.delay
    }

    pub fn amplitude(&self) -> Complex64 {
        self.amplitude
    }

    pub fn reflectivity(&self) -> Reflectivity {
        self.reflectivity
    }
}

/// A set of scatterers plus an optional noise floor and the seed that makes
/// the noise reproducible.
#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    scatterers: Vec<Scatterer>,
    noise_floor_db: Option<f64>,
    seed: u64,
}

impl Scene {
    pub fn new(
        scatterers: Vec<Scatterer>,
        noise_floor_db: Option<f64>,
        seed: u64,
    ) -> Result<Self, SynthError> {
        if let Some(db) = noise_floor_db {
            if !db.is_finite() {
                return Err(SynthError::InvalidScene("noise floor must be finite".into()));
            }
        }
        Ok(Self { scatterers, noise_floor_db, seed })
    }

    /// Noise-free scene.
    pub fn silent(scatterers: Vec<Scatterer>) -> Result<Self, SynthError> {
        Self::new(scatterers, None, 0)
    }

    pub fn scatterers(&self) -> &[Scatterer] {
        &self.scatterers
    }

    pub fn noise_floor_db(&self) -> Option<f64> {
        self.noise_floor_db
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Describe scatterers whose delay cannot be represented on this grid's
    /// alias-free span (they fold back to `delay mod 1/Δf`).
    pub fn alias_warnings(&self, grid: &FrequencyGrid) -> Vec<String> {
        let span = grid.alias_span();
        self.scatterers
            .iter()
            .filter(|s| s.delay >= span)
            .map(|s| {
                format!(
                    "scatterer at {:.3e} s exceeds the {:.3e} s alias-free span and will fold to {:.3e} s",
                    s.delay,
                    span,
                    s.delay % span
                )
            })
            .collect()
    }
}

/// SplitMix64 step, used to derive independent per-angle/per-role seeds
/// from one campaign seed.
fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Derive the noise seed for one sweep of a campaign. `role` is 0 for DUT,
/// 1 for reference; the angle enters in milli-degrees so distinct angles
/// never collide.
pub fn derive_seed(campaign_seed: u64, angle_deg: f64, role: u64) -> u64 {
    let angle_millideg = (angle_deg * 1000.0).round() as i64 as u64;
    splitmix64(splitmix64(campaign_seed ^ angle_millideg.rotate_left(17)) ^ role)
}

struct GaussianPairs {
    rng: rand_chacha::ChaCha8Rng,
}

impl GaussianPairs {
    fn new(seed: u64) -> Self {
        Self { rng: rand_chacha::ChaCha8Rng::seed_from_u64(seed) }
    }

    fn uniform(&mut self) -> f64 {
        // 53 random bits → [0, 1); adding 1 ulp-of-2⁻⁵³ keeps it in (0, 1]
        // where needed by the caller.
        (self.rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// One standard-normal pair via Box–Muller.
    fn pair(&mut self) -> (f64, f64) {
        let u1 = (self.uniform() + 1.0 / (1u64 << 53) as f64).min(1.0);
        let u2 = self.uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let phi = 2.0 * std::f64::consts::PI * u2;
        (r * phi.cos(), r * phi.sin())
    }
}

/// Evaluate the scene on a grid. The noise floor is an RMS level: at
/// `floor_db`, `E[|noise|²] = 10^(floor_db/10)`, split evenly between the
/// real and imaginary components.
pub fn simulate_sweep(scene: &Scene, grid: &FrequencyGrid) -> FrequencySweep {
    let mut values: Vec<Complex64> = grid
        .frequencies()
        .map(|f| {
            scene
                .scatterers
                .iter()
                .map(|s| {
                    let phase = -2.0 * std::f64::consts::PI * f * s.delay;
                    s.amplitude
                        * s.reflectivity.magnitude(grid, f)
                        * Complex64::from_polar(1.0, phase)
                })
                .sum()
        })
        .collect();

    if let Some(floor_db) = scene.noise_floor_db {
        let sigma = 10f64.powf(floor_db / 20.0) / 2f64.sqrt();
        let mut gauss = GaussianPairs::new(scene.seed);
        for v in &mut values {
            let (re, im) = gauss.pair();
            *v += Complex64::new(sigma * re, sigma * im);
        }
    }

    FrequencySweep::new(*grid, values).expect("scene values are finite by construction")
}

/// Synthesize a full campaign on disk: per-angle `angle_<deg>/dut.s1p` and
/// `ref.s1p` (Touchstone RI, exact round-trip) plus a `manifest.tsv`.
pub fn generate_campaign(
    script: &CampaignScript,
    grid: &FrequencyGrid,
    out_dir: &Path,
) -> Result<CampaignManifest, SynthError> {
    let io_err = |path: &Path| {
        let p = path.to_path_buf();
        move |source: std::io::Error| SynthError::Io { path: p.clone(), source }
    };
    std::fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;

    // The saved manifest names files relative to itself, so the campaign
    // directory can be moved or archived as a unit.
    let mut entries = Vec::with_capacity(script.angles().len());
    for &angle in script.angles() {
        let (dut_scene, ref_scene) = script.scenes_at(angle)?;
        let dut = simulate_sweep(&dut_scene, grid);
        let reference = simulate_sweep(&ref_scene, grid);

        let rel = PathBuf::from(format!("angle_{angle}"));
        let sub = out_dir.join(&rel);
        std::fs::create_dir_all(&sub).map_err(io_err(&sub))?;
        let dut_path = sub.join("dut.s1p");
        let ref_path = sub.join("ref.s1p");
        std::fs::write(&dut_path, write_touchstone(&dut, TouchstoneFormat::Ri))
            .map_err(io_err(&dut_path))?;
        std::fs::write(&ref_path, write_touchstone(&reference, TouchstoneFormat::Ri))
            .map_err(io_err(&ref_path))?;
        entries.push(ManifestEntry {
            angle_deg: angle,
            dut_path: rel.join("dut.s1p"),
            ref_path: rel.join("ref.s1p"),
        });
    }

    let manifest_path = out_dir.join("manifest.tsv");
    CampaignManifest::new(entries)?.save(&manifest_path)?;
    // Re-load so the returned entries carry paths resolved against the
    // manifest, exactly as any later consumer will see them.
    Ok(CampaignManifest::load(&manifest_path)?)
}
