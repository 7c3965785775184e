//! Campaign scripts: a TOML description of the synthetic measurement —
//! grid, angle sweep, target, clutter, and noise — from which per-angle
//! DUT/reference scene pairs are generated.
//!
//! ```toml
//! seed = 7
//!
//! [grid]                # optional; command-line flags may supply it instead
//! f_start = "10 GHz"    # numbers are Hz/seconds; strings take unit suffixes
//! f_stop = "40 GHz"
//! n_points = 1601
//!
//! [angles]              # either start/stop/step or list = [1, 2.5, …]
//! start = 1
//! stop = 90
//! step = 1
//!
//! [target]
//! delay = "28 ns"
//! amplitude = 1.0
//! reflectivity = { kind = "ramp_db", start_db = -3, stop_db = -20 }
//! angle_taper = "cos"   # "none" (default) or "cos"
//!
//! [[clutter]]
//! delay = "8 ns"
//! amplitude = 0.5
//!
//! [noise]
//! floor_db = -60
//! ```
//!
//! Both scenes of an angle share the target delay and the full clutter
//! list; the reference sees the target at unit amplitude (the bare ground
//! plane), the DUT sees it through its reflectivity and angle taper. Noise
//! draws are independent per angle and per role but fixed by the campaign
//! seed.

use num_complex::Complex64;
use serde::Deserialize;

use super::{derive_seed, Reflectivity, Scatterer, Scene, SynthError};
use crate::sweep::FrequencyGrid;
use crate::units;

/// Angle dependence of the DUT target's amplitude.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AngleTaper {
    None,
    Cosine,
}

impl AngleTaper {
    pub fn factor(&self, theta_deg: f64) -> f64 {
        match self {
            AngleTaper::None => 1.0,
            AngleTaper::Cosine => theta_deg.to_radians().cos(),
        }
    }
}

/// The scripted target echo.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TargetSpec {
    pub delay: f64,
    pub amplitude: f64,
    pub reflectivity: Reflectivity,
    pub angle_taper: AngleTaper,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CampaignScript {
    seed: u64,
    grid: Option<FrequencyGrid>,
    angles: Vec<f64>,
    target: TargetSpec,
    clutter: Vec<Scatterer>,
    noise_floor_db: Option<f64>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum NumOrText {
    Num(f64),
    Text(String),
}

impl NumOrText {
    fn seconds(&self) -> Result<f64, SynthError> {
        match self {
            NumOrText::Num(v) => Ok(*v),
            NumOrText::Text(t) => {
                units::parse_seconds(t).map_err(|e| SynthError::Script(e.to_string()))
            }
        }
    }

    fn hertz(&self) -> Result<f64, SynthError> {
        match self {
            NumOrText::Num(v) => Ok(*v),
            NumOrText::Text(t) => {
                units::parse_hertz(t).map_err(|e| SynthError::Script(e.to_string()))
            }
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScript {
    seed: Option<u64>,
    grid: Option<RawGrid>,
    angles: RawAngles,
    target: RawTarget,
    #[serde(default)]
    clutter: Vec<RawScatterer>,
    noise: Option<RawNoise>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    f_start: NumOrText,
    f_stop: NumOrText,
    n_points: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAngles {
    start: Option<f64>,
    stop: Option<f64>,
    step: Option<f64>,
    list: Option<Vec<f64>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTarget {
    delay: NumOrText,
    amplitude: f64,
    reflectivity: Option<RawReflectivity>,
    angle_taper: Option<String>,
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum RawReflectivity {
    Unit,
    ConstantDb { db: f64 },
    RampDb { start_db: f64, stop_db: f64 },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScatterer {
    delay: NumOrText,
    amplitude: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNoise {
    floor_db: f64,
}

fn expand_angles(raw: &RawAngles) -> Result<Vec<f64>, SynthError> {
    let err = |msg: &str| SynthError::Script(msg.to_string());
    let angles = match (&raw.list, raw.start, raw.stop, raw.step) {
        (Some(list), None, None, None) => {
            let mut a = list.clone();
            a.sort_by(|x, y| x.partial_cmp(y).unwrap());
            a
        }
        (None, Some(start), Some(stop), Some(step)) => {
            if step.is_nan() || step <= 0.0 {
                return Err(err("angles.step must be positive"));
            }
            if stop < start {
                return Err(err("angles.stop must not be below angles.start"));
            }
            let n_steps = ((stop - start) / step + 1e-9).floor() as usize;
            (0..=n_steps).map(|i| start + i as f64 * step).collect()
        }
        _ => {
            return Err(err(
                "angles must give either `list` or all of `start`, `stop`, `step`",
            ))
        }
    };
    if angles.is_empty() {
        return Err(err("angles is empty"));
    }
    for pair in angles.windows(2) {
        if pair[0] == pair[1] {
            return Err(SynthError::Script(format!("duplicate angle {}°", pair[0])));
        }
    }
    for &a in &angles {
        if !a.is_finite() || !(1.0..=90.0).contains(&a) {
            return Err(SynthError::Script(format!(
                "angle {a}° outside the admissible range [1°, 90°]"
            )));
        }
    }
    Ok(angles)
}

impl CampaignScript {
    pub fn from_toml(text: &str) -> Result<Self, SynthError> {
        let raw: RawScript =
            toml::from_str(text).map_err(|e| SynthError::Script(e.to_string()))?;

        let grid = match raw.grid {
            Some(g) => Some(
                FrequencyGrid::new(g.f_start.hertz()?, g.f_stop.hertz()?, g.n_points)
                    .map_err(|e| SynthError::Script(e.to_string()))?,
            ),
            None => None,
        };

        let angles = expand_angles(&raw.angles)?;

        let reflectivity = match raw.target.reflectivity {
            None | Some(RawReflectivity::Unit) => Reflectivity::Unit,
            Some(RawReflectivity::ConstantDb { db }) => Reflectivity::ConstantDb(db),
            Some(RawReflectivity::RampDb { start_db, stop_db }) => {
                Reflectivity::RampDb { start_db, stop_db }
            }
        };
        let angle_taper = match raw.target.angle_taper.as_deref() {
            None | Some("none") => AngleTaper::None,
            Some("cos") | Some("cosine") => AngleTaper::Cosine,
            Some(other) => {
                return Err(SynthError::Script(format!(
                    "unknown angle_taper `{other}` (expected \"none\" or \"cos\")"
                )))
            }
        };
        let target = TargetSpec {
            delay: raw.target.delay.seconds()?,
            amplitude: raw.target.amplitude,
            reflectivity,
            angle_taper,
        };
        // Validate target numbers through the Scatterer contract.
        Scatterer::new(target.delay, Complex64::new(target.amplitude, 0.0))?;

        let clutter = raw
            .clutter
            .iter()
            .map(|c| Scatterer::new(c.delay.seconds()?, Complex64::new(c.amplitude, 0.0)))
            .collect::<Result<Vec<_>, _>>()?;

        let noise_floor_db = raw.noise.map(|n| n.floor_db);
        if let Some(db) = noise_floor_db {
            if !db.is_finite() {
                return Err(SynthError::Script("noise.floor_db must be finite".into()));
            }
        }

        Ok(Self {
            seed: raw.seed.unwrap_or(0),
            grid,
            angles,
            target,
            clutter,
            noise_floor_db,
        })
    }

    /// Built-in demonstration campaign: a broadband sloped-reflectivity
    /// target at 28 ns behind a 6–10 ns clutter cluster, 90 angles with a
    /// cosine taper, −60 dB noise, 10–40 GHz in 1601 points.
    pub fn demo() -> Self {
        Self::from_toml(DEMO_SCRIPT).expect("built-in demo script parses")
    }

    /// The demo campaign as script text (the schema reference).
    pub fn demo_toml() -> &'static str {
        DEMO_SCRIPT
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn grid(&self) -> Option<&FrequencyGrid> {
        self.grid.as_ref()
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn target(&self) -> &TargetSpec {
        &self.target
    }

    pub fn clutter(&self) -> &[Scatterer] {
        &self.clutter
    }

    pub fn noise_floor_db(&self) -> Option<f64> {
        self.noise_floor_db
    }

    /// Build the (DUT, reference) scene pair for one angle.
    pub fn scenes_at(&self, angle_deg: f64) -> Result<(Scene, Scene), SynthError> {
        let t = &self.target;
        let dut_target = Scatterer::with_reflectivity(
            t.delay,
            Complex64::new(t.amplitude * t.angle_taper.factor(angle_deg), 0.0),
            t.reflectivity,
        )?;
        let ref_target = Scatterer::new(t.delay, Complex64::new(1.0, 0.0))?;

        let mut dut_scatterers = vec![dut_target];
        dut_scatterers.extend_from_slice(&self.clutter);
        let mut ref_scatterers = vec![ref_target];
        ref_scatterers.extend_from_slice(&self.clutter);

        let dut = Scene::new(
            dut_scatterers,
            self.noise_floor_db,
            derive_seed(self.seed, angle_deg, 0),
        )?;
        let reference = Scene::new(
            ref_scatterers,
            self.noise_floor_db,
            derive_seed(self.seed, angle_deg, 1),
        )?;
        Ok((dut, reference))
    }
}

const DEMO_SCRIPT: &str = r#"# Demonstration campaign: sloped-reflectivity target behind near-in clutter.
seed = 7

[grid]
f_start = "10 GHz"
f_stop = "40 GHz"
n_points = 1601

[angles]
start = 1
stop = 90
step = 1

[target]
delay = "28 ns"
amplitude = 1.0
reflectivity = { kind = "ramp_db", start_db = -3, stop_db = -20 }
angle_taper = "cos"

[[clutter]]
delay = "6 ns"
amplitude = 0.3

[[clutter]]
delay = "8 ns"
amplitude = 0.5

[[clutter]]
delay = "10 ns"
amplitude = 0.2

[noise]
floor_db = -60
"#;
