//! Campaign manifests: which DUT/reference sweep files belong to which
//! observation angle.
//!
//! Text format, one row per angle: `angle_deg<TAB>dut_path<TAB>ref_path`,
//! `#` starts a comment. A directory layout `angle_<deg>/dut.s1p` +
//! `angle_<deg>/ref.s1p` can be discovered without a manifest file.

use std::path::{Path, PathBuf};

use super::{read_sweep_file, IngestError};
use crate::sweep::FrequencySweep;

const MIN_ANGLE_DEG: f64 = 1.0;
const MAX_ANGLE_DEG: f64 = 90.0;

#[derive(Debug, Clone, PartialEq)]
pub struct ManifestEntry {
    pub angle_deg: f64,
    pub dut_path: PathBuf,
    pub ref_path: PathBuf,
}

impl ManifestEntry {
    /// Load the DUT and reference sweeps for this angle.
    pub fn load_pair(&self) -> Result<(FrequencySweep, FrequencySweep), IngestError> {
        Ok((read_sweep_file(&self.dut_path)?, read_sweep_file(&self.ref_path)?))
    }
}

/// Angle-sorted collection of per-angle sweep file pairs. Angles are unique
/// and confined to [1°, 90°]; a head-on 0° cut cannot be measured and is
/// rejected.
#[derive(Debug, Clone, PartialEq)]
pub struct CampaignManifest {
    entries: Vec<ManifestEntry>,
}

impl CampaignManifest {
    pub fn new(mut entries: Vec<ManifestEntry>) -> Result<Self, IngestError> {
        for e in &entries {
            if !e.angle_deg.is_finite()
                || e.angle_deg < MIN_ANGLE_DEG
                || e.angle_deg > MAX_ANGLE_DEG
            {
                return Err(IngestError::AngleOutOfRange(e.angle_deg));
            }
        }
        entries.sort_by(|a, b| a.angle_deg.partial_cmp(&b.angle_deg).unwrap());
        for pair in entries.windows(2) {
            if pair[0].angle_deg == pair[1].angle_deg {
                return Err(IngestError::DuplicateAngle(pair[0].angle_deg));
            }
        }
        Ok(Self { entries })
    }

    pub fn parse(text: &str) -> Result<Self, IngestError> {
        let mut entries = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let body = raw.split('#').next().unwrap_or("").trim_end();
            if body.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = body.split('\t').collect();
            if fields.len() != 3 {
                return Err(IngestError::BadManifestRow {
                    line,
                    detail: format!(
                        "expected angle<TAB>dut_path<TAB>ref_path, found {} field(s)",
                        fields.len()
                    ),
                });
            }
            let angle_deg: f64 = fields[0].trim().parse().map_err(|_| {
                IngestError::BadManifestRow {
                    line,
                    detail: format!("bad angle `{}`", fields[0].trim()),
                }
            })?;
            entries.push(ManifestEntry {
                angle_deg,
                dut_path: PathBuf::from(fields[1].trim()),
                ref_path: PathBuf::from(fields[2].trim()),
            });
        }
        Self::new(entries)
    }

    /// Read a manifest file; relative sweep paths are resolved against the
    /// manifest's own directory.
    pub fn load(path: &Path) -> Result<Self, IngestError> {
        let text = std::fs::read_to_string(path).map_err(|e| IngestError::io(path, e))?;
        let mut manifest = Self::parse(&text)?;
        if let Some(parent) = path.parent() {
            for e in &mut manifest.entries {
                if e.dut_path.is_relative() {
                    e.dut_path = parent.join(&e.dut_path);
                }
                if e.ref_path.is_relative() {
                    e.ref_path = parent.join(&e.ref_path);
                }
            }
        }
        Ok(manifest)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("# angle_deg\tdut_path\tref_path\n");
        for e in &self.entries {
            out.push_str(&format!(
                "{}\t{}\t{}\n",
                e.angle_deg,
                e.dut_path.display(),
                e.ref_path.display()
            ));
        }
        out
    }

    pub fn save(&self, path: &Path) -> Result<(), IngestError> {
        std::fs::write(path, self.to_text()).map_err(|e| IngestError::io(path, e))
    }

    /// Scan a directory for the `angle_<deg>/dut.s1p` + `angle_<deg>/ref.s1p`
    /// convention.
    pub fn discover(dir: &Path) -> Result<Self, IngestError> {
        let mut entries = Vec::new();
        let listing = std::fs::read_dir(dir).map_err(|e| IngestError::io(dir, e))?;
        for item in listing {
            let item = item.map_err(|e| IngestError::io(dir, e))?;
            let name = item.file_name();
            let Some(deg_text) = name.to_str().and_then(|n| n.strip_prefix("angle_")) else {
                continue;
            };
            let Ok(angle_deg) = deg_text.parse::<f64>() else {
                continue;
            };
            let dut_path = item.path().join("dut.s1p");
            let ref_path = item.path().join("ref.s1p");
            for p in [&dut_path, &ref_path] {
                if !p.is_file() {
                    return Err(IngestError::IncompleteAngle {
                        angle_deg,
                        missing: p.clone(),
                    });
                }
            }
            entries.push(ManifestEntry { angle_deg, dut_path, ref_path });
        }
        Self::new(entries)
    }

    pub fn entries(&self) -> &[ManifestEntry] {
        &self.entries
    }

    pub fn angles(&self) -> impl Iterator<Item = f64> + '_ {
        self.entries.iter().map(|e| e.angle_deg)
    }

    pub fn entry_for(&self, angle_deg: f64) -> Option<&ManifestEntry> {
        self.entries.iter().find(|e| (e.angle_deg - angle_deg).abs() < 1e-9)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}
