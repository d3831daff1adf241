//! TOML configuration files: sweep manifests, synthetic-dataset configs,
//! and design configs. All formats carry a `schema_version` field
//! (currently 1).

use crate::cpw::{CpwGeometry, FilmProperties};
use crate::error::{Error, Result};
use crate::loss::PowerBudget;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepKind {
    Power,
    Temperature,
}

/// One measured or synthetic trace in a sweep.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub path: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vna_power_dbm: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub temperature_k: Option<f64>,
}

/// Optional quasiparticle context for temperature sweeps.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct QuasiparticleSection {
    pub critical_temperature_k: f64,
}

/// Optional TLS saturation context (n_c, β) from a prior power fit.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SaturationSection {
    pub n_c: f64,
    pub beta: f64,
}

/// A sweep manifest: the traces of one resonator plus the shared power
/// budget.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepManifest {
    pub schema_version: u32,
    pub resonator_label: String,
    pub kind: SweepKind,
    pub budget: PowerBudget,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quasiparticle: Option<QuasiparticleSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tls_saturation: Option<SaturationSection>,
    pub entries: Vec<ManifestEntry>,
}

impl SweepManifest {
    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Config(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        if self.entries.is_empty() {
            return Err(Error::Config("manifest has no entries".into()));
        }
        self.budget
            .validate()
            .map_err(|e| Error::Config(e.to_string()))?;
        for e in &self.entries {
            match self.kind {
                SweepKind::Power => {
                    if e.vna_power_dbm.is_none() {
                        return Err(Error::Config(format!(
                            "power-sweep entry {:?} lacks vna_power_dbm",
                            e.path
                        )));
                    }
                }
                SweepKind::Temperature => {
                    if e.temperature_k.is_none() {
                        return Err(Error::Config(format!(
                            "temperature-sweep entry {:?} lacks temperature_k",
                            e.path
                        )));
                    }
                }
            }
        }
        if self.kind == SweepKind::Temperature && self.quasiparticle.is_none() {
            return Err(Error::Config(
                "temperature sweeps need a [quasiparticle] section with \
                 critical_temperature_k"
                    .into(),
            ));
        }
        Ok(())
    }

    /// Entry paths resolved against the manifest location.
    pub fn resolved_paths(&self, manifest_path: &Path) -> Vec<PathBuf> {
        let base = manifest_path.parent().unwrap_or_else(|| Path::new("."));
        self.entries.iter().map(|e| base.join(&e.path)).collect()
    }
}

pub fn load_manifest(path: &Path) -> Result<SweepManifest> {
    let text = std::fs::read_to_string(path)?;
    let manifest: SweepManifest =
        toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    manifest.validate()?;
    for p in manifest.resolved_paths(path) {
        if !p.exists() {
            return Err(Error::Config(format!(
                "referenced trace {} does not exist",
                p.display()
            )));
        }
    }
    Ok(manifest)
}

/// Notch baseline for the dataset generator (resonance parameters minus
/// Q_l, which follows from the loss truth per point).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct NotchSection {
    pub f_r: f64,
    pub q_c_mag: f64,
    #[serde(default)]
    pub phi: f64,
    #[serde(default = "one")]
    pub amplitude: f64,
    #[serde(default)]
    pub phase: f64,
    #[serde(default)]
    pub delay: f64,
}

fn one() -> f64 {
    1.0
}

/// TLS truth parameters for the generator.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TlsSection {
    pub delta0_tls: f64,
    pub n_c: f64,
    pub beta: f64,
    #[serde(default)]
    pub delta_other: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct QpTruthSection {
    pub critical_temperature_k: f64,
    pub kinetic_fraction: f64,
}

/// Schedule of drive powers (power sweep) or temperatures (temperature
/// sweep).
#[derive(Debug, Clone, Serialize, Deserialize, Default)]
pub struct ScheduleSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub powers_dbm: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub temperature_k: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub temperatures_k: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub power_dbm: Option<f64>,
}

/// Configuration for the deterministic synthetic-dataset generator.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SynthConfig {
    pub schema_version: u32,
    pub kind: SweepKind,
    pub label: String,
    pub seed: u64,
    #[serde(default)]
    pub noise_sigma: f64,
    #[serde(default = "default_points")]
    pub n_points: usize,
    #[serde(default = "default_span")]
    pub span_linewidths: f64,
    pub notch: NotchSection,
    pub tls: TlsSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quasiparticle: Option<QpTruthSection>,
    pub budget: PowerBudget,
    pub schedule: ScheduleSection,
}

fn default_points() -> usize {
    1601
}

fn default_span() -> f64 {
    10.0
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Config(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        if self.n_points < 16 {
            return Err(Error::Config(format!(
                "n_points = {} too small",
                self.n_points
            )));
        }
        if !(self.noise_sigma >= 0.0) {
            return Err(Error::Config(format!(
                "noise_sigma = {} invalid",
                self.noise_sigma
            )));
        }
        if !(self.span_linewidths > 0.0) {
            return Err(Error::Config("span_linewidths must be positive".into()));
        }
        match self.kind {
            SweepKind::Power => {
                let powers = self
                    .schedule
                    .powers_dbm
                    .as_ref()
                    .ok_or_else(|| Error::Config("power schedule needs powers_dbm".into()))?;
                if powers.is_empty() {
                    return Err(Error::Config("powers_dbm is empty".into()));
                }
                if self.schedule.temperature_k.is_none() {
                    return Err(Error::Config("power schedule needs temperature_k".into()));
                }
            }
            SweepKind::Temperature => {
                let temps = self.schedule.temperatures_k.as_ref().ok_or_else(|| {
                    Error::Config("temperature schedule needs temperatures_k".into())
                })?;
                if temps.is_empty() {
                    return Err(Error::Config("temperatures_k is empty".into()));
                }
                if temps.iter().any(|&t| !(t > 0.0)) {
                    return Err(Error::Config("temperatures must be positive".into()));
                }
                if self.schedule.power_dbm.is_none() {
                    return Err(Error::Config("temperature schedule needs power_dbm".into()));
                }
                if self.quasiparticle.is_none() {
                    return Err(Error::Config(
                        "temperature schedule needs a [quasiparticle] truth section".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

pub fn load_synth_config(path: &Path) -> Result<SynthConfig> {
    let text = std::fs::read_to_string(path)?;
    let config: SynthConfig =
        toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    config.validate()?;
    Ok(config)
}

/// Geometry/film inputs for the design report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DesignConfig {
    pub schema_version: u32,
    pub geometry: GeometrySection,
    pub film: FilmSection,
    #[serde(default = "default_harmonics")]
    pub harmonics: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measured_f0_hz: Option<f64>,
}

fn default_harmonics() -> u32 {
    3
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GeometrySection {
    pub center_width_m: f64,
    pub gap_m: f64,
    pub length_m: f64,
    #[serde(default = "default_eps_r")]
    pub substrate_rel_permittivity: f64,
}

fn default_eps_r() -> f64 {
    11.9
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct FilmSection {
    pub thickness_m: f64,
    pub critical_temperature_k: f64,
    pub sheet_resistance_ohm_sq: f64,
    #[serde(default = "default_lambda0_m")]
    pub bulk_penetration_depth_m: f64,
}

fn default_lambda0_m() -> f64 {
    150e-9
}

impl DesignConfig {
    pub fn geometry(&self) -> Result<CpwGeometry> {
        CpwGeometry::new(
            self.geometry.center_width_m,
            self.geometry.gap_m,
            self.geometry.length_m,
            self.geometry.substrate_rel_permittivity,
        )
    }

    pub fn film(&self) -> Result<FilmProperties> {
        FilmProperties::new(
            self.film.thickness_m,
            self.film.critical_temperature_k,
            self.film.sheet_resistance_ohm_sq,
        )?
        .with_bulk_penetration_depth(self.film.bulk_penetration_depth_m)
    }
}

pub fn load_design_config(path: &Path) -> Result<DesignConfig> {
    let text = std::fs::read_to_string(path)?;
    let config: DesignConfig =
        toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    if config.schema_version != SCHEMA_VERSION {
        return Err(Error::Config(format!(
            "unsupported schema_version {} (expected {SCHEMA_VERSION})",
            config.schema_version
        )));
    }
    Ok(config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn manifest_round_trip_and_validation() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(
            dir.path().join("t0.csv"),
            "freq_hz,s21_re,s21_im\n1e9,1,0\n",
        )
        .unwrap();
        let manifest_text = r#"
schema_version = 1
resonator_label = "r1"
kind = "power"

[budget]
vna_power_dbm = 0.0
fridge_attenuation_db = 60.0
room_temp_attenuation_db = 20.0

[[entries]]
path = "t0.csv"
vna_power_dbm = -30.0
temperature_k = 0.077
"#;
        let path = dir.path().join("manifest.toml");
        std::fs::write(&path, manifest_text).unwrap();
        let m = load_manifest(&path).unwrap();
        assert_eq!(m.entries.len(), 1);
        assert_eq!(m.kind, SweepKind::Power);
        assert_eq!(m.budget.total_attenuation_db(), 80.0);

        // missing trace file
        let orphan = manifest_text.replace("t0.csv", "missing.csv");
        std::fs::write(&path, orphan).unwrap();
        assert!(matches!(load_manifest(&path), Err(Error::Config(_))));

        // wrong schema version
        let wrong = manifest_text.replace("schema_version = 1", "schema_version = 7");
        std::fs::write(&path, wrong).unwrap();
        assert!(matches!(load_manifest(&path), Err(Error::Config(_))));
    }

    #[test]
    fn temperature_manifest_requires_quasiparticle_section() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(
            dir.path().join("t0.csv"),
            "freq_hz,s21_re,s21_im\n1e9,1,0\n",
        )
        .unwrap();
        let text = r#"
schema_version = 1
resonator_label = "r1"
kind = "temperature"

[budget]
vna_power_dbm = -40.0
fridge_attenuation_db = 60.0
room_temp_attenuation_db = 20.0

[[entries]]
path = "t0.csv"
temperature_k = 0.077
"#;
        let path = dir.path().join("manifest.toml");
        std::fs::write(&path, text).unwrap();
        assert!(matches!(load_manifest(&path), Err(Error::Config(_))));
        let fixed = format!("{text}\n[quasiparticle]\ncritical_temperature_k = 4.06\n");
        std::fs::write(&path, fixed).unwrap();
        assert!(load_manifest(&path).is_ok());
    }

    #[test]
    fn synth_config_validation() {
        let base = r#"
schema_version = 1
kind = "power"
label = "r1"
seed = 42
noise_sigma = 0.001

[notch]
f_r = 3.6539e9
q_c_mag = 4897.0

[tls]
delta0_tls = 6.11e-6
n_c = 0.21
beta = 0.44
delta_other = 8.3e-7

[budget]
vna_power_dbm = 0.0
fridge_attenuation_db = 60.0
room_temp_attenuation_db = 20.0

[schedule]
powers_dbm = [-50.0, -40.0, -30.0]
temperature_k = 0.077
"#;
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(base.as_bytes()).unwrap();
        let cfg = load_synth_config(f.path()).unwrap();
        assert_eq!(cfg.n_points, 1601); // default
        assert_eq!(cfg.notch.amplitude, 1.0); // default

        let broken = base.replace("powers_dbm = [-50.0, -40.0, -30.0]\n", "");
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(broken.as_bytes()).unwrap();
        assert!(matches!(load_synth_config(f.path()), Err(Error::Config(_))));
    }

    #[test]
    fn design_config_defaults() {
        let text = r#"
schema_version = 1

[geometry]
center_width_m = 4e-6
gap_m = 2e-6
length_m = 8e-3

[film]
thickness_m = 40e-9
critical_temperature_k = 4.06
sheet_resistance_ohm_sq = 1.764
"#;
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(text.as_bytes()).unwrap();
        let cfg = load_design_config(f.path()).unwrap();
        assert_eq!(cfg.geometry.substrate_rel_permittivity, 11.9);
        assert_eq!(cfg.film.bulk_penetration_depth_m, 150e-9);
        assert_eq!(cfg.harmonics, 3);
        assert!(cfg.geometry().is_ok());
        assert!(cfg.film().is_ok());
    }
}
