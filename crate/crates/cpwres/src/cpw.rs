//! Forward physics of a coplanar-waveguide resonator and the inverse
//! extraction of kinetic inductance from a measured resonance.
//!
//! Geometry → transmission-line parameters via the zero-thickness,
//! infinite-substrate conformal-mapping formulas; film → kinetic inductance
//! per square and effective penetration depth; both → resonance frequencies
//! of a quarter-wave resonator.

use crate::constants::{BCS_GAP_RATIO, C0, EPS0, HBAR, K_B, MU0};
use crate::error::{Error, Result};
use crate::special::{coth, ellip_k};
use serde::{Deserialize, Serialize};

/// Resonator topology. Only quarter-wave (shorted) resonators are modeled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ResonatorType {
    #[default]
    QuarterWave,
}

/// In-plane CPW geometry and substrate.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CpwGeometry {
    /// Center conductor width w (m).
    pub center_width: f64,
    /// Gap s between the center conductor and each ground plane (m).
    pub gap: f64,
    /// Physical resonator length l (m).
    pub resonator_length: f64,
    /// Relative permittivity ε_r of the substrate.
    pub substrate_rel_permittivity: f64,
    #[serde(default)]
    pub resonator_type: ResonatorType,
}

impl CpwGeometry {
    pub fn new(center_width: f64, gap: f64, resonator_length: f64, eps_r: f64) -> Result<Self> {
        let g = Self {
            center_width,
            gap,
            resonator_length,
            substrate_rel_permittivity: eps_r,
            resonator_type: ResonatorType::QuarterWave,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.center_width > 0.0 && self.gap > 0.0 && self.resonator_length > 0.0) {
            return Err(Error::Domain(format!(
                "CPW dimensions must be positive (w = {}, s = {}, l = {})",
                self.center_width, self.gap, self.resonator_length
            )));
        }
        if !(self.substrate_rel_permittivity >= 1.0) {
            return Err(Error::Domain(format!(
                "substrate permittivity must be >= 1, got {}",
                self.substrate_rel_permittivity
            )));
        }
        let k = self.modulus();
        if !(k > 0.0 && k < 1.0) {
            return Err(Error::Domain(format!(
                "conformal-mapping modulus k = {k} not in (0,1)"
            )));
        }
        Ok(())
    }

    /// Conformal-mapping modulus k = w/(w + 2s).
    pub fn modulus(&self) -> f64 {
        self.center_width / (self.center_width + 2.0 * self.gap)
    }

    /// Effective permittivity ε_eff = (ε_r + 1)/2.
    pub fn effective_permittivity(&self) -> f64 {
        0.5 * (self.substrate_rel_permittivity + 1.0)
    }
}

/// Superconducting film properties.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct FilmProperties {
    /// Film thickness d (m).
    pub thickness: f64,
    /// Critical temperature T_c (K).
    pub critical_temperature: f64,
    /// Normal-state sheet resistance R_s (Ω/sq).
    pub sheet_resistance: f64,
    /// Bulk penetration depth λ₀ (m); 150 nm is the tantalum default.
    #[serde(default = "default_lambda0")]
    pub bulk_penetration_depth: f64,
}

fn default_lambda0() -> f64 {
    150e-9
}

impl FilmProperties {
    pub fn new(thickness: f64, critical_temperature: f64, sheet_resistance: f64) -> Result<Self> {
        let f = Self {
            thickness,
            critical_temperature,
            sheet_resistance,
            bulk_penetration_depth: default_lambda0(),
        };
        f.validate()?;
        Ok(f)
    }

    pub fn with_bulk_penetration_depth(mut self, lambda0: f64) -> Result<Self> {
        self.bulk_penetration_depth = lambda0;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.thickness > 0.0
            && self.critical_temperature > 0.0
            && self.sheet_resistance >= 0.0
            && self.bulk_penetration_depth > 0.0)
        {
            return Err(Error::Domain(format!(
                "film properties out of range (d = {}, Tc = {}, Rs = {}, lambda0 = {})",
                self.thickness,
                self.critical_temperature,
                self.sheet_resistance,
                self.bulk_penetration_depth
            )));
        }
        Ok(())
    }

    /// Zero-temperature gap Δ₀ = 1.76·k_B·T_c (J).
    pub fn gap_energy(&self) -> f64 {
        BCS_GAP_RATIO * K_B * self.critical_temperature
    }
}

/// Per-length transmission-line parameters of the CPW.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct LineParameters {
    /// Geometric (magnetic) inductance per length L_m (H/m).
    pub l_geometric_per_length: f64,
    /// Capacitance per length C_l (F/m).
    pub c_per_length: f64,
    /// Kinetic inductance per length L_k (H/m).
    pub l_kinetic_per_length: f64,
    /// Characteristic impedance Z₀ = √(L_m/C_l) (Ω), geometric.
    pub z0: f64,
    /// Phase velocity 1/√(C_l·(L_m + L_k)) (m/s).
    pub v_ph: f64,
    /// Kinetic-inductance fraction L_k/(L_m + L_k); the ratio both
    /// quasiparticle loss forms and the frequency-shift model scale with.
    pub kinetic_fraction: f64,
}

impl LineParameters {
    /// Total inductance per length (H/m).
    pub fn l_total_per_length(&self) -> f64 {
        self.l_geometric_per_length + self.l_kinetic_per_length
    }

    /// Fundamental quarter-wave frequency for a resonator of length l:
    /// f₀ = v_ph/(4l).
    pub fn fundamental_frequency(&self, resonator_length: f64) -> f64 {
        self.v_ph / (4.0 * resonator_length)
    }
}

/// Conformal-mapping line parameters of the bare geometry (kinetic part
/// zero):
///
/// k = w/(w+2s), k' = √(1−k²),
/// C_l = 4·ε₀·ε_eff·K(k)/K(k'),  L_m = (μ₀/4)·K(k')/K(k),
/// Z₀ = √(L_m/C_l),  ε_eff = (ε_r+1)/2.
pub fn line_parameters_geometric(geom: &CpwGeometry) -> Result<LineParameters> {
    geom.validate()?;
    let k = geom.modulus();
    let kp = ((1.0 - k) * (1.0 + k)).sqrt();
    let ratio = ellip_k(k)? / ellip_k(kp)?;
    let c_l = 4.0 * EPS0 * geom.effective_permittivity() * ratio;
    let l_m = MU0 / 4.0 / ratio;
    let v_ph = 1.0 / (l_m * c_l).sqrt();
    Ok(LineParameters {
        l_geometric_per_length: l_m,
        c_per_length: c_l,
        l_kinetic_per_length: 0.0,
        z0: (l_m / c_l).sqrt(),
        v_ph,
        kinetic_fraction: 0.0,
    })
}

/// Kinetic inductance per square of the film, L_K = ħ·R_s/(π·Δ₀), with the
/// weak-coupling gap Δ₀ = 1.76·k_B·T_c. Returns H/sq.
pub fn kinetic_inductance_per_square(film: &FilmProperties) -> Result<f64> {
    film.validate()?;
    Ok(HBAR * film.sheet_resistance / (std::f64::consts::PI * film.gap_energy()))
}

/// Sheet resistance that reproduces a target kinetic inductance per square;
/// the documented inversion of `kinetic_inductance_per_square`.
pub fn sheet_resistance_for_kinetic_inductance(
    target_lk_per_sq: f64,
    critical_temperature: f64,
) -> f64 {
    target_lk_per_sq * std::f64::consts::PI * BCS_GAP_RATIO * K_B * critical_temperature / HBAR
}

/// Effective penetration depth of a thin film, λ_eff = λ₀·coth(d/λ₀).
/// Strictly decreasing in d; → λ₀ as d → ∞.
pub fn effective_penetration_depth(film: &FilmProperties) -> Result<f64> {
    film.validate()?;
    let lambda0 = film.bulk_penetration_depth;
    Ok(lambda0 * coth(film.thickness / lambda0)?)
}

/// Fundamental quarter-wave frequency from geometry alone:
/// f₀ = c/(4·l·√ε_eff).
pub fn fundamental_frequency(geom: &CpwGeometry) -> Result<f64> {
    geom.validate()?;
    Ok(C0 / (4.0 * geom.resonator_length * geom.effective_permittivity().sqrt()))
}

/// n-th harmonic of the quarter-wave resonator: (2n+1)·f₀, n ≥ 0.
pub fn harmonic_frequency(geom: &CpwGeometry, n: u32) -> Result<f64> {
    Ok((2.0 * n as f64 + 1.0) * fundamental_frequency(geom)?)
}

/// Inverse route from a measured fundamental frequency to the kinetic
/// inductance per length:
///
/// v_ph = ω/k_n with k_n = π/2l gives v_ph = 4·l·f₀; then
/// L_total = 1/(C_l·v_ph²) and L_k = L_total − L_m.
///
/// Errors with `NegativeKineticInductance` when the measured frequency
/// exceeds the geometric-only prediction.
pub fn extract_kinetic_inductance_per_length(
    geom: &CpwGeometry,
    measured_f0: f64,
) -> Result<LineParameters> {
    if !(measured_f0 > 0.0) || !measured_f0.is_finite() {
        return Err(Error::Domain(format!(
            "measured f0 must be positive, got {measured_f0}"
        )));
    }
    let base = line_parameters_geometric(geom)?;
    let geometric_f0 = base.fundamental_frequency(geom.resonator_length);
    if measured_f0 > geometric_f0 {
        return Err(Error::NegativeKineticInductance {
            measured_f0,
            geometric_f0,
        });
    }
    let v_ph = 4.0 * geom.resonator_length * measured_f0;
    let l_total = 1.0 / (base.c_per_length * v_ph * v_ph);
    let l_k = l_total - base.l_geometric_per_length;
    Ok(LineParameters {
        l_kinetic_per_length: l_k,
        v_ph,
        kinetic_fraction: l_k / l_total,
        ..base
    })
}
