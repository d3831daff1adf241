//! Machine-readable analysis reports and the sweep orchestration behind
//! them.
//!
//! Reports serialize to JSON with a fixed field order; all numeric fields
//! are finite (unavailable uncertainties become `null`). Re-running on
//! identical inputs reproduces the numeric payload byte for byte — only
//! `provenance.timestamp` differs.

use crate::cpw::{
    effective_penetration_depth, extract_kinetic_inductance_per_length, fundamental_frequency,
    harmonic_frequency, kinetic_inductance_per_square, line_parameters_geometric, CpwGeometry,
    FilmProperties,
};
use crate::error::{Error, Result};
use crate::fit::{fit_notch, NotchFitResult};
use crate::io::touchstone::parse_touchstone;
use crate::io::trace_csv::{parse_csv_trace, ColumnSpec};
use crate::loss::{mean_photon_number, QuasiparticleModel, TlsFitParameters};
use crate::manifest::{DesignConfig, SweepKind, SweepManifest};
use crate::notch::{FrequencySweep, SweepMetadata};
use crate::sweeps::{fit_temperature_sweep, fit_tls_power_sweep, SweepPoint, TlsUncertainties};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::io::Write as _;
use std::path::{Path, PathBuf};

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Provenance {
    pub tool_version: String,
    pub inputs: Vec<InputDigest>,
    pub timestamp: String,
}

impl Provenance {
    pub fn collect(paths: &[PathBuf]) -> Result<Self> {
        let mut inputs = Vec::with_capacity(paths.len());
        for p in paths {
            inputs.push(InputDigest {
                path: p.display().to_string(),
                sha256: sha256_hex(p)?,
            });
        }
        Ok(Self {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            inputs,
            timestamp: chrono::Utc::now().to_rfc3339(),
        })
    }
}

pub fn sha256_hex(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path)?;
    let mut hasher = Sha256::new();
    hasher.update(&bytes);
    Ok(hex_string(&hasher.finalize()))
}

fn hex_string(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// One fitted trace inside a report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TraceFitRecord {
    pub source: String,
    pub vna_power_dbm: Option<f64>,
    pub temperature_k: Option<f64>,
    pub n_ph: Option<f64>,
    pub f_r_hz: f64,
    pub q_l: f64,
    pub q_c_mag: f64,
    pub phi_rad: f64,
    pub amplitude: f64,
    pub phase_rad: f64,
    pub delay_s: f64,
    pub q_i: Option<f64>,
    pub sigma_f_r_hz: Option<f64>,
    pub sigma_q_l: Option<f64>,
    pub sigma_q_c_mag: Option<f64>,
    pub sigma_phi_rad: Option<f64>,
    pub sigma_q_i: Option<f64>,
    pub residual_rms: f64,
    pub n_points: usize,
    pub converged: bool,
}

impl TraceFitRecord {
    pub fn from_fit(source: &str, fit: &NotchFitResult, n_ph: Option<f64>) -> Self {
        Self {
            source: source.to_string(),
            vna_power_dbm: None,
            temperature_k: None,
            n_ph,
            f_r_hz: fit.params.f_r,
            q_l: fit.params.q_l,
            q_c_mag: fit.params.q_c_mag,
            phi_rad: fit.params.phi,
            amplitude: fit.params.amplitude,
            phase_rad: fit.params.phase,
            delay_s: fit.params.delay,
            q_i: finite(fit.q_i),
            sigma_f_r_hz: finite(fit.uncertainties.f_r),
            sigma_q_l: finite(fit.uncertainties.q_l),
            sigma_q_c_mag: finite(fit.uncertainties.q_c_mag),
            sigma_phi_rad: finite(fit.uncertainties.phi),
            sigma_q_i: finite(fit.uncertainties.q_i),
            residual_rms: fit.quality.residual_rms,
            n_points: fit.quality.n_points,
            converged: fit.quality.converged,
        }
    }
}

/// One (abscissa, Q_i, σ, model) row of a sweep analysis.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepRow {
    pub x: f64,
    pub q_i: f64,
    pub sigma: Option<f64>,
    pub model_q_i: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TlsParamBlock {
    pub delta0_tls: f64,
    pub n_c: f64,
    pub beta: f64,
    pub delta_other: f64,
    pub sigma_delta0_tls: Option<f64>,
    pub sigma_n_c: Option<f64>,
    pub sigma_beta: Option<f64>,
    pub sigma_delta_other: Option<f64>,
}

impl TlsParamBlock {
    fn new(p: &TlsFitParameters, u: &TlsUncertainties) -> Self {
        Self {
            delta0_tls: p.delta0_tls,
            n_c: p.n_c,
            beta: p.beta,
            delta_other: p.delta_other,
            sigma_delta0_tls: finite(u.delta0_tls),
            sigma_n_c: finite(u.n_c),
            sigma_beta: finite(u.beta),
            sigma_delta_other: finite(u.delta_other),
        }
    }
}

/// Power-sweep analysis: Q_i versus photon number with the fitted TLS
/// model.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PowerSweepAnalysis {
    pub rows: Vec<SweepRow>,
    pub temperature_k: f64,
    pub f_r_hz: f64,
    pub tls: TlsParamBlock,
    pub chi2_reduced: f64,
    pub converged: bool,
}

/// Temperature-sweep analysis: Q_i versus temperature with the joint TLS +
/// quasiparticle decomposition.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TemperatureSweepAnalysis {
    pub rows: Vec<SweepRow>,
    pub n_ph: f64,
    pub f_r_hz: f64,
    pub tls: TlsParamBlock,
    pub kinetic_fraction: f64,
    pub sigma_kinetic_fraction: Option<f64>,
    pub chi2_reduced: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TraceFailure {
    pub source: String,
    pub error: String,
}

/// Full analysis report: per-trace fits plus the sweep-level analysis.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub schema_version: u32,
    pub resonator_label: String,
    pub traces: Vec<TraceFitRecord>,
    pub power_sweep: Option<PowerSweepAnalysis>,
    pub temperature_sweep: Option<TemperatureSweepAnalysis>,
    pub failures: Vec<TraceFailure>,
    pub provenance: Provenance,
}

impl AnalysisReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Plot-ready CSV of the sweep rows (columns: x, q_i, sigma,
    /// model_q_i).
    pub fn plot_csv(&self) -> Option<String> {
        let (rows, xname) = match (&self.power_sweep, &self.temperature_sweep) {
            (Some(p), _) => (&p.rows, "n_ph"),
            (_, Some(t)) => (&t.rows, "temperature_k"),
            _ => return None,
        };
        let mut out = format!("{xname},q_i,sigma_q_i,model_q_i\n");
        for r in rows {
            let sigma = r.sigma.map(|s| s.to_string()).unwrap_or_default();
            out.push_str(&format!("{},{},{},{}\n", r.x, r.q_i, sigma, r.model_q_i));
        }
        Some(out)
    }
}

fn load_trace(path: &Path) -> Result<FrequencySweep> {
    match path
        .extension()
        .and_then(|e| e.to_str())
        .map(|e| e.to_ascii_lowercase())
    {
        Some(ext) if ext == "s2p" => parse_touchstone(path)?.s21_sweep(SweepMetadata::default()),
        Some(ext) if ext == "s1p" || ext == "s3p" || ext == "s4p" => {
            Err(Error::UnsupportedFormat(format!(
                "{}: only two-port .s2p Touchstone files are supported",
                path.display()
            )))
        }
        _ => parse_csv_trace(path, ColumnSpec::Auto),
    }
}

/// Fit a single trace file (CSV or Touchstone) and wrap it in a report.
pub fn fit_trace_report(path: &Path) -> Result<(AnalysisReport, NotchFitResult)> {
    let sweep = load_trace(path)?;
    let fit = fit_notch(&sweep)?;
    let mut record = TraceFitRecord::from_fit(&path.display().to_string(), &fit, None);
    record.vna_power_dbm = sweep.meta.vna_power_dbm;
    record.temperature_k = sweep.meta.temperature_k;
    let report = AnalysisReport {
        schema_version: crate::manifest::SCHEMA_VERSION,
        resonator_label: sweep.meta.label.clone(),
        traces: vec![record],
        power_sweep: None,
        temperature_sweep: None,
        failures: Vec::new(),
        provenance: Provenance::collect(&[path.to_path_buf()])?,
    };
    Ok((report, fit))
}

struct FittedTrace {
    source: String,
    vna_power_dbm: Option<f64>,
    temperature_k: Option<f64>,
    fit: NotchFitResult,
    n_ph: Option<f64>,
}

/// Fit every manifest entry in parallel; results come back in manifest
/// order with failures collected per trace. Aborts only when more than
/// half of the traces fail.
fn fit_all_traces(
    manifest: &SweepManifest,
    manifest_path: &Path,
) -> Result<(Vec<FittedTrace>, Vec<TraceFailure>)> {
    let paths = manifest.resolved_paths(manifest_path);
    let outcomes: Vec<(usize, std::result::Result<FittedTrace, TraceFailure>)> = paths
        .par_iter()
        .enumerate()
        .map(|(i, path)| {
            let entry = &manifest.entries[i];
            let source = entry.path.clone();
            let result = (|| -> Result<FittedTrace> {
                let sweep = load_trace(path)?;
                let fit = fit_notch(&sweep)?;
                let budget = match entry.vna_power_dbm {
                    Some(p) => manifest.budget.with_vna_power_dbm(p),
                    None => manifest.budget,
                };
                let n_ph = mean_photon_number(&budget, &fit).ok();
                Ok(FittedTrace {
                    source: source.clone(),
                    vna_power_dbm: entry.vna_power_dbm,
                    temperature_k: entry.temperature_k,
                    fit,
                    n_ph,
                })
            })();
            (
                i,
                result.map_err(|e| TraceFailure {
                    source,
                    error: e.to_string(),
                }),
            )
        })
        .collect();

    let mut fitted = Vec::new();
    let mut failures = Vec::new();
    // merge in manifest order, never completion order
    let mut ordered = outcomes;
    ordered.sort_by_key(|(i, _)| *i);
    for (_, outcome) in ordered {
        match outcome {
            Ok(t) => fitted.push(t),
            Err(f) => failures.push(f),
        }
    }
    if fitted.len() * 2 < manifest.entries.len() {
        return Err(Error::InsufficientData(format!(
            "{} of {} traces failed to fit",
            failures.len(),
            manifest.entries.len()
        )));
    }
    Ok((fitted, failures))
}

fn median_of(mut values: Vec<f64>) -> f64 {
    values.sort_by(f64::total_cmp);
    values[values.len() / 2]
}

/// Run the power-sweep analysis for a manifest: per-trace notch fits,
/// photon-number calibration, and the TLS power fit.
pub fn run_power_sweep(manifest: &SweepManifest, manifest_path: &Path) -> Result<AnalysisReport> {
    manifest.validate()?;
    if manifest.kind != SweepKind::Power {
        return Err(Error::Config("manifest kind is not \"power\"".into()));
    }
    let (fitted, failures) = fit_all_traces(manifest, manifest_path)?;

    let mut sweep_points: Vec<SweepPoint> = Vec::new();
    for t in &fitted {
        if let (Some(n_ph), true) = (t.n_ph, t.fit.q_i.is_finite()) {
            let sigma = if t.fit.uncertainties.q_i.is_finite() {
                t.fit.uncertainties.q_i
            } else {
                0.0
            };
            sweep_points.push(SweepPoint::new(n_ph, t.fit.q_i, sigma));
        }
    }
    sweep_points.sort_by(|a, b| a.x.total_cmp(&b.x));

    let temperatures: Vec<f64> = fitted.iter().filter_map(|t| t.temperature_k).collect();
    if temperatures.is_empty() {
        return Err(Error::Config(
            "power-sweep entries need temperature_k for the TLS thermal factor".into(),
        ));
    }
    let temperature = median_of(temperatures);
    let f_r = median_of(fitted.iter().map(|t| t.fit.params.f_r).collect());

    let power_fit = fit_tls_power_sweep(&sweep_points, temperature, f_r)?;
    let rows: Vec<SweepRow> = sweep_points
        .iter()
        .map(|p| SweepRow {
            x: p.x,
            q_i: p.q_i,
            sigma: (p.sigma > 0.0).then_some(p.sigma),
            model_q_i: 1.0 / power_fit.model_loss(p.x, temperature, f_r),
        })
        .collect();

    let traces = trace_records(&fitted);
    let inputs = report_inputs(manifest, manifest_path);
    Ok(AnalysisReport {
        schema_version: crate::manifest::SCHEMA_VERSION,
        resonator_label: manifest.resonator_label.clone(),
        traces,
        power_sweep: Some(PowerSweepAnalysis {
            rows,
            temperature_k: temperature,
            f_r_hz: f_r,
            tls: TlsParamBlock::new(&power_fit.params, &power_fit.uncertainties),
            chi2_reduced: power_fit.chi2_reduced,
            converged: power_fit.converged,
        }),
        temperature_sweep: None,
        failures,
        provenance: Provenance::collect(&inputs)?,
    })
}

/// Run the temperature-sweep analysis: per-trace fits plus the joint TLS +
/// quasiparticle decomposition of Q_i(T).
pub fn run_temperature_sweep(
    manifest: &SweepManifest,
    manifest_path: &Path,
) -> Result<AnalysisReport> {
    manifest.validate()?;
    if manifest.kind != SweepKind::Temperature {
        return Err(Error::Config("manifest kind is not \"temperature\"".into()));
    }
    let qp_section = manifest.quasiparticle.expect("validated");
    let (fitted, failures) = fit_all_traces(manifest, manifest_path)?;

    let mut sweep_points: Vec<SweepPoint> = fitted
        .iter()
        .filter(|t| t.fit.q_i.is_finite())
        .map(|t| {
            let sigma = if t.fit.uncertainties.q_i.is_finite() {
                t.fit.uncertainties.q_i
            } else {
                0.0
            };
            SweepPoint::new(t.temperature_k.expect("validated"), t.fit.q_i, sigma)
        })
        .collect();
    sweep_points.sort_by(|a, b| a.x.total_cmp(&b.x));

    let photon_numbers: Vec<f64> = fitted.iter().filter_map(|t| t.n_ph).collect();
    let n_ph = if photon_numbers.is_empty() {
        log::warn!("no photon numbers could be calibrated; assuming single-photon drive");
        1.0
    } else {
        median_of(photon_numbers)
    };
    let f_r = median_of(fitted.iter().map(|t| t.fit.params.f_r).collect());
    // gamma enters as a fit parameter; seed the model with zero
    let qp = QuasiparticleModel::from_critical_temperature(qp_section.critical_temperature_k, 0.0)?;
    let saturation = manifest.tls_saturation.map(|s| (s.n_c, s.beta));

    let temp_fit = fit_temperature_sweep(&sweep_points, n_ph, f_r, &qp, saturation)?;
    let rows: Vec<SweepRow> = sweep_points
        .iter()
        .map(|p| SweepRow {
            x: p.x,
            q_i: p.q_i,
            sigma: (p.sigma > 0.0).then_some(p.sigma),
            model_q_i: 1.0 / temp_fit.model_loss(p.x, n_ph, f_r, &qp),
        })
        .collect();

    let traces = trace_records(&fitted);
    let inputs = report_inputs(manifest, manifest_path);
    Ok(AnalysisReport {
        schema_version: crate::manifest::SCHEMA_VERSION,
        resonator_label: manifest.resonator_label.clone(),
        traces,
        power_sweep: None,
        temperature_sweep: Some(TemperatureSweepAnalysis {
            rows,
            n_ph,
            f_r_hz: f_r,
            tls: TlsParamBlock::new(
                &temp_fit.tls,
                &TlsUncertainties {
                    delta0_tls: temp_fit.sigma_delta0,
                    n_c: f64::NAN,
                    beta: f64::NAN,
                    delta_other: temp_fit.sigma_delta_other,
                },
            ),
            kinetic_fraction: temp_fit.kinetic_fraction,
            sigma_kinetic_fraction: finite(temp_fit.sigma_kinetic_fraction),
            chi2_reduced: temp_fit.chi2_reduced,
            converged: temp_fit.converged,
        }),
        failures,
        provenance: Provenance::collect(&inputs)?,
    })
}

fn trace_records(fitted: &[FittedTrace]) -> Vec<TraceFitRecord> {
    fitted
        .iter()
        .map(|t| {
            let mut record = TraceFitRecord::from_fit(&t.source, &t.fit, t.n_ph);
            record.vna_power_dbm = t.vna_power_dbm;
            record.temperature_k = t.temperature_k;
            record
        })
        .collect()
}

fn report_inputs(manifest: &SweepManifest, manifest_path: &Path) -> Vec<PathBuf> {
    let mut inputs = vec![manifest_path.to_path_buf()];
    inputs.extend(manifest.resolved_paths(manifest_path));
    inputs
}

/// Design report: forward CPW physics for a geometry/film pair, plus the
/// kinetic-inductance extraction when a measured f₀ is supplied.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DesignReport {
    pub schema_version: u32,
    pub z0_ohm: f64,
    pub c_per_length_f_per_m: f64,
    pub l_geometric_per_length_h_per_m: f64,
    pub v_ph_m_per_s: f64,
    pub f0_hz: f64,
    pub harmonics_hz: Vec<f64>,
    pub kinetic_inductance_per_sq_h: f64,
    pub effective_penetration_depth_m: f64,
    pub extracted: Option<ExtractedKinetic>,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExtractedKinetic {
    pub measured_f0_hz: f64,
    pub l_kinetic_per_length_h_per_m: f64,
    pub kinetic_fraction: f64,
    pub v_ph_m_per_s: f64,
}

impl DesignReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("quantity,value\n");
        out.push_str(&format!("z0_ohm,{}\n", self.z0_ohm));
        out.push_str(&format!(
            "c_per_length_f_per_m,{}\n",
            self.c_per_length_f_per_m
        ));
        out.push_str(&format!(
            "l_geometric_per_length_h_per_m,{}\n",
            self.l_geometric_per_length_h_per_m
        ));
        out.push_str(&format!("v_ph_m_per_s,{}\n", self.v_ph_m_per_s));
        out.push_str(&format!("f0_hz,{}\n", self.f0_hz));
        for (i, h) in self.harmonics_hz.iter().enumerate() {
            out.push_str(&format!("harmonic_{}_hz,{}\n", 2 * i + 3, h));
        }
        out.push_str(&format!(
            "kinetic_inductance_per_sq_h,{}\n",
            self.kinetic_inductance_per_sq_h
        ));
        out.push_str(&format!(
            "effective_penetration_depth_m,{}\n",
            self.effective_penetration_depth_m
        ));
        if let Some(x) = &self.extracted {
            out.push_str(&format!("measured_f0_hz,{}\n", x.measured_f0_hz));
            out.push_str(&format!(
                "l_kinetic_per_length_h_per_m,{}\n",
                x.l_kinetic_per_length_h_per_m
            ));
            out.push_str(&format!("kinetic_fraction,{}\n", x.kinetic_fraction));
        }
        out
    }
}

/// Evaluate the full forward design chain.
pub fn design_report(
    geom: &CpwGeometry,
    film: &FilmProperties,
    harmonics: u32,
    measured_f0: Option<f64>,
    config_path: Option<&Path>,
) -> Result<DesignReport> {
    let line = line_parameters_geometric(geom)?;
    let f0 = fundamental_frequency(geom)?;
    let harmonics_hz: Vec<f64> = (1..=harmonics)
        .map(|n| harmonic_frequency(geom, n))
        .collect::<Result<_>>()?;
    let extracted = measured_f0
        .map(|f_meas| -> Result<ExtractedKinetic> {
            let lp = extract_kinetic_inductance_per_length(geom, f_meas)?;
            Ok(ExtractedKinetic {
                measured_f0_hz: f_meas,
                l_kinetic_per_length_h_per_m: lp.l_kinetic_per_length,
                kinetic_fraction: lp.kinetic_fraction,
                v_ph_m_per_s: lp.v_ph,
            })
        })
        .transpose()?;
    let provenance = match config_path {
        Some(p) => Provenance::collect(&[p.to_path_buf()])?,
        None => Provenance::collect(&[])?,
    };
    Ok(DesignReport {
        schema_version: crate::manifest::SCHEMA_VERSION,
        z0_ohm: line.z0,
        c_per_length_f_per_m: line.c_per_length,
        l_geometric_per_length_h_per_m: line.l_geometric_per_length,
        v_ph_m_per_s: line.v_ph,
        f0_hz: f0,
        harmonics_hz,
        kinetic_inductance_per_sq_h: kinetic_inductance_per_square(film)?,
        effective_penetration_depth_m: effective_penetration_depth(film)?,
        extracted,
        provenance,
    })
}

/// Run a design config end to end.
pub fn design_report_from_config(config: &DesignConfig, path: &Path) -> Result<DesignReport> {
    design_report(
        &config.geometry()?,
        &config.film()?,
        config.harmonics,
        config.measured_f0_hz,
        Some(path),
    )
}

/// Write a report JSON plus, when sweep rows exist, the plot CSV.
pub fn write_report_files(report: &AnalysisReport, out_dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(out_dir)?;
    let mut written = Vec::new();
    let json_path = out_dir.join("report.json");
    let mut f = std::fs::File::create(&json_path)?;
    f.write_all(report.to_json()?.as_bytes())?;
    written.push(json_path);
    if let Some(csv) = report.plot_csv() {
        let csv_path = out_dir.join("sweep.csv");
        std::fs::write(&csv_path, csv)?;
        written.push(csv_path);
    }
    Ok(written)
}
