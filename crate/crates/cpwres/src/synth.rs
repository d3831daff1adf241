//! Deterministic synthetic-dataset generator.
//!
//! For each schedule point the loss truth fixes Q_i, which fixes Q_l and —
//! through the drive power — the mean photon number; but the TLS loss
//! itself depends on the photon number, so ⟨n⟩ is solved self-consistently
//! by fixed-point iteration (relative tolerance 1e-9, cap 100). The
//! iteration map is monotone and bounded, so it settles from n = 1 for any
//! physical truth.
//!
//! Outputs: one CSV trace per schedule point, a `manifest.toml` ready for
//! the sweep commands, and a `ground_truth.json` sidecar with the exact
//! per-point values for comparison tooling.

use crate::error::{Error, Result};
use crate::io::trace_csv::write_csv_trace;
use crate::loss::{
    mean_photon_number_raw, qp_loss_mattis_bardeen, tls_loss, QuasiparticleModel, TlsFitParameters,
};
use crate::manifest::{
    ManifestEntry, QuasiparticleSection, SaturationSection, SweepKind, SweepManifest, SynthConfig,
    SCHEMA_VERSION,
};
use crate::notch::{add_noise, linewidth_grid, synthesize, NotchParameters, SweepMetadata};
use serde::Serialize;
use std::path::{Path, PathBuf};

/// Exact per-point values behind a generated trace.
#[derive(Debug, Clone, Serialize)]
pub struct GroundTruthPoint {
    pub path: String,
    pub vna_power_dbm: f64,
    pub temperature_k: f64,
    pub n_ph: f64,
    pub q_i: f64,
    pub q_l: f64,
    pub noise_seed: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct GroundTruth {
    pub schema_version: u32,
    pub config: SynthConfig,
    pub points: Vec<GroundTruthPoint>,
}

#[derive(Debug)]
pub struct SynthOutput {
    pub manifest_path: PathBuf,
    pub ground_truth_path: PathBuf,
    pub trace_paths: Vec<PathBuf>,
}

struct Truth<'a> {
    tls: TlsFitParameters,
    qp: Option<QuasiparticleModel>,
    config: &'a SynthConfig,
}

impl Truth<'_> {
    fn loss(&self, temperature: f64, n_ph: f64) -> Result<f64> {
        let mut delta =
            tls_loss(temperature, n_ph, self.config.notch.f_r, &self.tls)? + self.tls.delta_other;
        if let Some(qp) = &self.qp {
            delta += qp_loss_mattis_bardeen(temperature, self.config.notch.f_r, qp)?;
        }
        Ok(delta)
    }

    /// Self-consistent photon number at one drive/temperature point.
    fn solve_photon_number(&self, p_in_w: f64, temperature: f64) -> Result<(f64, f64)> {
        let notch = &self.config.notch;
        let mut n = 1.0f64;
        for _ in 0..100 {
            let q_i = 1.0 / self.loss(temperature, n)?;
            let next = mean_photon_number_raw(p_in_w, notch.f_r, notch.q_c_mag, q_i);
            if !next.is_finite() {
                return Err(Error::FixedPointDivergence(format!(
                    "photon number became non-finite at P_in = {p_in_w} W"
                )));
            }
            if (next - n).abs() <= 1e-9 * n.max(1e-30) {
                return Ok((next, q_i));
            }
            n = next;
        }
        Err(Error::FixedPointDivergence(format!(
            "photon number did not settle within 100 iterations at P_in = {p_in_w} W"
        )))
    }
}

/// Generate a dataset under `out_dir`. Deterministic: a fixed config and
/// seed reproduce every output byte for byte.
pub fn synth_dataset(config: &SynthConfig, out_dir: &Path) -> Result<SynthOutput> {
    config.validate()?;
    std::fs::create_dir_all(out_dir)?;

    let tls = TlsFitParameters {
        delta0_tls: config.tls.delta0_tls,
        n_c: config.tls.n_c,
        beta: config.tls.beta,
        delta_other: config.tls.delta_other,
    };
    let qp = config
        .quasiparticle
        .map(|q| {
            QuasiparticleModel::from_critical_temperature(
                q.critical_temperature_k,
                q.kinetic_fraction,
            )
        })
        .transpose()?;
    let truth = Truth { tls, qp, config };

    let schedule: Vec<(f64, f64)> = match config.kind {
        SweepKind::Power => {
            let t = config.schedule.temperature_k.expect("validated");
            config
                .schedule
                .powers_dbm
                .as_ref()
                .expect("validated")
                .iter()
                .map(|&p| (p, t))
                .collect()
        }
        SweepKind::Temperature => {
            let p = config.schedule.power_dbm.expect("validated");
            config
                .schedule
                .temperatures_k
                .as_ref()
                .expect("validated")
                .iter()
                .map(|&t| (p, t))
                .collect()
        }
    };

    let mut entries = Vec::new();
    let mut points = Vec::new();
    let mut trace_paths = Vec::new();
    for (index, &(power_dbm, temperature)) in schedule.iter().enumerate() {
        let budget = config.budget.with_vna_power_dbm(power_dbm);
        let (n_ph, q_i) = truth.solve_photon_number(budget.input_power_w(), temperature)?;
        let inv_q_l = 1.0 / q_i + config.notch.phi.cos() / config.notch.q_c_mag;
        let params = NotchParameters {
            f_r: config.notch.f_r,
            q_l: 1.0 / inv_q_l,
            q_c_mag: config.notch.q_c_mag,
            phi: config.notch.phi,
            amplitude: config.notch.amplitude,
            phase: config.notch.phase,
            delay: config.notch.delay,
        };
        let grid = linewidth_grid(&params, config.span_linewidths, config.n_points);
        let mut sweep = synthesize(&params, &grid)?;
        sweep.meta = SweepMetadata {
            vna_power_dbm: Some(power_dbm),
            temperature_k: Some(temperature),
            attenuation_chain_db: vec![
                config.budget.fridge_attenuation_db,
                config.budget.room_temp_attenuation_db,
            ],
            label: format!("{}_{index:03}", config.label),
        };
        let seed = config
            .seed
            .wrapping_add((index as u64).wrapping_mul(0x9E3779B97F4A7C15));
        let noisy = add_noise(&sweep, config.noise_sigma, seed)?;

        let file_name = format!("trace_{index:03}.csv");
        let path = out_dir.join(&file_name);
        write_csv_trace(&path, &noisy)?;
        trace_paths.push(path);
        entries.push(ManifestEntry {
            path: file_name.clone(),
            vna_power_dbm: Some(power_dbm),
            temperature_k: Some(temperature),
        });
        points.push(GroundTruthPoint {
            path: file_name,
            vna_power_dbm: power_dbm,
            temperature_k: temperature,
            n_ph,
            q_i,
            q_l: params.q_l,
            noise_seed: seed,
        });
    }

    let manifest = SweepManifest {
        schema_version: SCHEMA_VERSION,
        resonator_label: config.label.clone(),
        kind: config.kind,
        budget: config.budget,
        quasiparticle: config.quasiparticle.map(|q| QuasiparticleSection {
            critical_temperature_k: q.critical_temperature_k,
        }),
        tls_saturation: match config.kind {
            // hand the generator's saturation truth to the temperature fit
            SweepKind::Temperature => Some(SaturationSection {
                n_c: config.tls.n_c,
                beta: config.tls.beta,
            }),
            SweepKind::Power => None,
        },
        entries,
    };
    let manifest_path = out_dir.join("manifest.toml");
    let manifest_text =
        toml::to_string_pretty(&manifest).map_err(|e| Error::Config(e.to_string()))?;
    std::fs::write(&manifest_path, manifest_text)?;

    let ground_truth = GroundTruth {
        schema_version: SCHEMA_VERSION,
        config: config.clone(),
        points,
    };
    let ground_truth_path = out_dir.join("ground_truth.json");
    std::fs::write(
        &ground_truth_path,
        serde_json::to_string_pretty(&ground_truth)?,
    )?;

    Ok(SynthOutput {
        manifest_path,
        ground_truth_path,
        trace_paths,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::loss::PowerBudget;
    use crate::manifest::{NotchSection, ScheduleSection, TlsSection};

    pub(crate) fn power_config(seed: u64, noise: f64, n_powers: usize) -> SynthConfig {
        SynthConfig {
            schema_version: SCHEMA_VERSION,
            kind: SweepKind::Power,
            label: "r1".into(),
            seed,
            noise_sigma: noise,
            n_points: 401,
            span_linewidths: 10.0,
            notch: NotchSection {
                f_r: 3.654e9,
                q_c_mag: 4897.0,
                phi: 0.05,
                amplitude: 0.9,
                phase: 0.4,
                delay: 40e-9,
            },
            tls: TlsSection {
                delta0_tls: 6.11e-6,
                n_c: 0.20918916327618146,
                beta: 0.44,
                delta_other: 8.2772304443292823e-7,
            },
            quasiparticle: None,
            budget: PowerBudget {
                vna_power_dbm: 0.0,
                fridge_attenuation_db: 60.0,
                room_temp_attenuation_db: 20.0,
                extra_line_loss_db: 0.0,
            },
            schedule: ScheduleSection {
                powers_dbm: Some(
                    (0..n_powers)
                        .map(|i| -70.0 + 70.0 * i as f64 / (n_powers - 1) as f64)
                        .collect(),
                ),
                temperature_k: Some(0.077),
                ..Default::default()
            },
        }
    }

    #[test]
    fn fixed_seed_is_bit_identical() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = power_config(7, 0.002, 5);
        let a = synth_dataset(&cfg, &dir.path().join("a")).unwrap();
        let b = synth_dataset(&cfg, &dir.path().join("b")).unwrap();
        for (pa, pb) in a.trace_paths.iter().zip(&b.trace_paths) {
            assert_eq!(std::fs::read(pa).unwrap(), std::fs::read(pb).unwrap());
        }
        assert_eq!(
            std::fs::read(&a.manifest_path).unwrap(),
            std::fs::read(&b.manifest_path).unwrap()
        );
        assert_eq!(
            std::fs::read(&a.ground_truth_path).unwrap(),
            std::fs::read(&b.ground_truth_path).unwrap()
        );
        // a different seed changes the traces
        let c = synth_dataset(&power_config(8, 0.002, 5), &dir.path().join("c")).unwrap();
        assert_ne!(
            std::fs::read(&a.trace_paths[0]).unwrap(),
            std::fs::read(&c.trace_paths[0]).unwrap()
        );
    }

    #[test]
    fn photon_number_is_self_consistent() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = power_config(1, 0.0, 4);
        synth_dataset(&cfg, dir.path()).unwrap();
        let gt: serde_json::Value = serde_json::from_str(
            &std::fs::read_to_string(dir.path().join("ground_truth.json")).unwrap(),
        )
        .unwrap();
        for point in gt["points"].as_array().unwrap() {
            let n = point["n_ph"].as_f64().unwrap();
            let q_i = point["q_i"].as_f64().unwrap();
            let p_dbm = point["vna_power_dbm"].as_f64().unwrap();
            let p_in = 10f64.powf((p_dbm - 80.0 - 30.0) / 10.0);
            let recomputed = mean_photon_number_raw(p_in, 3.654e9, 4897.0, q_i);
            assert!((recomputed - n).abs() <= 2e-9 * n, "{recomputed} vs {n}");
            // and q_i equals the loss model at that photon number
            let tls = TlsFitParameters {
                delta0_tls: 6.11e-6,
                n_c: 0.20918916327618146,
                beta: 0.44,
                delta_other: 8.2772304443292823e-7,
            };
            let loss = tls_loss(0.077, n, 3.654e9, &tls).unwrap() + tls.delta_other;
            assert!((1.0 / loss - q_i).abs() <= 1e-6 * q_i);
        }
    }

    #[test]
    fn zero_noise_traces_match_model_exactly() {
        use crate::io::trace_csv::{parse_csv_trace, ColumnSpec};
        let dir = tempfile::tempdir().unwrap();
        let cfg = power_config(3, 0.0, 3);
        let out = synth_dataset(&cfg, dir.path()).unwrap();
        let sweep = parse_csv_trace(&out.trace_paths[0], ColumnSpec::Auto).unwrap();
        assert_eq!(sweep.len(), 401);
        assert_eq!(sweep.meta.vna_power_dbm, Some(-70.0));
        assert_eq!(sweep.meta.temperature_k, Some(0.077));
    }
}
