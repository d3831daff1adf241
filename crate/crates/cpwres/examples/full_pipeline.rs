//! The whole chain in one run: generate a deterministic synthetic power
//! sweep, fit every trace, calibrate photon numbers, extract the TLS
//! parameters, and write the report files.
//!
//! Run with: cargo run -p cpwres --example full_pipeline

use cpwres::loss::PowerBudget;
use cpwres::manifest::{
    load_manifest, NotchSection, ScheduleSection, SweepKind, SynthConfig, TlsSection,
    SCHEMA_VERSION,
};
use cpwres::report::{run_power_sweep, write_report_files};
use cpwres::synth::synth_dataset;

fn main() -> cpwres::Result<()> {
    let config = SynthConfig {
        schema_version: SCHEMA_VERSION,
        kind: SweepKind::Power,
        label: "demo".into(),
        seed: 1,
        noise_sigma: 1e-3,
        n_points: 801,
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
            n_c: 0.209,
            beta: 0.44,
            delta_other: 8.28e-7,
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
                (0..16)
                    .map(|i| -85.0 + 90.0 * f64::from(i) / 15.0)
                    .collect(),
            ),
            temperature_k: Some(0.077),
            ..Default::default()
        },
    };

    let out_dir = std::env::temp_dir().join("cpwres_full_pipeline");
    let dataset = synth_dataset(&config, &out_dir)?;
    println!(
        "generated {} traces under {}",
        dataset.trace_paths.len(),
        out_dir.display()
    );

    let manifest = load_manifest(&dataset.manifest_path)?;
    let report = run_power_sweep(&manifest, &dataset.manifest_path)?;
    let sweep = report.power_sweep.as_ref().expect("power sweep requested");
    println!(
        "fitted {} traces ({} failed); photon numbers span {:.2e} .. {:.2e}",
        report.traces.len(),
        report.failures.len(),
        sweep.rows.first().map(|r| r.x).unwrap_or(f64::NAN),
        sweep.rows.last().map(|r| r.x).unwrap_or(f64::NAN),
    );
    println!(
        "TLS fit: delta0_tls = {:.4e} (truth 6.11e-6), beta = {:.4} (truth 0.44)",
        sweep.tls.delta0_tls, sweep.tls.beta
    );

    let files = write_report_files(&report, &out_dir.join("analysis"))?;
    for f in files {
        println!("wrote {}", f.display());
    }
    Ok(())
}
