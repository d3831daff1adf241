//! Synthesize a notch-type S21 trace with measurement noise and write it
//! as a CSV trace file.
//!
//! Run with: cargo run -p cpwres --example synthesize_trace

use cpwres::io::trace_csv::write_csv_trace;
use cpwres::notch::{add_noise, linewidth_grid, synthesize, NotchParameters};

fn main() -> cpwres::Result<()> {
    let params = NotchParameters {
        f_r: 3.6539e9,
        q_l: 4872.0,
        q_c_mag: 4897.0,
        phi: 0.1,
        amplitude: 0.8,
        phase: 1.2,
        delay: 60e-9,
    };
    println!(
        "resonator: f_r = {:.4} GHz, Q_l = {}, |Q_c| = {}",
        params.f_r / 1e9,
        params.q_l,
        params.q_c_mag
    );
    println!(
        "internal quality factor Q_i = {:.4e}",
        params.q_i().unwrap()
    );

    let grid = linewidth_grid(&params, 10.0, 1601);
    let clean = synthesize(&params, &grid)?;
    let dip = clean
        .s21()
        .iter()
        .map(|z| z.norm())
        .fold(f64::INFINITY, f64::min);
    println!(
        "grid: {} points over 10 linewidths; dip depth {:.2} dB",
        clean.len(),
        20.0 * (dip / params.amplitude).log10()
    );

    let mut noisy = add_noise(&clean, 0.008, 42)?; // 40 dB SNR
    noisy.meta.vna_power_dbm = Some(0.0);
    noisy.meta.temperature_k = Some(0.077);
    noisy.meta.label = "synthetic_fig_trace".into();

    let path = std::env::temp_dir().join("cpwres_example_trace.csv");
    write_csv_trace(&path, &noisy)?;
    println!("wrote {}", path.display());
    Ok(())
}
