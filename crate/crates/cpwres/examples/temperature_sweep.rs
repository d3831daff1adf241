//! Temperature dependence: the TLS + quasiparticle decomposition of
//! Q_i(T) and the resonance-frequency shift with its blueshift-to-redshift
//! crossover.
//!
//! Run with: cargo run -p cpwres --example temperature_sweep

use cpwres::loss::{
    qp_loss_mattis_bardeen, tls_loss, total_frequency_shift_referenced, total_loss,
    QuasiparticleModel, TlsFitParameters,
};
use cpwres::sweeps::{fit_temperature_sweep, SweepPoint};

fn main() -> cpwres::Result<()> {
    let tls = TlsFitParameters {
        delta0_tls: 6.11e-6,
        n_c: f64::INFINITY, // single fixed drive: saturation absorbed in delta0
        beta: 1.0,
        delta_other: 8.28e-7,
    };
    let qp = QuasiparticleModel::from_critical_temperature(4.06, 0.019)?;
    let f_r = 3.654e9;

    println!(
        "{:>8} {:>12} {:>12} {:>12} {:>12} {:>12}",
        "T (K)", "tls loss", "qp loss", "Q_i", "shift (kHz)", "regime"
    );
    for i in 0..=12 {
        let t = 0.077 + (1.0 - 0.077) * f64::from(i) / 12.0;
        let d_tls = tls_loss(t, 1.0, f_r, &tls)?;
        let d_qp = qp_loss_mattis_bardeen(t, f_r, &qp)?;
        let q_i = 1.0 / total_loss(t, 1.0, f_r, &tls, Some(&qp))?;
        let shift = total_frequency_shift_referenced(t, 0.077, f_r, tls.delta0_tls, &qp)?;
        let regime = if d_tls > d_qp { "TLS" } else { "quasiparticle" };
        println!(
            "{t:>8.3} {d_tls:>12.3e} {d_qp:>12.3e} {q_i:>12.3e} {:>12.2} {regime:>12}",
            shift / 1e3
        );
    }

    // recover the decomposition from noiseless Q_i(T) points
    let points: Vec<SweepPoint> = (0..16)
        .map(|i| {
            let t = 0.077 + (1.0 - 0.077) * f64::from(i) / 15.0;
            let q_i = 1.0 / total_loss(t, 1.0, f_r, &tls, Some(&qp)).unwrap();
            SweepPoint::new(t, q_i, 0.0)
        })
        .collect();
    let fit = fit_temperature_sweep(&points, 1.0, f_r, &qp, None)?;
    println!(
        "\njoint fit: delta0_tls = {:.4e}, delta_other = {:.4e}, kinetic fraction = {:.4}",
        fit.tls.delta0_tls, fit.tls.delta_other, fit.kinetic_fraction
    );
    println!(
        "truth:     delta0_tls = {:.4e}, delta_other = {:.4e}, kinetic fraction = {:.4}",
        tls.delta0_tls, tls.delta_other, 0.019
    );
    Ok(())
}
