//! TLS loss extraction from a power sweep: generate Q_i versus photon
//! number from a known truth, add measurement noise, fit the saturation
//! model, and compare.
//!
//! Run with: cargo run -p cpwres --example power_sweep_tls

use cpwres::loss::{tls_loss, TlsFitParameters};
use cpwres::sweeps::{fit_tls_power_sweep, SweepPoint};
use rand::{Rng, SeedableRng};

fn main() -> cpwres::Result<()> {
    let truth = TlsFitParameters {
        delta0_tls: 6.11e-6,
        n_c: 0.209,
        beta: 0.44,
        delta_other: 8.28e-7,
    };
    let (temperature, f_r) = (0.077, 3.654e9);

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    let points: Vec<SweepPoint> = (0..40)
        .map(|i| {
            let n = 10f64.powf(-2.0 + 9.0 * i as f64 / 39.0);
            let loss = tls_loss(temperature, n, f_r, &truth).unwrap() + truth.delta_other;
            let q_i = 1.0 / loss;
            let g: f64 = rng.sample(rand_distr::StandardNormal);
            SweepPoint::new(n, q_i * (1.0 + 0.02 * g), 0.02 * q_i)
        })
        .collect();

    let fit = fit_tls_power_sweep(&points, temperature, f_r)?;
    let p = &fit.params;
    let u = &fit.uncertainties;
    println!("40 points, n_ph from 1e-2 to 1e7, 2% noise on Q_i\n");
    println!(
        "{:<14}{:>14}{:>14}{:>12}",
        "parameter", "truth", "fit", "one sigma"
    );
    println!(
        "{:<14}{:>14.4e}{:>14.4e}{:>12.1e}",
        "delta0_tls", truth.delta0_tls, p.delta0_tls, u.delta0_tls
    );
    println!(
        "{:<14}{:>14.4}{:>14.4}{:>12.1e}",
        "n_c", truth.n_c, p.n_c, u.n_c
    );
    println!(
        "{:<14}{:>14.4}{:>14.4}{:>12.1e}",
        "beta", truth.beta, p.beta, u.beta
    );
    println!(
        "{:<14}{:>14.4e}{:>14.4e}{:>12.1e}",
        "delta_other", truth.delta_other, p.delta_other, u.delta_other
    );
    println!("\nchi2/dof = {:.2}", fit.chi2_reduced);
    println!(
        "model Q_i at single photon: {:.3e}; at n = 1e7: {:.3e}",
        1.0 / fit.model_loss(1.0, temperature, f_r),
        1.0 / fit.model_loss(1e7, temperature, f_r)
    );
    Ok(())
}
