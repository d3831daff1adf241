//! Full notch fit: synthesize a noisy trace, invert it, and compare the
//! recovered parameters with the truth.
//!
//! Run with: cargo run -p cpwres --example fit_notch_trace

use cpwres::fit::fit_notch;
use cpwres::notch::{add_noise, linewidth_grid, synthesize, NotchParameters};

fn main() -> cpwres::Result<()> {
    let truth = NotchParameters {
        f_r: 3.6539e9,
        q_l: 4872.0,
        q_c_mag: 4897.0,
        phi: 0.1,
        amplitude: 0.8,
        phase: 1.2,
        delay: 60e-9,
    };
    let grid = linewidth_grid(&truth, 10.0, 1601);
    let sweep = add_noise(&synthesize(&truth, &grid)?, 0.008, 7)?;

    let fit = fit_notch(&sweep)?;
    let p = &fit.params;
    let u = &fit.uncertainties;
    println!(
        "fit converged: {} (residual rms {:.3e})",
        fit.quality.converged, fit.quality.residual_rms
    );
    println!(
        "{:<12}{:>16}{:>16}{:>14}",
        "parameter", "truth", "fit", "one sigma"
    );
    println!(
        "{:<12}{:>16.6e}{:>16.6e}{:>14.2e}",
        "f_r (Hz)", truth.f_r, p.f_r, u.f_r
    );
    println!(
        "{:<12}{:>16.2}{:>16.2}{:>14.2}",
        "Q_l", truth.q_l, p.q_l, u.q_l
    );
    println!(
        "{:<12}{:>16.2}{:>16.2}{:>14.2}",
        "|Q_c|", truth.q_c_mag, p.q_c_mag, u.q_c_mag
    );
    println!(
        "{:<12}{:>16.4}{:>16.4}{:>14.2e}",
        "phi (rad)", truth.phi, p.phi, u.phi
    );
    println!(
        "{:<12}{:>16.4}{:>16.4}{:>14.2e}",
        "a", truth.amplitude, p.amplitude, u.amplitude
    );
    println!(
        "{:<12}{:>16.4}{:>16.4}{:>14.2e}",
        "alpha (rad)", truth.phase, p.phase, u.phase
    );
    println!(
        "{:<12}{:>16.3e}{:>16.3e}{:>14.2e}",
        "tau (s)", truth.delay, p.delay, u.delay
    );
    println!(
        "\nQ_i = {:.4e} +- {:.1e}  (truth {:.4e})",
        fit.q_i,
        u.q_i,
        truth.q_i().unwrap()
    );
    Ok(())
}
