//! Photon-number calibration: drive power through the attenuation chain
//! to the mean intra-resonator photon number, and the role of unreported
//! line loss.
//!
//! Run with: cargo run -p cpwres --example photon_calibration

use cpwres::fit::{FitQuality, NotchFitResult, NotchUncertainties};
use cpwres::loss::{mean_photon_number, power_partition, PowerBudget};
use cpwres::notch::NotchParameters;
use num_complex::Complex64;

fn main() -> cpwres::Result<()> {
    let params = NotchParameters {
        f_r: 3.6539e9,
        q_l: 4872.0,
        q_c_mag: 4897.0,
        phi: 0.0,
        amplitude: 1.0,
        phase: 0.0,
        delay: 0.0,
    };
    let fit = NotchFitResult {
        params,
        q_i: params.q_i().unwrap(),
        uncertainties: NotchUncertainties::default(),
        quality: FitQuality {
            residual_rms: 0.0,
            n_points: 1601,
            converged: true,
        },
    };
    let budget = PowerBudget {
        vna_power_dbm: 0.0,
        fridge_attenuation_db: 60.0,
        room_temp_attenuation_db: 20.0,
        extra_line_loss_db: 0.0,
    };

    println!("Q_i = {:.4e}, |Q_c| = {}", fit.q_i, params.q_c_mag);
    println!(
        "\n{:>12} {:>14} {:>14}",
        "P_VNA (dBm)", "P_in (W)", "<n_ph>"
    );
    for dbm in [-80.0, -60.0, -40.0, -20.0, 0.0] {
        let b = budget.with_vna_power_dbm(dbm);
        println!(
            "{dbm:>12} {:>14.3e} {:>14.3e}",
            b.input_power_w(),
            mean_photon_number(&b, &fit)?
        );
    }

    let with_loss = PowerBudget {
        extra_line_loss_db: 5.0,
        ..budget
    };
    println!(
        "\nat 0 dBm: n = {:.3e} with the stated 80 dB, n = {:.3e} with 5 dB extra line loss",
        mean_photon_number(&budget, &fit)?,
        mean_photon_number(&with_loss, &fit)?
    );

    // power split at a scattering point
    let split = power_partition(
        budget.input_power_w(),
        Complex64::new(0.3, 0.0),
        Complex64::new(0.6, 0.2),
    )?;
    println!(
        "\npower partition of {:.3e} W: reflected {:.3e}, transmitted {:.3e}, absorbed {:.3e}",
        budget.input_power_w(),
        split.p_reflected,
        split.p_transmitted,
        split.p_absorbed
    );
    Ok(())
}
