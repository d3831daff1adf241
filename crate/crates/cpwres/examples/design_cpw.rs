//! Forward CPW design: geometry and film to line parameters, resonance
//! frequencies, kinetic inductance and penetration depth.
//!
//! Run with: cargo run -p cpwres --example design_cpw

use cpwres::cpw::{
    effective_penetration_depth, extract_kinetic_inductance_per_length, fundamental_frequency,
    harmonic_frequency, kinetic_inductance_per_square, line_parameters_geometric, CpwGeometry,
    FilmProperties,
};

fn main() -> cpwres::Result<()> {
    // 4 um center / 2 um gap quarter-wave resonator on silicon
    let geom = CpwGeometry::new(4e-6, 2e-6, 8e-3, 11.9)?;
    let line = line_parameters_geometric(&geom)?;
    println!("CPW geometry: w = 4 um, s = 2 um, l = 8 mm, eps_r = 11.9");
    println!("  C_l  = {:.4e} F/m", line.c_per_length);
    println!("  L_m  = {:.4e} H/m", line.l_geometric_per_length);
    println!("  Z0   = {:.2} ohm", line.z0);
    println!("  v_ph = {:.4e} m/s", line.v_ph);

    let f0 = fundamental_frequency(&geom)?;
    println!(
        "  f0   = {:.4} GHz (harmonics at {:.4}, {:.4}, {:.4} GHz)",
        f0 / 1e9,
        harmonic_frequency(&geom, 1)? / 1e9,
        harmonic_frequency(&geom, 2)? / 1e9,
        harmonic_frequency(&geom, 3)? / 1e9,
    );

    // 40 nm tantalum film
    let film = FilmProperties::new(40e-9, 4.06, 1.764)?;
    println!("\nfilm: d = 40 nm, Tc = 4.06 K, Rs = 1.764 ohm/sq, lambda0 = 150 nm");
    println!(
        "  L_K        = {:.3} pH/sq",
        kinetic_inductance_per_square(&film)? * 1e12
    );
    println!(
        "  lambda_eff = {:.1} nm",
        effective_penetration_depth(&film)? * 1e9
    );

    // invert a measured fundamental into kinetic inductance per length
    let measured_f0 = 3.654e9;
    let extracted = extract_kinetic_inductance_per_length(&geom, measured_f0)?;
    println!("\nmeasured f0 = {:.4} GHz implies:", measured_f0 / 1e9);
    println!(
        "  L_k per length   = {:.4e} H/m",
        extracted.l_kinetic_per_length
    );
    println!("  kinetic fraction = {:.4}", extracted.kinetic_fraction);
    println!("  v_ph             = {:.4e} m/s", extracted.v_ph);
    Ok(())
}
