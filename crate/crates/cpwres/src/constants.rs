//! Physical and mathematical constants used throughout the crate.
//!
//! CODATA 2018 values, quoted to at least 10 significant digits. `H`, `K_B`
//! and `C0` are exact by the 2019 SI redefinition.

/// Planck constant h (J·s). Exact.
pub const H: f64 = 6.62607015e-34;

/// Reduced Planck constant ħ = h/2π (J·s).
pub const HBAR: f64 = 1.054571817e-34;

/// Boltzmann constant k_B (J/K). Exact.
pub const K_B: f64 = 1.380649e-23;

/// Speed of light in vacuum c (m/s). Exact.
pub const C0: f64 = 299792458.0;

/// Vacuum permittivity ε₀ (F/m).
pub const EPS0: f64 = 8.8541878128e-12;

/// Vacuum permeability μ₀ (H/m).
pub const MU0: f64 = 1.25663706212e-6;

/// Euler–Mascheroni constant γ.
pub const EULER_GAMMA: f64 = 0.5772156649015329;

/// Riemann zeta function ζ(3) (Apéry's constant).
pub const ZETA_3: f64 = 1.202056903159594;

/// BCS weak-coupling gap ratio: Δ₀ = 1.76 · k_B · T_c.
pub const BCS_GAP_RATIO: f64 = 1.76;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hbar_consistent_with_h() {
        let derived = H / (2.0 * std::f64::consts::PI);
        assert!((derived - HBAR).abs() / HBAR < 1e-9);
    }

    #[test]
    fn vacuum_impedance_consistent() {
        // μ₀ε₀c² = 1 to the precision of the quoted constants.
        let product = MU0 * EPS0 * C0 * C0;
        assert!((product - 1.0).abs() < 1e-9);
    }
}
