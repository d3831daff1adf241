//! Notch-type resonator model: complex S21 synthesis and noise injection.
//!
//! The transmission past a resonator side-coupled to a feedline is
//!
//! ```text
//! S21(f) = a·e^{iα}·e^{-2πifτ} · [ 1 − (Q_l/|Q_c|)·e^{iφ} / (1 + 2i·Q_l·(f/f_r − 1)) ]
//! ```
//!
//! where the prefactor describes the measurement environment (cable
//! amplitude a, phase offset α, electrical delay τ) and the bracket the
//! ideal notch with loaded quality factor Q_l, coupling magnitude |Q_c| and
//! impedance-mismatch angle φ.

use crate::error::{Error, Result};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Full set of notch-model parameters (resonator + environment).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NotchParameters {
    /// Resonance frequency f_r (Hz).
    pub f_r: f64,
    /// Loaded quality factor Q_l.
    pub q_l: f64,
    /// Coupling quality factor magnitude |Q_c|.
    pub q_c_mag: f64,
    /// Impedance-mismatch angle φ (rad), |φ| < π/2.
    pub phi: f64,
    /// Environment amplitude a > 0.
    pub amplitude: f64,
    /// Environment phase offset α (rad).
    pub phase: f64,
    /// Electrical delay τ (s).
    pub delay: f64,
}

impl NotchParameters {
    pub fn validate(&self) -> Result<()> {
        if !(self.f_r > 0.0 && self.q_l > 0.0 && self.q_c_mag > 0.0 && self.amplitude > 0.0) {
            return Err(Error::Domain(format!(
                "notch parameters must be positive (f_r={}, Q_l={}, |Q_c|={}, a={})",
                self.f_r, self.q_l, self.q_c_mag, self.amplitude
            )));
        }
        if !(self.phi.abs() < PI / 2.0) {
            return Err(Error::Domain(format!(
                "|phi| must be < pi/2, got {}",
                self.phi
            )));
        }
        if self.q_i().is_none() {
            return Err(Error::Domain(format!(
                "unphysical resonator: 1/Q_l - cos(phi)/|Q_c| <= 0 (Q_l={}, |Q_c|={}, phi={})",
                self.q_l, self.q_c_mag, self.phi
            )));
        }
        Ok(())
    }

    /// Internal quality factor from 1/Q_i = 1/Q_l − cos(φ)/|Q_c|, or `None`
    /// when the combination is unphysical.
    pub fn q_i(&self) -> Option<f64> {
        let inv = 1.0 / self.q_l - self.phi.cos() / self.q_c_mag;
        (inv > 0.0).then(|| 1.0 / inv)
    }

    /// Model evaluation at a single frequency.
    pub fn s21(&self, f: f64) -> Complex64 {
        let env =
            self.amplitude * Complex64::from_polar(1.0, self.phase - 2.0 * PI * f * self.delay);
        let detune = Complex64::new(1.0, 2.0 * self.q_l * (f / self.f_r - 1.0));
        let dip = (self.q_l / self.q_c_mag) * Complex64::from_polar(1.0, self.phi) / detune;
        env * (Complex64::new(1.0, 0.0) - dip)
    }
}

/// Per-sweep measurement metadata carried alongside the trace.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SweepMetadata {
    pub vna_power_dbm: Option<f64>,
    pub temperature_k: Option<f64>,
    /// Attenuators between source and device, in dB (positive values).
    #[serde(default)]
    pub attenuation_chain_db: Vec<f64>,
    #[serde(default)]
    pub label: String,
}

/// A complex S21 trace versus frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencySweep {
    frequencies: Vec<f64>,
    s21: Vec<Complex64>,
    pub meta: SweepMetadata,
}

impl FrequencySweep {
    /// Build a sweep, enforcing strictly increasing finite frequencies and
    /// finite S21 samples.
    pub fn new(frequencies: Vec<f64>, s21: Vec<Complex64>, meta: SweepMetadata) -> Result<Self> {
        if frequencies.len() != s21.len() {
            return Err(Error::Domain(format!(
                "frequency/s21 length mismatch: {} vs {}",
                frequencies.len(),
                s21.len()
            )));
        }
        if frequencies.is_empty() {
            return Err(Error::InsufficientData("empty sweep".into()));
        }
        for pair in frequencies.windows(2) {
            if !(pair[1] > pair[0]) {
                return Err(Error::Domain(format!(
                    "frequencies must be strictly increasing ({} then {})",
                    pair[0], pair[1]
                )));
            }
        }
        if frequencies.iter().any(|f| !f.is_finite())
            || s21.iter().any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::Domain("non-finite value in sweep".into()));
        }
        Ok(Self {
            frequencies,
            s21,
            meta,
        })
    }

    pub fn len(&self) -> usize {
        self.frequencies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frequencies.is_empty()
    }

    pub fn frequencies(&self) -> &[f64] {
        &self.frequencies
    }

    pub fn s21(&self) -> &[Complex64] {
        &self.s21
    }

    pub fn span(&self) -> f64 {
        self.frequencies[self.frequencies.len() - 1] - self.frequencies[0]
    }
}

/// Evaluate the notch model over a frequency grid.
pub fn synthesize(params: &NotchParameters, frequencies: &[f64]) -> Result<FrequencySweep> {
    params.validate()?;
    let s21 = frequencies.iter().map(|&f| params.s21(f)).collect();
    FrequencySweep::new(frequencies.to_vec(), s21, SweepMetadata::default())
}

/// Linearly spaced grid of `n` points centered on f_r spanning
/// `span_linewidths` loaded linewidths (f_r/Q_l each).
pub fn linewidth_grid(params: &NotchParameters, span_linewidths: f64, n: usize) -> Vec<f64> {
    let half = 0.5 * span_linewidths * params.f_r / params.q_l;
    (0..n)
        .map(|i| params.f_r - half + 2.0 * half * i as f64 / (n - 1).max(1) as f64)
        .collect()
}

/// Add independent zero-mean circular complex Gaussian noise of standard
/// deviation `sigma` per quadrature. Deterministic for a given seed.
pub fn add_noise(sweep: &FrequencySweep, sigma: f64, seed: u64) -> Result<FrequencySweep> {
    if !(sigma >= 0.0) {
        return Err(Error::Domain(format!(
            "noise sigma must be >= 0, got {sigma}"
        )));
    }
    if sigma == 0.0 {
        return Ok(sweep.clone());
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, sigma).expect("sigma validated");
    let s21 = sweep
        .s21
        .iter()
        .map(|z| {
            let dre: f64 = normal.sample(&mut rng);
            let dim: f64 = normal.sample(&mut rng);
            z + Complex64::new(dre, dim)
        })
        .collect();
    FrequencySweep::new(sweep.frequencies.clone(), s21, sweep.meta.clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn fig3b_params() -> NotchParameters {
        NotchParameters {
            f_r: 3.6539e9,
            q_l: 4872.0,
            q_c_mag: 4897.0,
            phi: 0.0,
            amplitude: 1.0,
            phase: 0.0,
            delay: 0.0,
        }
    }

    #[test]
    fn on_resonance_value_is_real_dip() {
        let p = fig3b_params();
        let v = p.s21(p.f_r);
        let want = 1.0 - p.q_l / p.q_c_mag;
        assert!((v.re - want).abs() < 1e-15);
        assert!(v.im.abs() < 1e-15);
        // the published Q_l/Q_c pair gives a -45.8 dB dip
        assert!((want - 5.1051664284255667e-3).abs() < 1e-15);
        assert!((20.0 * want.log10() - (-45.8398)).abs() < 1e-3);
    }

    #[test]
    fn far_detuned_baseline_limit() {
        let p = NotchParameters {
            phi: 0.1,
            amplitude: 0.8,
            phase: 1.2,
            delay: 60e-9,
            ..fig3b_params()
        };
        for f in [p.f_r * 0.5, p.f_r * 2.0] {
            let v = p.s21(f);
            let env = p.amplitude * Complex64::from_polar(1.0, p.phase - 2.0 * PI * f * p.delay);
            assert!((v - env).norm() < 5e-4 * p.amplitude);
            assert!((v.norm() - p.amplitude).abs() < 5e-4);
        }
    }

    #[test]
    fn q_i_relation_and_physicality() {
        let p = fig3b_params();
        let q_i = p.q_i().unwrap();
        assert!((q_i - 954327.36).abs() / 954327.36 < 1e-12);
        // overcoupled with phi pushing cos(phi)/Qc above 1/Ql is rejected
        let bad = NotchParameters {
            q_l: 5000.0,
            q_c_mag: 4897.0,
            ..fig3b_params()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn resonator_term_traces_circle_of_expected_diameter() {
        let p = NotchParameters {
            phi: 0.17,
            ..fig3b_params()
        };
        let grid = linewidth_grid(&p, 40.0, 801);
        let sweep = synthesize(&p, &grid).unwrap();
        // center and radius known analytically: c = 1 - d/2·e^{iφ},
        // r = d/2 with d = Q_l/|Q_c|
        let d = p.q_l / p.q_c_mag;
        let center = Complex64::new(1.0, 0.0) - 0.5 * d * Complex64::from_polar(1.0, p.phi);
        for z in sweep.s21() {
            let resid = (z - center).norm() - 0.5 * d;
            assert!(resid.abs() < 1e-10, "point off circle by {resid}");
        }
    }

    #[test]
    fn magnitude_minimized_at_resonance_when_phi_zero() {
        let p = fig3b_params();
        let grid = linewidth_grid(&p, 10.0, 1601);
        let sweep = synthesize(&p, &grid).unwrap();
        let (imin, _) = sweep
            .s21()
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
            .unwrap();
        let step = grid[1] - grid[0];
        assert!((grid[imin] - p.f_r).abs() <= step);
    }

    #[test]
    fn synthesis_equivariant_in_amplitude_and_phase() {
        let base = NotchParameters {
            phi: 0.1,
            delay: 30e-9,
            ..fig3b_params()
        };
        let grid = linewidth_grid(&base, 8.0, 64);
        let s0 = synthesize(&base, &grid).unwrap();
        let scaled = NotchParameters {
            amplitude: 2.5,
            phase: 0.7,
            ..base
        };
        let s1 = synthesize(&scaled, &grid).unwrap();
        let factor = 2.5 * Complex64::from_polar(1.0, 0.7);
        for (a, b) in s0.s21().iter().zip(s1.s21()) {
            assert!((a * factor - b).norm() < 1e-13 * b.norm());
        }
    }

    #[test]
    fn noise_is_deterministic_and_sized() {
        let p = fig3b_params();
        let grid = linewidth_grid(&p, 10.0, 256);
        let sweep = synthesize(&p, &grid).unwrap();
        assert_eq!(add_noise(&sweep, 0.0, 1).unwrap(), sweep);
        let n1 = add_noise(&sweep, 0.01, 42).unwrap();
        let n2 = add_noise(&sweep, 0.01, 42).unwrap();
        assert_eq!(n1, n2); // bit identical
        assert_ne!(add_noise(&sweep, 0.01, 43).unwrap(), n1);
    }

    #[test]
    fn noise_sample_std_matches_request() {
        // 10^4 baseline points, per-quadrature std within 5% of sigma
        let freqs: Vec<f64> = (0..10_000).map(|i| 1e9 + i as f64 * 1e3).collect();
        let s21 = vec![Complex64::new(1.0, 0.0); freqs.len()];
        let sweep = FrequencySweep::new(freqs, s21, SweepMetadata::default()).unwrap();
        let noisy = add_noise(&sweep, 0.01, 1234).unwrap();
        let n = noisy.len() as f64;
        let (mut sre, mut sim) = (0.0, 0.0);
        for (a, b) in noisy.s21().iter().zip(sweep.s21()) {
            sre += (a.re - b.re).powi(2);
            sim += (a.im - b.im).powi(2);
        }
        let (std_re, std_im) = ((sre / n).sqrt(), (sim / n).sqrt());
        assert!((std_re - 0.01).abs() < 0.0005, "re std {std_re}");
        assert!((std_im - 0.01).abs() < 0.0005, "im std {std_im}");
    }

    #[test]
    fn sweep_invariants_enforced() {
        let meta = SweepMetadata::default();
        assert!(
            FrequencySweep::new(vec![1.0, 1.0], vec![Complex64::ZERO; 2], meta.clone()).is_err()
        );
        assert!(
            FrequencySweep::new(vec![2.0, 1.0], vec![Complex64::ZERO; 2], meta.clone()).is_err()
        );
        assert!(
            FrequencySweep::new(vec![1.0, 2.0], vec![Complex64::new(f64::NAN, 0.0); 2], meta)
                .is_err()
        );
    }
}
