//! Sweep-level fits: TLS parameters against a power sweep and the joint
//! TLS + quasiparticle decomposition against a temperature sweep.
//!
//! Both fits act on loss (1/Q_i), not Q_i, with weights σ/Q_i² propagated
//! from the per-point Q_i uncertainties. Scale-like parameters (δ⁰, n_c,
//! δ_other) are fitted in log space inside sin-parameterized boxes:
//! β ∈ (0, 2], n_c ∈ [10⁻², 10¹⁰], losses ∈ [0, 10⁻²].

use crate::constants::{H, K_B};
use crate::error::{Error, Result};
use crate::lm::{self, BoxTransform, LmOptions, NoJacobian};
use crate::loss::{qp_loss_mattis_bardeen, QuasiparticleModel, TlsFitParameters};
use nalgebra::DVector;
use serde::{Deserialize, Serialize};

/// One sweep sample: abscissa (photon number or temperature), extracted
/// Q_i, and its one-sigma uncertainty (0 = unweighted).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub x: f64,
    pub q_i: f64,
    pub sigma: f64,
}

impl SweepPoint {
    pub fn new(x: f64, q_i: f64, sigma: f64) -> Self {
        Self { x, q_i, sigma }
    }

    fn loss(&self) -> f64 {
        1.0 / self.q_i
    }

    /// Loss-space uncertainty, σ_δ = σ_Qi/Q_i².
    fn loss_sigma(&self) -> f64 {
        self.sigma / (self.q_i * self.q_i)
    }
}

/// One-sigma uncertainties of the TLS fit parameters.
#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
pub struct TlsUncertainties {
    pub delta0_tls: f64,
    pub n_c: f64,
    pub beta: f64,
    pub delta_other: f64,
}

/// Result of a TLS power-sweep fit.
#[derive(Debug, Clone)]
pub struct PowerSweepFit {
    pub params: TlsFitParameters,
    pub uncertainties: TlsUncertainties,
    /// Weighted chi-square per degree of freedom.
    pub chi2_reduced: f64,
    pub converged: bool,
}

impl PowerSweepFit {
    /// Model loss at photon number `n` (the fitted TLS saturation curve
    /// plus δ_other).
    pub fn model_loss(&self, n_ph: f64, temperature: f64, f_r: f64) -> f64 {
        crate::loss::tls_loss(temperature, n_ph, f_r, &self.params).expect("validated inputs")
            + self.params.delta_other
    }
}

fn weights(points: &[SweepPoint]) -> Vec<f64> {
    let all_weighted = points.iter().all(|p| p.sigma > 0.0 && p.sigma.is_finite());
    points
        .iter()
        .map(|p| {
            if all_weighted {
                1.0 / p.loss_sigma()
            } else {
                1.0
            }
        })
        .collect()
}

fn validate_points(points: &[SweepPoint], min_points: usize, what: &str) -> Result<()> {
    if points.len() < min_points {
        return Err(Error::InsufficientData(format!(
            "{what} needs >= {min_points} points, got {}",
            points.len()
        )));
    }
    for p in points {
        if !(p.x > 0.0 && p.q_i > 0.0) || !p.x.is_finite() || !p.q_i.is_finite() {
            return Err(Error::Domain(format!(
                "sweep points must have positive finite abscissa and Q_i, got ({}, {})",
                p.x, p.q_i
            )));
        }
    }
    Ok(())
}

/// Fit the TLS power-dependence model to (n_ph, Q_i, σ) points taken at a
/// fixed temperature:
///
///   1/Q_i(n) = δ⁰_TLS·tanh(h·f_r/2k_BT)/√(1+(n/n_c)^β) + δ_other.
///
/// Needs at least 6 points; the photon numbers must span at least two
/// decades or n_c/β are unidentifiable (`IllConditioned`).
pub fn fit_tls_power_sweep(
    points: &[SweepPoint],
    temperature: f64,
    f_r: f64,
) -> Result<PowerSweepFit> {
    validate_points(points, 6, "TLS power-sweep fit")?;
    if !(temperature > 0.0) {
        return Err(Error::Domain(format!(
            "temperature must be > 0, got {temperature}"
        )));
    }
    let n_min = points.iter().map(|p| p.x).fold(f64::INFINITY, f64::min);
    let n_max = points.iter().map(|p| p.x).fold(0.0f64, f64::max);
    let decades = (n_max / n_min).log10();
    if decades < 2.0 {
        return Err(Error::IllConditioned(format!(
            "photon-number span of {decades:.2} decades cannot pin the saturation exponent \
             (need >= 2)"
        )));
    }

    let thermal = (H * f_r / (2.0 * K_B * temperature)).tanh();
    let w = weights(points);

    // boxes: log10 δ ∈ [−12, −2] (δ ∈ [0, 1e-2], the lower edge standing
    // in for zero), log10 n_c ∈ [−2, 10], β ∈ (0, 2]
    let b_d0 = BoxTransform::new(-12.0, -2.0);
    let b_nc = BoxTransform::new(-2.0, 10.0);
    let b_beta = BoxTransform::new(1e-6, 2.0);
    let b_do = BoxTransform::new(-12.0, -2.0);

    // initial guesses: δ_other from the most saturated point, δ⁰ from the
    // least saturated one coth-corrected, n_c at the geometric mean, β=0.5
    let loss_at_max_n = points
        .iter()
        .max_by(|a, b| a.x.total_cmp(&b.x))
        .map(|p| p.loss())
        .unwrap();
    let loss_at_min_n = points
        .iter()
        .min_by(|a, b| a.x.total_cmp(&b.x))
        .map(|p| p.loss())
        .unwrap();
    let d_other0 = (0.8 * loss_at_max_n).clamp(1e-11, 1e-3);
    let d00 = ((loss_at_min_n - d_other0) / thermal).clamp(1e-11, 1e-3);
    let n_c0 = (n_min * n_max).sqrt();

    let x0 = [
        b_d0.to_internal(d00.log10()),
        b_nc.to_internal(n_c0.log10()),
        b_beta.to_internal(0.5),
        b_do.to_internal(d_other0.log10()),
    ];

    let pts: Vec<SweepPoint> = points.to_vec();
    let residuals = move |x: &[f64]| -> Option<DVector<f64>> {
        let d0 = 10f64.powf(b_d0.to_external(x[0]));
        let n_c = 10f64.powf(b_nc.to_external(x[1]));
        let beta = b_beta.to_external(x[2]);
        let d_other = 10f64.powf(b_do.to_external(x[3]));
        Some(DVector::from_iterator(
            pts.len(),
            pts.iter().zip(&w).map(|(p, wi)| {
                let model = d0 * thermal / (1.0 + (p.x / n_c).powf(beta)).sqrt() + d_other;
                (model - p.loss()) * wi
            }),
        ))
    };

    let opts = LmOptions {
        max_iterations: 400,
        ..Default::default()
    };
    let out = lm::minimize(residuals, None::<NoJacobian>, &x0, &opts)?;
    if !out.converged {
        return Err(Error::NonConvergence(format!(
            "TLS power-sweep fit stopped after {} iterations",
            out.iterations
        )));
    }

    let d0 = 10f64.powf(b_d0.to_external(out.x[0]));
    let n_c = 10f64.powf(b_nc.to_external(out.x[1]));
    let beta = b_beta.to_external(out.x[2]);
    let d_other = 10f64.powf(b_do.to_external(out.x[3]));

    let ln10 = std::f64::consts::LN_10;
    let uncertainties = TlsUncertainties {
        delta0_tls: d0 * ln10 * b_d0.derivative(out.x[0]) * out.sigma(0),
        n_c: n_c * ln10 * b_nc.derivative(out.x[1]) * out.sigma(1),
        beta: b_beta.derivative(out.x[2]) * out.sigma(2),
        delta_other: d_other * ln10 * b_do.derivative(out.x[3]) * out.sigma(3),
    };
    let dof = (points.len().saturating_sub(4)).max(1) as f64;
    Ok(PowerSweepFit {
        params: TlsFitParameters {
            delta0_tls: d0,
            n_c,
            beta,
            delta_other: d_other,
        },
        uncertainties,
        chi2_reduced: 2.0 * out.cost / dof,
        converged: out.converged,
    })
}

/// Result of a joint TLS + quasiparticle temperature-sweep fit.
#[derive(Debug, Clone)]
pub struct TemperatureSweepFit {
    /// δ⁰_TLS and δ_other carry the fitted values; n_c/β echo the supplied
    /// saturation context (n_c = ∞ when none was given, in which case δ⁰
    /// absorbs any power saturation at the measured photon number).
    pub tls: TlsFitParameters,
    pub kinetic_fraction: f64,
    pub sigma_delta0: f64,
    pub sigma_delta_other: f64,
    pub sigma_kinetic_fraction: f64,
    pub chi2_reduced: f64,
    pub converged: bool,
}

impl TemperatureSweepFit {
    /// Model loss at temperature `t`.
    pub fn model_loss(&self, t: f64, n_ph: f64, f_r: f64, q: &QuasiparticleModel) -> f64 {
        let qq = QuasiparticleModel {
            kinetic_fraction: self.kinetic_fraction,
            ..*q
        };
        crate::loss::tls_loss(t, n_ph, f_r, &self.tls).expect("validated inputs")
            + self.tls.delta_other
            + qp_loss_mattis_bardeen(t, f_r, &qq).expect("validated inputs")
    }
}

/// Joint fit of δ⁰_TLS, δ_other, and the kinetic fraction γ against
/// Q_i(T) points at fixed photon number, with the gap Δ fixed by the model.
///
/// `saturation` optionally supplies (n_c, β) from a prior power fit so the
/// fixed-power saturation factor is applied; otherwise the factor is 1 and
/// δ⁰ absorbs it. Needs ≥ 8 points, and the hottest points must resolve
/// the quasiparticle term (`IllConditioned` otherwise).
pub fn fit_temperature_sweep(
    points: &[SweepPoint],
    n_ph: f64,
    f_r: f64,
    q: &QuasiparticleModel,
    saturation: Option<(f64, f64)>,
) -> Result<TemperatureSweepFit> {
    validate_points(points, 8, "temperature-sweep fit")?;
    let (n_c, beta) = saturation.unwrap_or((f64::INFINITY, 1.0));
    let sat = (1.0 + (n_ph / n_c).powf(beta)).sqrt();

    let t_max = points.iter().map(|p| p.x).fold(0.0f64, f64::max);
    let mb_unit = QuasiparticleModel {
        kinetic_fraction: 1.0,
        ..*q
    };
    let mb_at_tmax = qp_loss_mattis_bardeen(t_max, f_r, &mb_unit)?;
    let mut losses: Vec<f64> = points.iter().map(|p| p.loss()).collect();
    losses.sort_by(f64::total_cmp);
    let median_loss = losses[losses.len() / 2];
    if mb_at_tmax < 0.01 * median_loss {
        return Err(Error::IllConditioned(format!(
            "no quasiparticle-dominated points: even with kinetic fraction 1 the \
             Mattis-Bardeen term at T_max = {t_max} K is below 1% of the observed loss"
        )));
    }

    let w = weights(points);
    let b_d0 = BoxTransform::new(-12.0, -2.0);
    let b_do = BoxTransform::new(-12.0, -2.0);

    let coldest = points.iter().min_by(|a, b| a.x.total_cmp(&b.x)).unwrap();
    let hottest = points.iter().max_by(|a, b| a.x.total_cmp(&b.x)).unwrap();
    let d_other0 = (0.5 * losses[0]).clamp(1e-11, 1e-3);
    let thermal_cold = (H * f_r / (2.0 * K_B * coldest.x)).tanh();
    let d00 = ((coldest.loss() - d_other0) * sat / thermal_cold).clamp(1e-11, 1e-3);
    let gamma0 = ((hottest.loss() - d_other0) / mb_at_tmax).clamp(1e-6, 0.9);

    let x0 = [
        b_d0.to_internal(d00.log10()),
        b_do.to_internal(d_other0.log10()),
        gamma0,
    ];

    let pts: Vec<SweepPoint> = points.to_vec();
    let mb_shape: Vec<f64> = pts
        .iter()
        .map(|p| qp_loss_mattis_bardeen(p.x, f_r, &mb_unit))
        .collect::<Result<_>>()?;
    let residuals = move |x: &[f64]| -> Option<DVector<f64>> {
        let d0 = 10f64.powf(b_d0.to_external(x[0]));
        let d_other = 10f64.powf(b_do.to_external(x[1]));
        let gamma = x[2];
        if !(-0.5..1.0).contains(&gamma) {
            return None;
        }
        Some(DVector::from_iterator(
            pts.len(),
            pts.iter().zip(&w).zip(&mb_shape).map(|((p, wi), mb)| {
                let thermal = (H * f_r / (2.0 * K_B * p.x)).tanh();
                let model = d0 * thermal / sat + gamma * mb + d_other;
                (model - p.loss()) * wi
            }),
        ))
    };

    let opts = LmOptions {
        max_iterations: 400,
        ..Default::default()
    };
    let out = lm::minimize(residuals, None::<NoJacobian>, &x0, &opts)?;
    if !out.converged {
        return Err(Error::NonConvergence(format!(
            "temperature-sweep fit stopped after {} iterations",
            out.iterations
        )));
    }

    let d0 = 10f64.powf(b_d0.to_external(out.x[0]));
    let d_other = 10f64.powf(b_do.to_external(out.x[1]));
    // report the physical range even if the optimizer sat marginally below 0
    let gamma = out.x[2].clamp(0.0, 1.0 - f64::EPSILON);

    let ln10 = std::f64::consts::LN_10;
    let dof = (points.len().saturating_sub(3)).max(1) as f64;
    Ok(TemperatureSweepFit {
        tls: TlsFitParameters {
            delta0_tls: d0,
            n_c,
            beta,
            delta_other: d_other,
        },
        kinetic_fraction: gamma,
        sigma_delta0: d0 * ln10 * b_d0.derivative(out.x[0]) * out.sigma(0),
        sigma_delta_other: d_other * ln10 * b_do.derivative(out.x[1]) * out.sigma(1),
        sigma_kinetic_fraction: out.sigma(2),
        chi2_reduced: 2.0 * out.cost / dof,
        converged: out.converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::loss::{tls_loss, total_loss};
    use rand::{Rng, SeedableRng};

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    fn randn<R: Rng>(rng: &mut R) -> f64 {
        use rand_distr::Distribution;
        <rand_distr::StandardNormal as Distribution<f64>>::sample(&rand_distr::StandardNormal, rng)
    }

    fn paper_truth() -> TlsFitParameters {
        TlsFitParameters {
            delta0_tls: 6.11e-6,
            n_c: 10.0,
            beta: 0.44,
            delta_other: 8e-7,
        }
    }

    fn power_points(
        truth: &TlsFitParameters,
        temperature: f64,
        f_r: f64,
        noise: f64,
        seed: u64,
        n_points: usize,
        log_n_min: f64,
        log_n_max: f64,
    ) -> Vec<SweepPoint> {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        (0..n_points)
            .map(|i| {
                let n = 10f64
                    .powf(log_n_min + (log_n_max - log_n_min) * i as f64 / (n_points - 1) as f64);
                let loss = tls_loss(temperature, n, f_r, truth).unwrap() + truth.delta_other;
                let q_i = 1.0 / loss;
                let noisy = q_i * (1.0 + noise * randn(&mut rng));
                SweepPoint::new(n, noisy, noise * q_i)
            })
            .collect()
    }

    #[test]
    fn noiseless_power_sweep_round_trip() {
        let truth = paper_truth();
        let pts = power_points(&truth, 0.077, 3.654e9, 0.0, 0, 20, 0.0, 7.0);
        let fit = fit_tls_power_sweep(&pts, 0.077, 3.654e9).unwrap();
        assert!(rel(fit.params.delta0_tls, truth.delta0_tls) < 5e-3, "d0");
        assert!(
            rel(fit.params.beta, truth.beta) < 5e-3,
            "beta {}",
            fit.params.beta
        );
        assert!(
            rel(fit.params.n_c, truth.n_c) < 5e-3,
            "n_c {}",
            fit.params.n_c
        );
        assert!(
            rel(fit.params.delta_other, truth.delta_other) < 5e-3,
            "d_other"
        );
    }

    #[test]
    fn noisy_power_sweep_20pt_single_decade_floor() {
        // 20 points over n ∈ [1, 1e7] sample the sub-n_c plateau with only
        // ~3 points, so the Fisher information gives one-sigma spreads of
        // ~5% on δ⁰/β and ~38% on n_c at 2% Q_i noise. Assert the medians
        // at the one-sigma scale and every seed within ~3 sigma.
        let truth = paper_truth();
        let (mut e0s, mut ebs, mut ens) = (vec![], vec![], vec![]);
        for seed in 0..50 {
            let pts = power_points(&truth, 0.077, 3.654e9, 0.02, seed, 20, 0.0, 7.0);
            let fit = fit_tls_power_sweep(&pts, 0.077, 3.654e9).unwrap();
            e0s.push(rel(fit.params.delta0_tls, truth.delta0_tls));
            ebs.push(rel(fit.params.beta, truth.beta));
            ens.push(rel(fit.params.n_c, truth.n_c));
        }
        let med = |v: &mut Vec<f64>| {
            v.sort_by(f64::total_cmp);
            v[v.len() / 2]
        };
        assert!(med(&mut e0s) < 0.05, "median d0 error {}", e0s[25]);
        assert!(med(&mut ebs) < 0.05, "median beta error {}", ebs[25]);
        assert!(med(&mut ens) < 0.30, "median n_c error {}", ens[25]);
        assert!(
            *e0s.last().unwrap() < 0.15,
            "worst d0 error {}",
            e0s.last().unwrap()
        );
        assert!(
            *ebs.last().unwrap() < 0.15,
            "worst beta error {}",
            ebs.last().unwrap()
        );
        assert!(
            *ens.last().unwrap() < 1.00,
            "worst n_c error {}",
            ens.last().unwrap()
        );
    }

    #[test]
    fn noisy_power_sweep_recovery_monte_carlo() {
        // With the plateau sampled (n from 1e-2, three decades below n_c)
        // the fit recovers δ⁰ and β within 5% at 2% noise for at least 90%
        // of 50 seeds.
        let truth = paper_truth();
        let mut good = 0;
        for seed in 0..50 {
            let pts = power_points(&truth, 0.077, 3.654e9, 0.02, seed, 40, -2.0, 7.0);
            let Ok(fit) = fit_tls_power_sweep(&pts, 0.077, 3.654e9) else {
                continue;
            };
            let ok = rel(fit.params.delta0_tls, truth.delta0_tls) < 0.05
                && rel(fit.params.beta, truth.beta) < 0.05
                && rel(fit.params.n_c, truth.n_c) < 0.30;
            good += ok as u32;
        }
        assert!(good >= 45, "only {good}/50 seeds within tolerance");
    }

    #[test]
    fn narrow_span_is_ill_conditioned() {
        let truth = paper_truth();
        let pts: Vec<SweepPoint> = (0..10)
            .map(|i| {
                let n = 10.0 + 90.0 * i as f64 / 9.0; // < 2 decades
                let loss = tls_loss(0.077, n, 3.654e9, &truth).unwrap() + truth.delta_other;
                SweepPoint::new(n, 1.0 / loss, 0.0)
            })
            .collect();
        assert!(matches!(
            fit_tls_power_sweep(&pts, 0.077, 3.654e9),
            Err(Error::IllConditioned(_))
        ));
        assert!(matches!(
            fit_tls_power_sweep(&pts[..4], 0.077, 3.654e9),
            Err(Error::InsufficientData(_))
        ));
    }

    fn temperature_points(
        tls: &TlsFitParameters,
        q: &QuasiparticleModel,
        n_ph: f64,
        f_r: f64,
        noise: f64,
        seed: u64,
    ) -> Vec<SweepPoint> {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        (0..16)
            .map(|i| {
                let t = 0.077 + (1.0 - 0.077) * i as f64 / 15.0;
                let loss = total_loss(t, n_ph, f_r, tls, Some(q)).unwrap();
                let q_i = 1.0 / loss;
                let noisy = q_i * (1.0 + noise * randn(&mut rng));
                SweepPoint::new(t, noisy, if noise > 0.0 { noise * q_i } else { 0.0 })
            })
            .collect()
    }

    #[test]
    fn temperature_sweep_recovers_decomposition() {
        let tls = TlsFitParameters {
            n_c: f64::INFINITY,
            beta: 1.0,
            ..paper_truth()
        };
        let q = QuasiparticleModel::from_critical_temperature(4.06, 0.019).unwrap();
        // noiseless
        let pts = temperature_points(&tls, &q, 1.0, 3.654e9, 0.0, 0);
        let fit = fit_temperature_sweep(&pts, 1.0, 3.654e9, &q, None).unwrap();
        assert!(rel(fit.tls.delta0_tls, tls.delta0_tls) < 0.01);
        assert!(
            rel(fit.kinetic_fraction, 0.019) < 0.01,
            "gamma {}",
            fit.kinetic_fraction
        );
        // 1% noise Monte Carlo (Fisher one-sigma: 0.9% on δ⁰, 1.3% on γ):
        // both within 10% for at least 90% of seeds
        let mut good = 0;
        for seed in 0..20 {
            let pts = temperature_points(&tls, &q, 1.0, 3.654e9, 0.01, seed);
            let Ok(fit) = fit_temperature_sweep(&pts, 1.0, 3.654e9, &q, None) else {
                continue;
            };
            let ok = rel(fit.tls.delta0_tls, tls.delta0_tls) < 0.10
                && rel(fit.kinetic_fraction, 0.019) < 0.10;
            good += ok as u32;
        }
        assert!(
            good >= 18,
            "only {good}/20 seeds recovered the decomposition"
        );
    }

    #[test]
    fn removed_qp_term_fits_zero_kinetic_fraction() {
        let tls = TlsFitParameters {
            n_c: f64::INFINITY,
            beta: 1.0,
            ..paper_truth()
        };
        let q = QuasiparticleModel::from_critical_temperature(4.06, 0.019).unwrap();
        let pts = temperature_points(&tls, &q, 1.0, 3.654e9, 0.0, 0)
            .into_iter()
            .map(|p| {
                // rebuild the loss without the qp term
                let loss = tls_loss(p.x, 1.0, 3.654e9, &tls).unwrap() + tls.delta_other;
                SweepPoint::new(p.x, 1.0 / loss, 0.0)
            })
            .collect::<Vec<_>>();
        let fit = fit_temperature_sweep(&pts, 1.0, 3.654e9, &q, None).unwrap();
        assert!(
            fit.kinetic_fraction <= 3.0 * fit.sigma_kinetic_fraction.max(1e-6),
            "gamma = {} +- {}",
            fit.kinetic_fraction,
            fit.sigma_kinetic_fraction
        );
    }

    #[test]
    fn fitted_curve_peaks_near_truth_argmax() {
        let tls = TlsFitParameters {
            n_c: f64::INFINITY,
            beta: 1.0,
            ..paper_truth()
        };
        let q = QuasiparticleModel::from_critical_temperature(4.06, 0.019).unwrap();
        let pts = temperature_points(&tls, &q, 1.0, 3.654e9, 0.01, 3);
        let fit = fit_temperature_sweep(&pts, 1.0, 3.654e9, &q, None).unwrap();
        let argmax = |f: &dyn Fn(f64) -> f64| {
            let mut best = (0.0, f64::NEG_INFINITY);
            for i in 0..=500 {
                let t = 0.077 + (1.0 - 0.077) * i as f64 / 500.0;
                let v = f(t);
                if v > best.1 {
                    best = (t, v);
                }
            }
            best.0
        };
        let truth_peak = argmax(&|t| 1.0 / total_loss(t, 1.0, 3.654e9, &tls, Some(&q)).unwrap());
        let fit_peak = argmax(&|t| 1.0 / fit.model_loss(t, 1.0, 3.654e9, &q));
        assert!(
            (truth_peak - fit_peak).abs() < 0.1,
            "{truth_peak} vs {fit_peak}"
        );
    }

    #[test]
    fn cold_only_temperature_sweep_is_ill_conditioned() {
        let tls = TlsFitParameters {
            n_c: f64::INFINITY,
            beta: 1.0,
            ..paper_truth()
        };
        let q = QuasiparticleModel::from_critical_temperature(4.06, 0.019).unwrap();
        let pts: Vec<SweepPoint> = (0..10)
            .map(|i| {
                let t = 0.05 + 0.1 * i as f64 / 9.0;
                let loss = total_loss(t, 1.0, 3.654e9, &tls, Some(&q)).unwrap();
                SweepPoint::new(t, 1.0 / loss, 0.0)
            })
            .collect();
        assert!(matches!(
            fit_temperature_sweep(&pts, 1.0, 3.654e9, &q, None),
            Err(Error::IllConditioned(_))
        ));
    }
}
