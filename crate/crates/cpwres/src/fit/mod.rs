//! Inversion of the notch model: given a measured or synthetic sweep,
//! recover all seven parameters of `NotchParameters`, the derived internal
//! quality factor, and one-sigma uncertainties.
//!
//! Pipeline: electrical-delay search (circle-residual minimization) →
//! algebraic circle fit → phase-versus-frequency fit → environment and
//! coupling geometry from the off-resonant point → simultaneous
//! damped-least-squares refinement of all parameters on the complex
//! residuals.

pub mod circle;
pub mod phase;

pub use circle::{fit_circle, Circle};
pub use phase::{fit_phase, PhaseFit};

use crate::error::{Error, Result};
use crate::lm::{self, LmOptions};
use crate::notch::{FrequencySweep, NotchParameters};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Goodness-of-fit summary.
#[derive(Debug, Clone, Copy, serde::Serialize, serde::Deserialize)]
pub struct FitQuality {
    /// RMS of the complex residual magnitude, √(Σ|model−data|²/N).
    pub residual_rms: f64,
    pub n_points: usize,
    pub converged: bool,
}

/// One-sigma uncertainties from the linearized covariance at the optimum,
/// scaled by the residual RMS. NaN when the covariance is unavailable.
#[derive(Debug, Clone, Copy, Default)]
pub struct NotchUncertainties {
    pub f_r: f64,
    pub q_l: f64,
    pub q_c_mag: f64,
    pub phi: f64,
    pub amplitude: f64,
    pub phase: f64,
    pub delay: f64,
    pub q_i: f64,
}

/// Result of a full notch fit.
#[derive(Debug, Clone)]
pub struct NotchFitResult {
    pub params: NotchParameters,
    /// Internal quality factor, 1/Q_i = 1/Q_l − cos(φ)/|Q_c|. NaN when the
    /// fitted combination is unphysical (then `quality.converged` is false).
    pub q_i: f64,
    pub uncertainties: NotchUncertainties,
    pub quality: FitQuality,
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n == 0 {
        return f64::NAN;
    }
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

/// Per-quadrature noise estimate from successive complex differences.
/// |Δ| of two consecutive noise samples is Rayleigh with median σ·√(2·ln4).
fn noise_sigma(points: &[Complex64]) -> f64 {
    let mut diffs: Vec<f64> = points.windows(2).map(|w| (w[1] - w[0]).norm()).collect();
    if diffs.is_empty() {
        return 0.0;
    }
    median(&mut diffs) / (2.0 * f64::ln(4.0)).sqrt()
}

fn apply_delay(freqs: &[f64], s21: &[Complex64], tau: f64) -> Vec<Complex64> {
    freqs
        .iter()
        .zip(s21)
        .map(|(&f, z)| z * Complex64::from_polar(1.0, 2.0 * PI * f * tau))
        .collect()
}

/// Least-squares slope of the unwrapped phase gives a group-delay seed.
fn phase_slope_delay(freqs: &[f64], s21: &[Complex64]) -> f64 {
    let mut theta: Vec<f64> = s21.iter().map(|z| z.im.atan2(z.re)).collect();
    phase::unwrap_angles(&mut theta);
    let n = freqs.len() as f64;
    let mean_f = freqs.iter().sum::<f64>() / n;
    let mean_t = theta.iter().sum::<f64>() / n;
    let (mut num, mut den) = (0.0, 0.0);
    for (&f, &t) in freqs.iter().zip(&theta) {
        num += (f - mean_f) * (t - mean_t);
        den += (f - mean_f) * (f - mean_f);
    }
    if den == 0.0 {
        return 0.0;
    }
    -(num / den) / (2.0 * PI)
}

/// Delay seed from the off-resonant wings only (outer quarter on each
/// side), where the resonator adds almost no phase curvature. Accurate to
/// a small fraction of a winding period even for shallow dips.
fn wing_slope_delay(freqs: &[f64], s21: &[Complex64]) -> f64 {
    let n = freqs.len();
    let q = (n / 4).max(2);
    let mut theta: Vec<f64> = s21.iter().map(|z| z.im.atan2(z.re)).collect();
    phase::unwrap_angles(&mut theta);
    let idx: Vec<usize> = (0..q).chain(n - q..n).collect();
    let m = idx.len() as f64;
    let mean_f = idx.iter().map(|&i| freqs[i]).sum::<f64>() / m;
    let mean_t = idx.iter().map(|&i| theta[i]).sum::<f64>() / m;
    let (mut num, mut den) = (0.0, 0.0);
    for &i in &idx {
        num += (freqs[i] - mean_f) * (theta[i] - mean_t);
        den += (freqs[i] - mean_f) * (freqs[i] - mean_f);
    }
    if den == 0.0 {
        return 0.0;
    }
    -(num / den) / (2.0 * PI)
}

fn circle_objective(freqs: &[f64], s21: &[Complex64], tau: f64) -> f64 {
    let corrected = apply_delay(freqs, s21, tau);
    match fit_circle(&corrected) {
        Ok(c) => c.residual_rms(&corrected),
        // coincident points mean the delay perfectly flattened a bare
        // baseline; that is a minimum of the objective
        Err(_) => 0.0,
    }
}

/// Coarse-grid plus golden-section search for the delay that makes the
/// trace most circular.
fn delay_search(freqs: &[f64], s21: &[Complex64]) -> f64 {
    let span = freqs[freqs.len() - 1] - freqs[0];
    let tau0 = phase_slope_delay(freqs, s21);
    let half_width = (10.0 * tau0.abs()).max(2.0 / span);
    // the objective oscillates with period ~1/span in τ; sample at least
    // four points per period so the global minimum cell cannot be aliased
    let n_grid = ((8.0 * half_width * span).ceil() as usize).clamp(400, 20_000);
    let step = 2.0 * half_width / n_grid as f64;
    let mut best = (tau0 - half_width, f64::INFINITY);
    for i in 0..=n_grid {
        let tau = tau0 - half_width + i as f64 * step;
        let obj = circle_objective(freqs, s21, tau);
        if obj < best.1 {
            best = (tau, obj);
        }
    }
    // golden-section refinement around the best grid cell
    let gr = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (best.0 - step, best.0 + step);
    let mut c = b - gr * (b - a);
    let mut d = a + gr * (b - a);
    let mut fc = circle_objective(freqs, s21, c);
    let mut fd = circle_objective(freqs, s21, d);
    for _ in 0..70 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = circle_objective(freqs, s21, c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = circle_objective(freqs, s21, d);
        }
    }
    0.5 * (a + b)
}

/// Estimate the electrical delay τ of a sweep.
///
/// Minimizes the best-fit-circle residual of {S21(f)·e^{+2πifτ}} over a
/// bracket seeded by the endpoint group delay. Requires at least 64 points
/// spanning well beyond the linewidth. Fails with `NoResonanceFound` when
/// the delay-corrected data carries no circle above the noise floor.
pub fn estimate_delay(sweep: &FrequencySweep) -> Result<f64> {
    if sweep.len() < 64 {
        return Err(Error::InsufficientData(format!(
            "delay estimation needs >= 64 points, got {}",
            sweep.len()
        )));
    }
    check_resonance_prominence(sweep.s21())?;
    let tau = delay_search(sweep.frequencies(), sweep.s21());
    let corrected = apply_delay(sweep.frequencies(), sweep.s21(), tau);
    let sigma = noise_sigma(&corrected);
    let scale = {
        let mut mags: Vec<f64> = corrected.iter().map(|z| z.norm()).collect();
        median(&mut mags)
    };
    match fit_circle(&corrected) {
        Ok(c) if 2.0 * c.radius >= (5.0 * sigma).max(1e-9 * scale) => Ok(tau),
        _ => Err(Error::NoResonanceFound(
            "delay-corrected circle diameter below the noise floor".into(),
        )),
    }
}

/// A resonance must dent |S21| visibly below its median, away from the
/// window edges; delay leaves |S21| untouched, so this runs on the raw
/// trace.
fn check_resonance_prominence(s21: &[Complex64]) -> Result<()> {
    let mags: Vec<f64> = s21.iter().map(|z| z.norm()).collect();
    let mut sorted = mags.clone();
    let med = median(&mut sorted);
    if med <= 0.0 {
        return Err(Error::NoResonanceFound("trace magnitude is zero".into()));
    }
    let (imin, min) = mags
        .iter()
        .cloned()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("non-empty");
    // magnitude noise: successive |S21| differences are N(0, 2σ²)
    let mut dm: Vec<f64> = mags.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    let sigma_mag = median(&mut dm) / (std::f64::consts::SQRT_2 * 0.6744897501960817);
    let depth = (med - min) / med;
    if depth < (5.0 * sigma_mag / med).max(1e-7) {
        return Err(Error::NoResonanceFound(format!(
            "no dip above the noise floor (relative depth {depth:.3e})"
        )));
    }
    // a dip pinned to the first/last samples is a tail of a resonance
    // outside the window, not a fittable dip
    let edge = (mags.len() / 50).max(1);
    if imin < edge || imin >= mags.len() - edge {
        return Err(Error::NoResonanceFound(
            "magnitude minimum sits at the window edge".into(),
        ));
    }
    Ok(())
}

fn wrap_angle(a: f64) -> f64 {
    let mut a = a.rem_euclid(2.0 * PI);
    if a > PI {
        a -= 2.0 * PI;
    }
    a
}

struct ModelTerms {
    env: Complex64,
    dip: Complex64,
    denom: Complex64,
}

fn model_terms(
    f: f64,
    f_r: f64,
    q_l: f64,
    q_c: f64,
    phi: f64,
    a: f64,
    alpha: f64,
    tau: f64,
) -> ModelTerms {
    let env = a * Complex64::from_polar(1.0, alpha - 2.0 * PI * f * tau);
    let denom = Complex64::new(1.0, 2.0 * q_l * (f / f_r - 1.0));
    let dip = (q_l / q_c) * Complex64::from_polar(1.0, phi) / denom;
    ModelTerms { env, dip, denom }
}

/// One full pipeline pass (circle → phase → geometry → refinement)
/// starting from a fixed delay seed.
fn refine_from_delay(freqs: &[f64], z: &[Complex64], tau0: f64) -> Result<lm::LmOutcome> {
    let n = freqs.len();
    let f_lo = freqs[0];
    let f_hi = freqs[n - 1];
    let span = f_hi - f_lo;
    let f_c = 0.5 * (f_lo + f_hi);

    let corrected = apply_delay(freqs, z, tau0);
    let circ = fit_circle(&corrected).map_err(|e| match e {
        Error::DegenerateGeometry(msg) => Error::NoResonanceFound(msg),
        other => other,
    })?;
    let sigma = noise_sigma(&corrected);
    let scale = {
        let mut mags: Vec<f64> = corrected.iter().map(|c| c.norm()).collect();
        median(&mut mags)
    };
    if 2.0 * circ.radius < (5.0 * sigma).max(1e-9 * scale) {
        return Err(Error::NoResonanceFound(
            "delay-corrected circle diameter below the noise floor".into(),
        ));
    }

    // phase fit on the origin-centered circle
    let centered: Vec<Complex64> = corrected.iter().map(|p| p - circ.center).collect();
    let ph = fit_phase(freqs, &centered)?;
    if ph.f_r < f_lo || ph.f_r > f_hi {
        return Err(Error::NoResonanceFound(format!(
            "fitted resonance {:.6e} Hz outside the sweep window",
            ph.f_r
        )));
    }

    // environment and coupling from the off-resonant point
    // P_off = c − r·e^{iθ0} is the f→±∞ limit of the corrected model
    let p_off = circ.center - circ.radius * Complex64::from_polar(1.0, ph.theta0);
    let a0 = p_off.norm();
    if a0 <= 0.0 {
        return Err(Error::NoResonanceFound(
            "off-resonant point at the origin".into(),
        ));
    }
    let alpha0 = p_off.im.atan2(p_off.re);
    let q_c0 = ph.q_l * a0 / (2.0 * circ.radius);
    let phi0 = wrap_angle(PI + ph.theta0 - alpha0);

    // simultaneous refinement of [u, lnQl, lnQc, φ, ln a, α, τ·span]
    let freqs_owned: Vec<f64> = freqs.to_vec();
    let data: Vec<Complex64> = z.to_vec();
    let unpack = move |x: &[f64]| -> Option<(f64, f64, f64, f64, f64, f64, f64)> {
        let f_r = f_c + x[0] * span;
        let q_l = x[1].exp();
        let q_c = x[2].exp();
        let a = x[4].exp();
        let tau = x[6] / span;
        if !(f_r > 0.0) || !q_l.is_finite() || !q_c.is_finite() || !a.is_finite() {
            return None;
        }
        Some((f_r, q_l, q_c, x[3], a, x[5], tau))
    };
    let residuals = {
        let freqs_owned = freqs_owned.clone();
        let data = data.clone();
        move |x: &[f64]| -> Option<DVector<f64>> {
            let (f_r, q_l, q_c, phi, a, alpha, tau) = unpack(x)?;
            let mut r = DVector::zeros(2 * n);
            for (i, (&f, d)) in freqs_owned.iter().zip(&data).enumerate() {
                let t = model_terms(f, f_r, q_l, q_c, phi, a, alpha, tau);
                let s = t.env * (Complex64::new(1.0, 0.0) - t.dip);
                r[2 * i] = s.re - d.re;
                r[2 * i + 1] = s.im - d.im;
            }
            Some(r)
        }
    };
    let jacobian = {
        let freqs_owned = freqs_owned.clone();
        move |x: &[f64]| -> Option<DMatrix<f64>> {
            let (f_r, q_l, q_c, phi, a, alpha, tau) = unpack(x)?;
            let mut j = DMatrix::zeros(2 * n, 7);
            for (i, &f) in freqs_owned.iter().enumerate() {
                let t = model_terms(f, f_r, q_l, q_c, phi, a, alpha, tau);
                let s = t.env * (Complex64::new(1.0, 0.0) - t.dip);
                let at = t.env * t.dip; // A·T
                let col: [Complex64; 7] = [
                    // ∂S/∂u = A·T·(2iQl/D)·(−f/f_r²)·span
                    at * Complex64::new(0.0, 2.0 * q_l) / t.denom * (-f / (f_r * f_r)) * span,
                    // ∂S/∂lnQl = −A·T/D
                    -at / t.denom,
                    // ∂S/∂lnQc = +A·T
                    at,
                    // ∂S/∂φ = −i·A·T
                    Complex64::new(0.0, -1.0) * at,
                    // ∂S/∂ln a = S
                    s,
                    // ∂S/∂α = iS
                    Complex64::new(0.0, 1.0) * s,
                    // ∂S/∂τ' = −2πi(f/span)·S
                    Complex64::new(0.0, -2.0 * PI * f / span) * s,
                ];
                for (k, c) in col.iter().enumerate() {
                    j[(2 * i, k)] = c.re;
                    j[(2 * i + 1, k)] = c.im;
                }
            }
            Some(j)
        }
    };

    let x0 = [
        (ph.f_r - f_c) / span,
        ph.q_l.ln(),
        q_c0.ln(),
        phi0,
        a0.ln(),
        alpha0,
        tau0 * span,
    ];
    lm::minimize(residuals, Some(jacobian), &x0, &LmOptions::default())
}

/// Fit the full notch model to a sweep.
///
/// The delay is the one parameter with a multimodal landscape (its error
/// wraps with period 1/span), so the refinement is started from several
/// delay seeds — the circle-residual search plus wing-slope candidates —
/// and the lowest-cost converged solution wins. Returns best-effort
/// parameters with `quality.converged = false` when the refinement stalls;
/// hard failures (`NoResonanceFound`, `InsufficientData`) are errors.
///
/// One resonance per window: traces holding several dips must be split
/// before fitting (the initialization locks onto the deepest one).
pub fn fit_notch(sweep: &FrequencySweep) -> Result<NotchFitResult> {
    let n = sweep.len();
    if n < 16 {
        return Err(Error::InsufficientData(format!(
            "notch fit needs >= 16 points, got {n}"
        )));
    }
    let freqs = sweep.frequencies();
    let z = sweep.s21();
    check_resonance_prominence(z)?;

    let f_lo = freqs[0];
    let f_hi = freqs[n - 1];
    let span = f_hi - f_lo;
    let f_c = 0.5 * (f_lo + f_hi);

    let tau_wing = wing_slope_delay(freqs, z);
    let mut candidates = vec![delay_search(freqs, z)];
    for k in [0.0, -0.15, 0.15, -0.3, 0.3] {
        candidates.push(tau_wing + k / span);
    }

    // acceptably converged when the residuals reach the noise floor; the
    // noise estimate needs the delay winding removed first or baseline
    // steps masquerade as noise
    let sigma_est = noise_sigma(&apply_delay(freqs, z, tau_wing));
    let good_cost = (1.3 * n as f64 * sigma_est * sigma_est).max(1e-18);

    let mut best: Option<lm::LmOutcome> = None;
    let mut first_err: Option<Error> = None;
    for tau0 in candidates {
        match refine_from_delay(freqs, z, tau0) {
            Ok(out) => {
                let better =
                    out.cost.is_finite() && best.as_ref().map_or(true, |b| out.cost < b.cost);
                if better {
                    let done = out.cost <= good_cost;
                    best = Some(out);
                    if done {
                        break;
                    }
                }
            }
            Err(e) => {
                if first_err.is_none() {
                    first_err = Some(e);
                }
            }
        }
    }
    let mut out = match best {
        Some(out) => out,
        None => return Err(first_err.expect("at least one candidate ran")),
    };
    // A stalled fit that flattened the dip still pins the delay extremely
    // well (its model is the bare baseline); re-seeding from that delay
    // drops a clean resonance circle out of the data.
    for _ in 0..2 {
        if out.cost <= good_cost {
            break;
        }
        match refine_from_delay(freqs, z, out.x[6] / span) {
            Ok(again) if again.cost < out.cost => out = again,
            _ => break,
        }
    }

    let f_r = f_c + out.x[0] * span;
    let q_l = out.x[1].exp();
    let q_c_mag = out.x[2].exp();
    let phi = wrap_angle(out.x[3]);
    let amplitude = out.x[4].exp();
    let alpha = wrap_angle(out.x[5]);
    let tau = out.x[6] / span;

    if f_r < f_lo || f_r > f_hi {
        return Err(Error::NoResonanceFound(format!(
            "refined resonance {f_r:.6e} Hz outside the sweep window"
        )));
    }

    let inv_q_i = 1.0 / q_l - phi.cos() / q_c_mag;
    let q_i = if inv_q_i > 0.0 {
        1.0 / inv_q_i
    } else {
        f64::NAN
    };
    // converged: the optimizer stopped properly, or the residuals already
    // sit at the trace's noise floor
    let converged = (out.converged || out.cost <= good_cost) && q_i.is_finite();

    let mut unc = NotchUncertainties {
        f_r: f64::NAN,
        q_l: f64::NAN,
        q_c_mag: f64::NAN,
        phi: f64::NAN,
        amplitude: f64::NAN,
        phase: f64::NAN,
        delay: f64::NAN,
        q_i: f64::NAN,
    };
    if let Some(cov) = &out.covariance {
        unc.f_r = span * cov[(0, 0)].max(0.0).sqrt();
        unc.q_l = q_l * cov[(1, 1)].max(0.0).sqrt();
        unc.q_c_mag = q_c_mag * cov[(2, 2)].max(0.0).sqrt();
        unc.phi = cov[(3, 3)].max(0.0).sqrt();
        unc.amplitude = amplitude * cov[(4, 4)].max(0.0).sqrt();
        unc.phase = cov[(5, 5)].max(0.0).sqrt();
        unc.delay = cov[(6, 6)].max(0.0).sqrt() / span;
        if q_i.is_finite() {
            // gradient of Q_i in the internal coordinates (lnQl, lnQc, φ)
            let g = [
                q_i * q_i / q_l,
                -q_i * q_i * phi.cos() / q_c_mag,
                -q_i * q_i * phi.sin() / q_c_mag,
            ];
            let idx = [1usize, 2, 3];
            let mut var = 0.0;
            for (gi, &i) in g.iter().zip(&idx) {
                for (gj, &jj) in g.iter().zip(&idx) {
                    var += gi * gj * cov[(i, jj)];
                }
            }
            unc.q_i = var.max(0.0).sqrt();
        }
    }

    let residual_rms = (2.0 * out.cost / n as f64).sqrt();
    Ok(NotchFitResult {
        params: NotchParameters {
            f_r,
            q_l,
            q_c_mag,
            phi,
            amplitude,
            phase: alpha,
            delay: tau,
        },
        q_i,
        uncertainties: unc,
        quality: FitQuality {
            residual_rms,
            n_points: n,
            converged,
        },
    })
}
