//! Phase-versus-frequency fit of the origin-centered resonance circle.
//!
//! After delay correction and translation of the fitted circle to the
//! origin, the winding angle follows
//!
//! ```text
//! θ(f) = θ0 + 2·arctan(2·Q_l·(1 − f/f_r))
//! ```
//!
//! which pins f_r and Q_l independently of amplitude information.

use crate::error::{Error, Result};
use crate::lm::{self, LmOptions};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

#[derive(Debug, Clone, Copy)]
pub struct PhaseFit {
    pub f_r: f64,
    pub q_l: f64,
    pub theta0: f64,
    pub converged: bool,
}

/// Remove 2π jumps so consecutive samples differ by less than π.
pub fn unwrap_angles(angles: &mut [f64]) {
    for i in 1..angles.len() {
        let mut d = angles[i] - angles[i - 1];
        while d > std::f64::consts::PI {
            angles[i] -= 2.0 * std::f64::consts::PI;
            d = angles[i] - angles[i - 1];
        }
        while d < -std::f64::consts::PI {
            angles[i] += 2.0 * std::f64::consts::PI;
            d = angles[i] - angles[i - 1];
        }
    }
}

/// Fit θ(f) = θ0 + 2·arctan(2·Q_l·(1 − f/f_r)) to origin-centered points.
pub fn fit_phase(freqs: &[f64], centered: &[Complex64]) -> Result<PhaseFit> {
    if freqs.len() != centered.len() || freqs.len() < 8 {
        return Err(Error::InsufficientData(format!(
            "phase fit needs >= 8 matched points, got {}",
            freqs.len().min(centered.len())
        )));
    }
    let n = freqs.len();
    let mut theta: Vec<f64> = centered.iter().map(|z| z.im.atan2(z.re)).collect();
    unwrap_angles(&mut theta);

    let f_lo = freqs.iter().cloned().fold(f64::INFINITY, f64::min);
    let f_hi = freqs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let span = (f_hi - f_lo).abs().max(f64::MIN_POSITIVE);
    let f_c = 0.5 * (f_lo + f_hi);

    // steepest-phase-slope initialization for f_r and Q_l
    let mut best = (0usize, 0.0f64);
    for i in 1..n - 1 {
        let df = freqs[i + 1] - freqs[i - 1];
        if df == 0.0 {
            continue;
        }
        let slope = ((theta[i + 1] - theta[i - 1]) / df).abs();
        if slope > best.1 {
            best = (i, slope);
        }
    }
    let f_r0 = freqs[best.0];
    // |dθ/df| at resonance = 4·Q_l/f_r
    let q_l0 = (best.1 * f_r0 / 4.0).max(1.0);
    let theta00 = theta[best.0];

    let theta = std::sync::Arc::new(theta);
    let freqs_v: Vec<f64> = freqs.to_vec();

    // parameters: [(f_r - f_c)/span, ln Q_l, θ0]
    let model = {
        let theta = theta.clone();
        let freqs_v = freqs_v.clone();
        move |x: &[f64]| -> Option<DVector<f64>> {
            let f_r = f_c + x[0] * span;
            let q_l = x[1].exp();
            if !(f_r > 0.0) || !q_l.is_finite() {
                return None;
            }
            Some(DVector::from_iterator(
                n,
                freqs_v
                    .iter()
                    .zip(theta.iter())
                    .map(|(&f, &th)| x[2] + 2.0 * (2.0 * q_l * (1.0 - f / f_r)).atan() - th),
            ))
        }
    };
    let jac = {
        let freqs_v = freqs_v.clone();
        move |x: &[f64]| -> Option<DMatrix<f64>> {
            let f_r = f_c + x[0] * span;
            let q_l = x[1].exp();
            if !(f_r > 0.0) || !q_l.is_finite() {
                return None;
            }
            let mut j = DMatrix::zeros(n, 3);
            for (i, &f) in freqs_v.iter().enumerate() {
                let t = 2.0 * q_l * (1.0 - f / f_r);
                let den = 1.0 + t * t;
                // dθ/df_r = 2/(1+t²)·2Q_l·f/f_r²
                j[(i, 0)] = 2.0 / den * 2.0 * q_l * f / (f_r * f_r) * span;
                // dθ/dlnQ_l = 2/(1+t²)·t
                j[(i, 1)] = 2.0 / den * t;
                j[(i, 2)] = 1.0;
            }
            Some(j)
        }
    };

    let x0 = [(f_r0 - f_c) / span, q_l0.ln(), theta00];
    let out = lm::minimize(model, Some(jac), &x0, &LmOptions::default())?;
    if !out.converged {
        return Err(Error::NonConvergence(format!(
            "phase fit stopped after {} iterations",
            out.iterations
        )));
    }
    Ok(PhaseFit {
        f_r: f_c + out.x[0] * span,
        q_l: out.x[1].exp(),
        theta0: out.x[2],
        converged: out.converged,
    })
}
