//! Algebraic circle fit (Taubin formulation, Newton on the characteristic
//! polynomial). Initialization-free and exact for noiseless circular data.

use crate::error::{Error, Result};
use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Circle {
    pub center: Complex64,
    pub radius: f64,
}

impl Circle {
    /// RMS of the signed radial distances of `points` from the circle.
    pub fn residual_rms(&self, points: &[Complex64]) -> f64 {
        let sum: f64 = points
            .iter()
            .map(|p| {
                let d = (p - self.center).norm() - self.radius;
                d * d
            })
            .sum();
        (sum / points.len() as f64).sqrt()
    }
}

/// Fit a circle to complex points by minimizing the Taubin-normalized
/// algebraic distance. Requires at least 3 points; 3 exact points give the
/// circumscribed circle. Collinear or coincident input is rejected with
/// `DegenerateGeometry`.
pub fn fit_circle(points: &[Complex64]) -> Result<Circle> {
    let n = points.len();
    if n < 3 {
        return Err(Error::InsufficientData(format!(
            "circle fit needs >= 3 points, got {n}"
        )));
    }
    let inv_n = 1.0 / n as f64;
    let mean_x: f64 = points.iter().map(|p| p.re).sum::<f64>() * inv_n;
    let mean_y: f64 = points.iter().map(|p| p.im).sum::<f64>() * inv_n;

    let (mut mxx, mut myy, mut mxy, mut mxz, mut myz, mut mzz) = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
    for p in points {
        let u = p.re - mean_x;
        let v = p.im - mean_y;
        let z = u * u + v * v;
        mxx += u * u;
        myy += v * v;
        mxy += u * v;
        mxz += u * z;
        myz += v * z;
        mzz += z * z;
    }
    mxx *= inv_n;
    myy *= inv_n;
    mxy *= inv_n;
    mxz *= inv_n;
    myz *= inv_n;
    mzz *= inv_n;

    let mz = mxx + myy; // mean squared distance from centroid
    if mz <= 0.0 || !mz.is_finite() {
        return Err(Error::DegenerateGeometry("all points coincide".into()));
    }
    let cov_xy = mxx * myy - mxy * mxy;
    let var_z = mzz - mz * mz;
    let a3 = 4.0 * mz;
    let a2 = -3.0 * mz * mz - mzz;
    let a1 = var_z * mz + 4.0 * cov_xy * mz - mxz * mxz - myz * myz;
    let a0 = mxz * (mxz * myy - myz * mxy) + myz * (myz * mxx - mxz * mxy) - var_z * cov_xy;
    let a22 = a2 + a2;
    let a33 = a3 + a3 + a3;

    // Newton from 0: the Taubin root is the characteristic-polynomial zero
    // closest to zero.
    let mut eta = 0.0f64;
    let mut val = a0;
    for _ in 0..64 {
        let deriv = a1 + eta * (a22 + eta * a33);
        if deriv == 0.0 || !deriv.is_finite() {
            break;
        }
        let eta_new = eta - val / deriv;
        if !eta_new.is_finite() || eta_new == eta {
            break;
        }
        let val_new = a0 + eta_new * (a1 + eta_new * (a2 + eta_new * a3));
        if val_new.abs() >= val.abs() {
            break;
        }
        eta = eta_new;
        val = val_new;
    }

    let det = eta * eta - eta * mz + cov_xy;
    if !det.is_finite() || det.abs() < 1e-30 * mz * mz {
        return Err(Error::DegenerateGeometry(
            "points are collinear (circle radius diverges)".into(),
        ));
    }
    let xc = (mxz * (myy - eta) - myz * mxy) / det / 2.0;
    let yc = (myz * (mxx - eta) - mxz * mxy) / det / 2.0;
    let radius = (xc * xc + yc * yc + mz).sqrt();
    if !radius.is_finite() || radius > 1e9 * mz.sqrt() {
        return Err(Error::DegenerateGeometry(
            "points are collinear (circle radius diverges)".into(),
        ));
    }
    Ok(Circle {
        center: Complex64::new(xc + mean_x, yc + mean_y),
        radius,
    })
}
