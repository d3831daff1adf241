//! Small damped-least-squares (Levenberg–Marquardt) engine used by the
//! trace and sweep fits.
//!
//! Minimizes 0.5·‖r(x)‖² for a residual closure r: Rⁿ → Rᵐ. The Jacobian is
//! taken by forward finite differences (relative step 1e-6) unless the
//! caller supplies an analytic one. Damping uses the Marquardt scaling
//! λ·diag(JᵀJ), which keeps the step well conditioned for badly scaled
//! parameters. The residual closure may return `None` to veto a trial point
//! (out-of-range parameters); the step is then rejected and damping raised.

use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};

#[derive(Debug, Clone)]
pub struct LmOptions {
    pub max_iterations: usize,
    /// Relative cost-reduction tolerance.
    pub ftol: f64,
    /// Relative step-size tolerance.
    pub xtol: f64,
    /// Relative finite-difference step.
    pub fd_rel_step: f64,
    pub lambda_init: f64,
}

impl Default for LmOptions {
    fn default() -> Self {
        Self {
            max_iterations: 200,
            ftol: 1e-14,
            xtol: 1e-14,
            fd_rel_step: 1e-6,
            lambda_init: 1e-3,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LmOutcome {
    pub x: Vec<f64>,
    /// 0.5·‖r‖² at the solution.
    pub cost: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Covariance of the parameters, scaled by the reduced chi-square
    /// (residual variance); `None` when JᵀJ is singular at the solution.
    pub covariance: Option<DMatrix<f64>>,
    pub n_residuals: usize,
}

impl LmOutcome {
    pub fn sigma(&self, i: usize) -> f64 {
        self.covariance
            .as_ref()
            .map(|c| c[(i, i)].max(0.0).sqrt())
            .unwrap_or(f64::NAN)
    }
}

/// Minimize the sum of squared residuals starting from `x0`.
///
/// `residuals(x)` returns the residual vector, or `None` if `x` is outside
/// the feasible region. `jacobian`, when given, must return the m×n matrix
/// ∂r_i/∂x_j at `x`.
pub fn minimize<R, J>(
    residuals: R,
    jacobian: Option<J>,
    x0: &[f64],
    opts: &LmOptions,
) -> Result<LmOutcome>
where
    R: Fn(&[f64]) -> Option<DVector<f64>>,
    J: Fn(&[f64]) -> Option<DMatrix<f64>>,
{
    let n = x0.len();
    let mut x = x0.to_vec();
    let mut r = residuals(&x)
        .ok_or_else(|| Error::NonConvergence("initial parameters are infeasible".into()))?;
    if r.len() < n {
        return Err(Error::InsufficientData(format!(
            "{} residuals for {} parameters",
            r.len(),
            n
        )));
    }
    let m = r.len();
    let mut cost = 0.5 * r.norm_squared();
    if !cost.is_finite() {
        return Err(Error::NonConvergence(
            "non-finite residuals at the initial point".into(),
        ));
    }
    let mut lambda = opts.lambda_init;
    let mut converged = false;
    let mut iterations = 0;

    let eval_jacobian = |x: &[f64], r: &DVector<f64>| -> Option<DMatrix<f64>> {
        if let Some(jac) = &jacobian {
            return jac(x);
        }
        let mut j = DMatrix::zeros(m, n);
        let mut xp = x.to_vec();
        for col in 0..n {
            let h = opts.fd_rel_step * xp[col].abs().max(1.0);
            let orig = xp[col];
            xp[col] = orig + h;
            let rp = residuals(&xp).or_else(|| {
                xp[col] = orig - h;
                residuals(&xp).map(|rm| {
                    // backward difference fallback, flip sign via (r - rm)
                    let mut flipped = rm.clone();
                    for i in 0..m {
                        flipped[i] = 2.0 * r[i] - rm[i];
                    }
                    flipped
                })
            })?;
            for i in 0..m {
                j[(i, col)] = (rp[i] - r[i]) / h;
            }
            xp[col] = orig;
        }
        Some(j)
    };

    let mut jt_j_final: Option<DMatrix<f64>> = None;
    let mut cost_history: Vec<f64> = vec![cost];

    for iter in 0..opts.max_iterations {
        iterations = iter + 1;
        let j = match eval_jacobian(&x, &r) {
            Some(j) => j,
            None => break,
        };
        let jt = j.transpose();
        let a = &jt * &j;
        let g = &jt * &r;
        jt_j_final = Some(a.clone());

        if cost <= 1e-300 {
            converged = true;
            break;
        }

        let mut accepted = false;
        for _ in 0..40 {
            let mut damped = a.clone();
            let floor = 1e-30 * (0..n).map(|i| a[(i, i)]).fold(0.0f64, f64::max).max(1e-300);
            for i in 0..n {
                damped[(i, i)] = a[(i, i)] + lambda * a[(i, i)].max(floor);
            }
            let step = match damped.cholesky() {
                Some(ch) => ch.solve(&(-&g)),
                None => {
                    lambda *= 10.0;
                    continue;
                }
            };
            let x_trial: Vec<f64> = x.iter().zip(step.iter()).map(|(xi, di)| xi + di).collect();
            if let Some(r_trial) = residuals(&x_trial) {
                let cost_trial = 0.5 * r_trial.norm_squared();
                if cost_trial.is_finite() && cost_trial < cost {
                    let reduction = cost - cost_trial;
                    let small_step = step
                        .iter()
                        .zip(&x)
                        .all(|(d, xi)| d.abs() <= opts.xtol * (xi.abs() + opts.xtol));
                    x = x_trial;
                    r = r_trial;
                    cost = cost_trial;
                    lambda = (lambda * 0.1).max(1e-14);
                    accepted = true;
                    if reduction <= opts.ftol * cost.max(1e-300) || small_step {
                        converged = true;
                    }
                    break;
                }
            }
            lambda *= 10.0;
            if lambda > 1e14 {
                break;
            }
        }
        if !accepted {
            // no step at any damping improves the cost: a numerical
            // minimum, unless we never moved at all
            converged = iter > 0 || g.amax() <= 1e-8 * (1.0 + cost);
            break;
        }
        // stall detection: creeping at the rounding floor counts as
        // converged
        cost_history.push(cost);
        if cost_history.len() >= 9 {
            let old = cost_history[cost_history.len() - 9];
            if cost >= old * (1.0 - 1e-9) {
                converged = true;
            }
        }
        if converged {
            break;
        }
    }

    let covariance = jt_j_final.and_then(|a| {
        let dof = (m.saturating_sub(n)).max(1) as f64;
        let s2 = 2.0 * cost / dof;
        a.try_inverse().map(|inv| inv * s2)
    });

    Ok(LmOutcome {
        x,
        cost,
        iterations,
        converged,
        covariance,
        n_residuals: m,
    })
}

/// Convenience alias for calls without an analytic Jacobian.
pub type NoJacobian = fn(&[f64]) -> Option<DMatrix<f64>>;

/// Sin-parameterized box transform mapping an unbounded internal variable
/// to (lo, hi); used to impose fit bounds without constrained solvers.
#[derive(Debug, Clone, Copy)]
pub struct BoxTransform {
    pub lo: f64,
    pub hi: f64,
}

impl BoxTransform {
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(hi > lo);
        Self { lo, hi }
    }

    pub fn to_external(&self, t: f64) -> f64 {
        let mid = 0.5 * (self.lo + self.hi);
        let half = 0.5 * (self.hi - self.lo);
        mid + half * t.sin()
    }

    pub fn to_internal(&self, x: f64) -> f64 {
        let mid = 0.5 * (self.lo + self.hi);
        let half = 0.5 * (self.hi - self.lo);
        // clamp strictly inside the box so the derivative stays finite
        let u = ((x - mid) / half).clamp(-0.999_999, 0.999_999);
        u.asin()
    }

    /// |dx/dt| at internal value t, for propagating uncertainties.
    pub fn derivative(&self, t: f64) -> f64 {
        0.5 * (self.hi - self.lo) * t.cos().abs()
    }
}
