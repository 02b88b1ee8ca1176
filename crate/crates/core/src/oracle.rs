//! Brute-force reference solutions: classical RK4 on the four real
//! components, with step halving until two successive answers agree.
//!
//! Shares nothing with the transfer-matrix path except profile evaluation.

use crate::error::{Error, Result};
use crate::profiles::CoefficientProfile;
use crate::transfer::{ComplexMatrix2, State};
use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    /// Step used for the first attempt.
    pub initial_step: f64,
    /// Largest allowed component difference between successive halvings,
    /// relative to `max(1, |state|)`.
    pub tolerance: f64,
    pub max_steps: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self { initial_step: 1e-2, tolerance: 1e-12, max_steps: 1 << 22 }
    }
}

type Vec4 = [f64; 4];

fn derivative(profile: &CoefficientProfile, x: f64, y: &Vec4) -> Result<Vec4> {
    let g = profile.g_at(x)?;
    let h = profile.h_at(x)?;
    // y'' = -(g + ih)(u + iv)
    Ok([y[2], y[3], -g * y[0] + h * y[1], -h * y[0] - g * y[1]])
}

fn axpy(y: &Vec4, k: &Vec4, h: f64) -> Vec4 {
    [y[0] + h * k[0], y[1] + h * k[1], y[2] + h * k[2], y[3] + h * k[3]]
}

/// Fixed-step RK4 with `steps` equal steps.
pub fn rk4_fixed(profile: &CoefficientProfile, alpha: f64, s0: State, x_end: f64, steps: usize) -> Result<State> {
    let steps = steps.max(1);
    let h = (x_end - alpha) / steps as f64;
    let mut y = s0.to_array();
    for i in 0..steps {
        let x = alpha + h * i as f64;
        let k1 = derivative(profile, x, &y)?;
        let k2 = derivative(profile, x + 0.5 * h, &axpy(&y, &k1, 0.5 * h))?;
        let k3 = derivative(profile, x + 0.5 * h, &axpy(&y, &k2, 0.5 * h))?;
        let k4 = derivative(profile, x + h, &axpy(&y, &k3, h))?;
        for c in 0..4 {
            y[c] += h / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
        }
    }
    Ok(State::new(y[0], y[1], y[2], y[3]))
}

/// Integrates from `alpha` to `x_end`, halving the step until successive
/// answers agree; returns the finer one.
pub fn rk_solve(profile: &CoefficientProfile, alpha: f64, s0: State, x_end: f64, cfg: &OracleConfig) -> Result<State> {
    if !(cfg.initial_step > 0.0 && cfg.tolerance > 0.0) {
        return Err(Error::InvalidArgument("oracle step and tolerance must be positive".into()));
    }
    if !s0.is_finite() {
        return Err(Error::InvalidArgument("initial state must be finite".into()));
    }
    profile.check(alpha)?;
    profile.check(x_end)?;
    if alpha == x_end {
        return Ok(s0);
    }
    let mut steps = ((x_end - alpha).abs() / cfg.initial_step).ceil().max(1.0) as usize;
    let mut coarse = rk4_fixed(profile, alpha, s0, x_end, steps)?;
    loop {
        steps *= 2;
        if steps > cfg.max_steps {
            return Err(Error::StepUnderflow { steps });
        }
        let fine = rk4_fixed(profile, alpha, s0, x_end, steps)?;
        let scale = fine.to_array().iter().fold(1.0f64, |m, c| m.max(c.abs()));
        if fine.max_abs_diff(&coarse) <= cfg.tolerance * scale {
            return Ok(fine);
        }
        coarse = fine;
    }
}

/// One-period map on `(y, y')`, columns from the unit initial conditions.
pub fn oracle_monodromy(
    profile: &CoefficientProfile,
    x0: f64,
    period: f64,
    cfg: &OracleConfig,
) -> Result<ComplexMatrix2> {
    let end = x0 + period;
    let first = rk_solve(profile, x0, State::real(1.0, 0.0), end, cfg)?;
    let second = rk_solve(profile, x0, State::real(0.0, 1.0), end, cfg)?;
    Ok([[first.y(), second.y()], [first.dy(), second.dy()]])
}

pub fn complex_det(m: &ComplexMatrix2) -> Complex64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}
