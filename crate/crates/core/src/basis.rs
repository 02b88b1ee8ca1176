//! Real-axis basis functions and the WKB pair they replace.
//!
//! For a real profile and `w = (x - α) ∫_α^x g`, the fundamental pair is
//!
//! ```text
//! Ψ₁ = e^{-γ/2} cos√w          Ψ₂ = e^{-γ/2} (x - α) sinc√w
//! Ψ₃ = -e^{+γ/2} (∫g) sinc√w   Ψ₄ = e^{+γ/2} cos√w
//! ```
//!
//! with `u(x) = Ψ₁ u(α) + Ψ₂ u'(α)` and `u'(x) = Ψ₃ u(α) + Ψ₄ u'(α)`. γ is
//! zero for the uncorrected basis. Unlike the WKB pair these stay finite
//! through turning points, and they meet the initial conditions exactly.
//!
//! The lower-right entry is Ψ₄, not Ψ₁: the two coincide only when γ = 0.

use std::cell::Cell;

use crate::error::{Error, Result};
use crate::profiles::{integrate_fn, moment_integral, CoefficientProfile, QuadratureConfig};

const SERIES_CUTOFF: f64 = 1e-8;

/// `cos√w`, continued to `cosh√(-w)` for negative `w`.
pub fn cos_sqrt(w: f64) -> f64 {
    if w.abs() < SERIES_CUTOFF {
        1.0 - w / 2.0 + w * w / 24.0
    } else if w > 0.0 {
        w.sqrt().cos()
    } else {
        (-w).sqrt().cosh()
    }
}

/// `sin√w / √w`, continued to `sinh√(-w) / √(-w)` for negative `w`.
pub fn sinc_sqrt(w: f64) -> f64 {
    if w.abs() < SERIES_CUTOFF {
        1.0 - w / 6.0 + w * w / 120.0
    } else if w > 0.0 {
        let r = w.sqrt();
        r.sin() / r
    } else {
        let r = (-w).sqrt();
        r.sinh() / r
    }
}

/// Values of Ψ₁..Ψ₄ at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisEval {
    pub psi1: f64,
    pub psi2: f64,
    pub psi3: f64,
    pub psi4: f64,
}

impl BasisEval {
    pub const IDENTITY: Self = Self { psi1: 1.0, psi2: 0.0, psi3: 0.0, psi4: 1.0 };

    pub fn wronskian(&self) -> f64 {
        self.psi1 * self.psi4 - self.psi2 * self.psi3
    }

    /// Carries `(u, u')` from α to x.
    pub fn apply(&self, u: f64, du: f64) -> (f64, f64) {
        (self.psi1 * u + self.psi2 * du, self.psi3 * u + self.psi4 * du)
    }

    pub fn to_array(&self) -> [f64; 4] {
        [self.psi1, self.psi2, self.psi3, self.psi4]
    }
}

/// Evaluates the basis at `x` for origin `alpha`.
pub fn psi(
    profile: &CoefficientProfile,
    alpha: f64,
    x: f64,
    corrected: bool,
    cfg: &QuadratureConfig,
) -> Result<BasisEval> {
    if !profile.is_real() {
        return Err(Error::ComplexProfile);
    }
    let g_int = profile.g_integral(alpha, x, cfg)?;
    let gamma = if corrected { moment_integral(profile.g(), alpha, x, cfg)? } else { 0.0 };
    let length = x - alpha;
    let w = length * g_int;
    let (cos, sinc) = (cos_sqrt(w), sinc_sqrt(w));
    let (down, up) = ((-0.5 * gamma).exp(), (0.5 * gamma).exp());
    Ok(BasisEval {
        psi1: down * cos,
        psi2: down * length * sinc,
        psi3: -up * g_int * sinc,
        psi4: up * cos,
    })
}

/// Central-difference derivatives `(Ψ₁'(α), Ψ₂'(α))` with step `1e-6`.
///
/// Uncorrected basis. The exact values are `(0, 1)` for any smooth `g`.
pub fn psi_derivatives_at_origin(
    profile: &CoefficientProfile,
    alpha: f64,
    cfg: &QuadratureConfig,
) -> Result<(f64, f64)> {
    const STEP: f64 = 1e-6;
    let ahead = psi(profile, alpha, alpha + STEP, false, cfg)?;
    let behind = psi(profile, alpha, alpha - STEP, false, cfg)?;
    Ok((
        (ahead.psi1 - behind.psi1) / (2.0 * STEP),
        (ahead.psi2 - behind.psi2) / (2.0 * STEP),
    ))
}

/// WKB pair `U₁ = k^{-1/2} cos∫k`, `U₂ = k^{-1/2} sin∫k` with `k = √g`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WkbEval {
    Finite { u1: f64, u2: f64 },
    /// `g ≤ 0` at `x`, or `g < 0` somewhere between α and x.
    TurningPoint,
}

impl WkbEval {
    pub fn is_finite(&self) -> bool {
        matches!(self, WkbEval::Finite { .. })
    }
}

pub fn wkb(profile: &CoefficientProfile, alpha: f64, x: f64, cfg: &QuadratureConfig) -> Result<WkbEval> {
    if !profile.is_real() {
        return Err(Error::ComplexProfile);
    }
    profile.check(alpha)?;
    profile.check(x)?;
    let gx = profile.g_at(x)?;
    if gx <= 0.0 {
        return Ok(WkbEval::TurningPoint);
    }
    // scan for sign changes the quadrature nodes might straddle
    const SCAN: usize = 256;
    for i in 0..=SCAN {
        let t = alpha + (x - alpha) * i as f64 / SCAN as f64;
        if profile.g_at(t)? < 0.0 {
            return Ok(WkbEval::TurningPoint);
        }
    }
    let negative = Cell::new(false);
    let phase = integrate_fn(
        |t| {
            let g = profile.g_at(t)?;
            if g < 0.0 {
                negative.set(true);
                return Ok(0.0);
            }
            Ok(g.sqrt())
        },
        alpha,
        x,
        cfg,
    )?;
    if negative.get() {
        return Ok(WkbEval::TurningPoint);
    }
    let amplitude = gx.sqrt().sqrt().recip();
    Ok(WkbEval::Finite { u1: amplitude * phase.cos(), u2: amplitude * phase.sin() })
}
