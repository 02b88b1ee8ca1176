//! Bloch wavenumbers and band scans for periodic coefficients.
//!
//! A solution of the form `e^{iκx}Θ(x)` with `Θ` periodic is an eigenvector
//! of the one-period map, with eigenvalue `e^{iκL}`.

use crate::error::{Error, Result};
use crate::oracle::complex_det;
use crate::profiles::{BinaryOp, CoefficientProfile, Expression, QuadratureConfig};
use crate::propagate::{chained_transfer, make_partition};
use crate::transfer::ComplexMatrix2;
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

/// Largest accepted `|det(M) - 1|` for a monodromy matrix.
pub const DET_TOLERANCE: f64 = 1e-6;
/// A point propagates when both `|λ|` are this close to 1.
pub const PROPAGATING_TOLERANCE: f64 = 1e-6;

/// One-period map on `(y, y')` from the chained transfer matrix.
pub fn monodromy(
    profile: &CoefficientProfile,
    x0: f64,
    period: f64,
    n_sections: usize,
    corrected: bool,
    cfg: &QuadratureConfig,
) -> Result<ComplexMatrix2> {
    if !(period > 0.0 && period.is_finite()) {
        return Err(Error::InvalidArgument("period must be positive".into()));
    }
    profile.check(x0)?;
    profile.check(x0 + period)?;
    let partition = make_partition(x0, x0 + period, n_sections)?;
    Ok(chained_transfer(profile, &partition, corrected, cfg)?.to_complex())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochResult {
    pub monodromy: ComplexMatrix2,
    pub eigenvalues: [Complex64; 2],
    /// Folded into `(-π/L, π/L]`.
    pub kappas: [Complex64; 2],
    pub period: f64,
}

impl BlochResult {
    pub fn is_propagating(&self) -> bool {
        self.eigenvalues.iter().all(|l| (l.norm() - 1.0).abs() <= PROPAGATING_TOLERANCE)
    }
}

/// Folds `Re κ` into `(-π/L, π/L]`.
pub fn fold_kappa(kappa: Complex64, period: f64) -> Complex64 {
    let zone = 2.0 * PI / period;
    let edge = PI / period;
    let mut re = kappa.re - zone * (kappa.re / zone).round();
    if re <= -edge {
        re += zone;
    } else if re > edge {
        re -= zone;
    }
    Complex64::new(re, kappa.im)
}

/// Eigenvalues of `m` and the matching wavenumbers `κ = -i·ln(λ)/L`.
pub fn bloch_wavenumbers(m: &ComplexMatrix2, period: f64) -> Result<BlochResult> {
    if !(period > 0.0 && period.is_finite()) {
        return Err(Error::InvalidArgument("period must be positive".into()));
    }
    let det = complex_det(m);
    if !det.is_finite() || (det - 1.0).norm() > DET_TOLERANCE {
        return Err(Error::DeterminantMismatch { det: det.norm() });
    }
    let half_trace = (m[0][0] + m[1][1]) * 0.5;
    let root = (half_trace * half_trace - det).sqrt();
    let eigenvalues = [half_trace + root, half_trace - root];
    let i = Complex64::i();
    let kappas = eigenvalues.map(|l| fold_kappa(-i * l.ln() / period, period));
    Ok(BlochResult { monodromy: *m, eigenvalues, kappas, period })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BandPoint {
    pub energy: f64,
    pub result: Result<BlochResult>,
}

impl BandPoint {
    pub fn kappas(&self) -> Option<[Complex64; 2]> {
        self.result.as_ref().ok().map(|r| r.kappas)
    }

    pub fn is_propagating(&self) -> Option<bool> {
        self.result.as_ref().ok().map(BlochResult::is_propagating)
    }
}

/// Energies `lo, …, hi` inclusive; a single point sits at `lo`.
pub fn energy_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..count)
            .map(|k| if k + 1 == count { hi } else { lo + (hi - lo) * k as f64 / (count - 1) as f64 })
            .collect(),
    }
}

/// `g_E(x) = E - V(x)` on the cell `[-L/2, L/2]`.
pub fn band_profile(potential: &Expression, energy: f64, period: f64) -> Result<CoefficientProfile> {
    let g = Expression::binary(BinaryOp::Sub, Expression::constant(energy), potential.clone());
    CoefficientProfile::real(g, -0.5 * period, 0.5 * period)
}

/// Bloch wavenumbers across `E ∈ [lo, hi]`, evaluated in parallel.
///
/// A failing energy is recorded in its point and does not stop the scan.
pub fn band_scan(
    potential: &Expression,
    energies: (f64, f64, usize),
    period: f64,
    n_sections: usize,
    corrected: bool,
    cfg: &QuadratureConfig,
) -> Result<Vec<BandPoint>> {
    let (lo, hi, count) = energies;
    if count == 0 {
        return Err(Error::InvalidArgument("energy count must be at least 1".into()));
    }
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(Error::InvalidArgument("energy range must be finite".into()));
    }
    if !(period > 0.0 && period.is_finite()) {
        return Err(Error::InvalidArgument("period must be positive".into()));
    }
    if n_sections == 0 {
        return Err(Error::InvalidArgument("need at least one section".into()));
    }
    cfg.validate()?;
    Ok(energy_grid(lo, hi, count)
        .into_par_iter()
        .map(|energy| {
            let result = band_profile(potential, energy, period)
                .and_then(|p| monodromy(&p, -0.5 * period, period, n_sections, corrected, cfg))
                .and_then(|m| bloch_wavenumbers(&m, period));
            BandPoint { energy, result }
        })
        .collect())
}

/// Distance between wavenumbers, with real parts compared modulo `2π/L`.
fn kappa_distance(a: Complex64, b: Complex64, period: f64) -> f64 {
    let zone = 2.0 * PI / period;
    let d = a.re - b.re;
    let re = d - zone * (d / zone).round();
    re.hypot(a.im - b.im)
}

/// Largest change of the κ pair over the sampled cell origins, relative to
/// the first sample.
///
/// Pairs are matched in whichever order is closer.
pub fn kappa_x_independence(
    profile: &CoefficientProfile,
    period: f64,
    x0_samples: &[f64],
    n_sections: usize,
    corrected: bool,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let Some((&first, rest)) = x0_samples.split_first() else {
        return Err(Error::InvalidArgument("need at least one cell origin".into()));
    };
    let kappas = |x0: f64| -> Result<[Complex64; 2]> {
        let m = monodromy(profile, x0, period, n_sections, corrected, cfg)?;
        Ok(bloch_wavenumbers(&m, period)?.kappas)
    };
    let reference = kappas(first)?;
    let mut worst = 0.0f64;
    for &x0 in rest {
        let k = kappas(x0)?;
        let straight = kappa_distance(k[0], reference[0], period).max(kappa_distance(k[1], reference[1], period));
        let swapped = kappa_distance(k[0], reference[1], period).max(kappa_distance(k[1], reference[0], period));
        worst = worst.max(straight.min(swapped));
    }
    Ok(worst)
}
