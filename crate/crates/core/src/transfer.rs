//! The 4×4 transfer matrix of the complex problem, written over the planar
//! algebra.
//!
//! With `F = (u, v, u', v')` and `y = u + i v`, the system is
//! `F' = [[0, 1], [E, 0]] F` where `E = (-g, h)` in planar form. Dropping the
//! ordering of the exponential gives, for the interval `α → x` of length
//! `ℓ = x - α`,
//!
//! ```text
//! B = ∫_α^x E,   D² = ℓ B,
//! Q = [[cosh D, ℓ D⁻¹ sinh D], [B D⁻¹ sinh D, cosh D]]
//! ```
//!
//! The optional first-order correction multiplies the upper block row by
//! `exp(-J/2)` and the lower by `exp(+J/2)` with
//! `J = ∫_α^x (t - α) E(t) - B(t) dt = ∫_α^x (2t - x - α) E(t) dt`.

use std::ops::Mul;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::planar::PlanarMatrix;
use crate::profiles::{moment_integral, CoefficientProfile, QuadratureConfig};

/// Solution and derivative, `(u, v, u', v')` with `y = u + i v`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct State {
    pub u: f64,
    pub v: f64,
    pub du: f64,
    pub dv: f64,
}

impl State {
    pub const fn new(u: f64, v: f64, du: f64, dv: f64) -> Self {
        Self { u, v, du, dv }
    }

    /// A state with `v = v' = 0`.
    pub const fn real(u: f64, du: f64) -> Self {
        Self { u, v: 0.0, du, dv: 0.0 }
    }

    pub fn from_complex(y: Complex64, dy: Complex64) -> Self {
        Self { u: y.re, v: y.im, du: dy.re, dv: dy.im }
    }

    pub fn y(&self) -> Complex64 {
        Complex64::new(self.u, self.v)
    }

    pub fn dy(&self) -> Complex64 {
        Complex64::new(self.du, self.dv)
    }

    pub fn to_array(&self) -> [f64; 4] {
        [self.u, self.v, self.du, self.dv]
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|c| c.is_finite())
    }

    pub fn max_abs_diff(&self, other: &State) -> f64 {
        self.to_array()
            .iter()
            .zip(other.to_array())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Propagation from `start` to `end`; `end < start` is a backward step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub start: f64,
    pub end: f64,
}

impl Interval {
    pub const fn new(start: f64, end: f64) -> Self {
        Self { start, end }
    }

    pub fn length(&self) -> f64 {
        self.end - self.start
    }

    fn check(&self, profile: &CoefficientProfile) -> Result<()> {
        profile.check(self.start)?;
        profile.check(self.end)
    }
}

/// `E(x) = (-g(x), h(x))`.
pub fn build_e(profile: &CoefficientProfile, x: f64) -> Result<PlanarMatrix> {
    profile.check(x)?;
    Ok(PlanarMatrix::new(-profile.g_at(x)?, profile.h_at(x)?))
}

/// `B = ∫ E = (-G, H)` over the interval.
pub fn build_b(profile: &CoefficientProfile, interval: Interval, cfg: &QuadratureConfig) -> Result<PlanarMatrix> {
    interval.check(profile)?;
    let (a, x) = (interval.start, interval.end);
    Ok(PlanarMatrix::new(-profile.g_integral(a, x, cfg)?, profile.h_integral(a, x, cfg)?))
}

/// The root `D` with `D² = (x - α) B`.
pub fn build_d(b: PlanarMatrix, interval: Interval) -> PlanarMatrix {
    b.scaled_sqrt(interval.length())
}

/// The uncorrected blocks `C = cosh D`, `S = ℓ D⁻¹ sinh D`, `T = B D⁻¹ sinh D`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Blocks {
    pub c: PlanarMatrix,
    pub s: PlanarMatrix,
    pub t: PlanarMatrix,
}

/// `T` is formed as `B · sinhc(D)` rather than `S · B / ℓ`, so nothing is
/// singular at `ℓ = 0` or where `∫f` vanishes.
pub fn build_blocks(profile: &CoefficientProfile, interval: Interval, cfg: &QuadratureConfig) -> Result<Blocks> {
    let b = build_b(profile, interval, cfg)?;
    Ok(blocks_from_b(b, interval.length()))
}

pub(crate) fn blocks_from_b(b: PlanarMatrix, length: f64) -> Blocks {
    let d = b.scaled_sqrt(length);
    let sinhc = d.sinhc();
    Blocks { c: d.cosh(), s: sinhc * length, t: b * sinhc }
}

/// Correction exponent `J = ∫_α^x (2t - x - α) E(t) dt`.
///
/// For real profiles this is `(γ, 0)` with γ the moment integral of `g`.
pub fn build_j(profile: &CoefficientProfile, interval: Interval, cfg: &QuadratureConfig) -> Result<PlanarMatrix> {
    interval.check(profile)?;
    let (a, x) = (interval.start, interval.end);
    let ga = moment_integral(profile.g(), a, x, cfg)?;
    let hb = match profile.h() {
        Some(h) => -moment_integral(h, a, x, cfg)?,
        None => 0.0,
    };
    Ok(PlanarMatrix::new(ga, hb))
}

/// Transfer matrix over one interval, optionally with the commutator
/// correction.
pub fn build_q(
    profile: &CoefficientProfile,
    interval: Interval,
    corrected: bool,
    cfg: &QuadratureConfig,
) -> Result<TransferMatrix> {
    let blocks = build_blocks(profile, interval, cfg)?;
    let correction = if corrected { Some(build_j(profile, interval, cfg)?) } else { None };
    Ok(TransferMatrix::from_blocks(blocks, correction))
}

pub type ComplexMatrix2 = [[Complex64; 2]; 2];

/// A 4×4 real transfer matrix stored as four planar blocks.
///
/// Rows and columns are ordered `(u, v, u', v')`. Products of such matrices
/// stay in this form because the planar algebra is closed and commutative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferMatrix {
    pub upper_left: PlanarMatrix,
    pub upper_right: PlanarMatrix,
    pub lower_left: PlanarMatrix,
    pub lower_right: PlanarMatrix,
}

impl Default for TransferMatrix {
    fn default() -> Self {
        Self::IDENTITY
    }
}

impl TransferMatrix {
    pub const IDENTITY: Self = Self {
        upper_left: PlanarMatrix::IDENTITY,
        upper_right: PlanarMatrix::ZERO,
        lower_left: PlanarMatrix::ZERO,
        lower_right: PlanarMatrix::IDENTITY,
    };

    /// Assembles `W·P` where `W = diag(exp(-J/2), exp(J/2))` when a
    /// correction `J` is given.
    pub fn from_blocks(blocks: Blocks, correction: Option<PlanarMatrix>) -> Self {
        let (top, bottom) = match correction {
            Some(j) => ((j * -0.5).exp(), (j * 0.5).exp()),
            None => (PlanarMatrix::IDENTITY, PlanarMatrix::IDENTITY),
        };
        Self {
            upper_left: top * blocks.c,
            upper_right: top * blocks.s,
            lower_left: bottom * blocks.t,
            lower_right: bottom * blocks.c,
        }
    }

    pub fn apply(&self, s: State) -> State {
        let (u1, v1) = self.upper_left.apply(s.u, s.v);
        let (u2, v2) = self.upper_right.apply(s.du, s.dv);
        let (du1, dv1) = self.lower_left.apply(s.u, s.v);
        let (du2, dv2) = self.lower_right.apply(s.du, s.dv);
        State { u: u1 + u2, v: v1 + v2, du: du1 + du2, dv: dv1 + dv2 }
    }

    /// `self` followed by `later`, i.e. the product `later · self`.
    pub fn then(&self, later: &TransferMatrix) -> TransferMatrix {
        *later * *self
    }

    /// Determinant of the full 4×4 matrix.
    ///
    /// With commuting blocks, `det [[A, B], [C, D]] = det(AD - BC)`.
    pub fn det(&self) -> f64 {
        (self.upper_left * self.lower_right - self.upper_right * self.lower_left).det()
    }

    pub fn inverse(&self) -> Result<TransferMatrix> {
        let delta = self.upper_left * self.lower_right - self.upper_right * self.lower_left;
        let inv = delta.inverse().map_err(|_| Error::Singular)?;
        Ok(Self {
            upper_left: inv * self.lower_right,
            upper_right: -(inv * self.upper_right),
            lower_left: -(inv * self.lower_left),
            lower_right: inv * self.upper_left,
        })
    }

    pub fn to_array(&self) -> [[f64; 4]; 4] {
        let mut out = [[0.0; 4]; 4];
        let blocks = [
            (0, 0, self.upper_left),
            (0, 2, self.upper_right),
            (2, 0, self.lower_left),
            (2, 2, self.lower_right),
        ];
        for (r, c, block) in blocks {
            let m = block.to_array();
            for i in 0..2 {
                for j in 0..2 {
                    out[r + i][c + j] = m[i][j];
                }
            }
        }
        out
    }

    /// The equivalent complex map `(y, y') ↦ (y, y')`.
    pub fn to_complex(&self) -> ComplexMatrix2 {
        [
            [self.upper_left.to_complex(), self.upper_right.to_complex()],
            [self.lower_left.to_complex(), self.lower_right.to_complex()],
        ]
    }

    pub fn max_abs_diff(&self, other: &TransferMatrix) -> f64 {
        [
            self.upper_left.max_abs_diff(other.upper_left),
            self.upper_right.max_abs_diff(other.upper_right),
            self.lower_left.max_abs_diff(other.lower_left),
            self.lower_right.max_abs_diff(other.lower_right),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.upper_left.is_finite()
            && self.upper_right.is_finite()
            && self.lower_left.is_finite()
            && self.lower_right.is_finite()
    }
}

impl Mul for TransferMatrix {
    type Output = TransferMatrix;

    fn mul(self, rhs: TransferMatrix) -> TransferMatrix {
        TransferMatrix {
            upper_left: self.upper_left * rhs.upper_left + self.upper_right * rhs.lower_left,
            upper_right: self.upper_left * rhs.upper_right + self.upper_right * rhs.lower_right,
            lower_left: self.lower_left * rhs.upper_left + self.lower_right * rhs.lower_left,
            lower_right: self.lower_left * rhs.upper_right + self.lower_right * rhs.lower_right,
        }
    }
}
