//! The commutative algebra of 2×2 matrices `[[a, b], [-b, a]]`.
//!
//! Every block the solver manipulates (`E`, `B`, `D`, `J` and the functions
//! of them) lives here. The algebra is isomorphic to the complex numbers via
//! `(a, b) ↔ a - i b`, which is the map that makes a planar block acting on
//! `(u, v)` agree with complex multiplication of `u + i v`.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// `det` below which [`PlanarMatrix::sinhc`] switches to its Taylor series.
pub const SINHC_SERIES_THRESHOLD: f64 = 1e-4;

/// The matrix `[[a, b], [-b, a]]`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PlanarMatrix {
    pub a: f64,
    pub b: f64,
}

impl PlanarMatrix {
    pub const ZERO: Self = Self { a: 0.0, b: 0.0 };
    pub const IDENTITY: Self = Self { a: 1.0, b: 0.0 };

    pub const fn new(a: f64, b: f64) -> Self {
        Self { a, b }
    }

    pub const fn scalar(a: f64) -> Self {
        Self { a, b: 0.0 }
    }

    pub fn det(self) -> f64 {
        self.a * self.a + self.b * self.b
    }

    pub fn to_array(self) -> [[f64; 2]; 2] {
        [[self.a, self.b], [-self.b, self.a]]
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.a, -self.b)
    }

    pub fn from_complex(z: Complex64) -> Self {
        Self { a: z.re, b: -z.im }
    }

    pub fn is_finite(self) -> bool {
        self.a.is_finite() && self.b.is_finite()
    }

    /// Applies the matrix to the column `(p, q)`.
    pub fn apply(self, p: f64, q: f64) -> (f64, f64) {
        (self.a * p + self.b * q, -self.b * p + self.a * q)
    }

    pub fn inverse(self) -> Result<Self> {
        let det = self.det();
        if det == 0.0 {
            return Err(Error::Singular);
        }
        Ok(Self { a: self.a / det, b: -self.b / det })
    }

    /// The root `D` with `D·D = x·self`.
    ///
    /// Branch: `b ≥ 0`, and `a` carries the sign of the off-diagonal part of
    /// `x·self` (non-negative when that part vanishes). For `self = (-G, H)`
    /// this is `a = ±√(x(|∫f| - G)/2)`, `b = √(x(|∫f| + G)/2)` with
    /// `2ab = Hx`. Both `±D` are valid roots; everything downstream is even
    /// in `D`.
    pub fn scaled_sqrt(self, x: f64) -> Self {
        let p = self * x;
        let r = p.a.hypot(p.b);
        if r == 0.0 {
            return Self::ZERO;
        }
        // take the larger root directly and derive the other from 2ab = p.b
        if p.a >= 0.0 {
            let a = (0.5 * (r + p.a)).sqrt();
            let b = p.b.abs() / (2.0 * a);
            Self { a: if p.b < 0.0 { -a } else { a }, b }
        } else {
            let b = (0.5 * (r - p.a)).sqrt();
            let a = p.b / (2.0 * b);
            Self { a, b }
        }
    }

    /// `(e^a cos b, e^a sin b)`.
    pub fn exp(self) -> Self {
        let ea = self.a.exp();
        let (s, c) = self.b.sin_cos();
        Self { a: ea * c, b: ea * s }
    }

    pub fn cosh(self) -> Self {
        let (s, c) = self.b.sin_cos();
        Self { a: self.a.cosh() * c, b: self.a.sinh() * s }
    }

    pub fn sinh(self) -> Self {
        let (s, c) = self.b.sin_cos();
        Self { a: self.a.sinh() * c, b: self.a.cosh() * s }
    }

    /// `D⁻¹ sinh D`, with the removable point at `D = 0` filled in.
    ///
    /// Even in `D`. Below [`SINHC_SERIES_THRESHOLD`] the series
    /// `Σ_{n≤3} D^{2n}/(2n+1)!` is used.
    pub fn sinhc(self) -> Self {
        if self.det() < SINHC_SERIES_THRESHOLD {
            let d2 = self * self;
            // Horner in D²: 1 + D²/6 (1 + D²/20 (1 + D²/42))
            let inner = Self::IDENTITY + d2 * (1.0 / 42.0);
            let mid = Self::IDENTITY + d2 * inner * (1.0 / 20.0);
            Self::IDENTITY + d2 * mid * (1.0 / 6.0)
        } else {
            let inv = self.inverse().expect("det above series threshold");
            inv * self.sinh()
        }
    }

    pub fn max_abs_diff(self, other: Self) -> f64 {
        (self.a - other.a).abs().max((self.b - other.b).abs())
    }
}

impl Add for PlanarMatrix {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self { a: self.a + rhs.a, b: self.b + rhs.b }
    }
}

impl Sub for PlanarMatrix {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self { a: self.a - rhs.a, b: self.b - rhs.b }
    }
}

impl Neg for PlanarMatrix {
    type Output = Self;
    fn neg(self) -> Self {
        Self { a: -self.a, b: -self.b }
    }
}

impl Mul for PlanarMatrix {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self {
            a: self.a * rhs.a - self.b * rhs.b,
            b: self.a * rhs.b + rhs.a * self.b,
        }
    }
}

impl Mul<f64> for PlanarMatrix {
    type Output = Self;
    fn mul(self, k: f64) -> Self {
        Self { a: self.a * k, b: self.b * k }
    }
}

impl Mul<PlanarMatrix> for f64 {
    type Output = PlanarMatrix;
    fn mul(self, m: PlanarMatrix) -> PlanarMatrix {
        m * self
    }
}
