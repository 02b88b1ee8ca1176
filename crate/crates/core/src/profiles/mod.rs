//! Coefficient profiles `f(x) = g(x) + i h(x)` and the integrals built from them.

mod expr;
mod quadrature;

pub use expr::{parse_expression, BinaryOp, Expression, Function};
pub use quadrature::{integrate_fn, QuadratureConfig};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Integral of `expr` over `[a, b]` (signed; `b < a` is allowed).
pub fn integrate(expr: &Expression, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<f64> {
    integrate_fn(|t| expr.eval(t), a, b, cfg)
}

/// `∫_α^x (x + α - 2t) expr(t) dt`.
///
/// This is the single-quadrature form of the nested integral
/// `∫_α^x ( -(t - α) g(t) + ∫_α^t g(s) ds ) dt`, obtained by swapping the
/// order of integration in the inner term. With `expr = g` it is the
/// correction exponent γ(x; α).
pub fn moment_integral(expr: &Expression, alpha: f64, x: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if expr.is_constant() || alpha == x {
        // odd about the midpoint
        return Ok(0.0);
    }
    let weight_sum = x + alpha;
    integrate_fn(|t| Ok((weight_sum - 2.0 * t) * expr.eval(t)?), alpha, x, cfg)
}

/// A coefficient `f = g + i h` on a closed interval.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientProfile {
    g: Expression,
    h: Option<Expression>,
    lo: f64,
    hi: f64,
}

impl CoefficientProfile {
    pub fn new(g: Expression, h: Option<Expression>, lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) || lo > hi {
            return Err(Error::InvalidArgument(format!("invalid profile domain [{lo}, {hi}]")));
        }
        Ok(Self { g, h, lo, hi })
    }

    /// Real profile `f = g`.
    pub fn real(g: Expression, lo: f64, hi: f64) -> Result<Self> {
        Self::new(g, None, lo, hi)
    }

    /// Parses `g` and optional `h` from text.
    pub fn parse(g: &str, h: Option<&str>, lo: f64, hi: f64) -> Result<Self> {
        let g = parse_expression(g)?;
        let h = h.map(parse_expression).transpose()?;
        Self::new(g, h, lo, hi)
    }

    pub fn g(&self) -> &Expression {
        &self.g
    }

    pub fn h(&self) -> Option<&Expression> {
        self.h.as_ref()
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn is_real(&self) -> bool {
        self.h.is_none()
    }

    /// Same coefficients on a different interval.
    pub fn with_domain(&self, lo: f64, hi: f64) -> Result<Self> {
        Self::new(self.g.clone(), self.h.clone(), lo, hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        let slack = 1e-12 * (1.0 + self.lo.abs().max(self.hi.abs()));
        x >= self.lo - slack && x <= self.hi + slack
    }

    pub fn check(&self, x: f64) -> Result<()> {
        if x.is_finite() && self.contains(x) {
            Ok(())
        } else {
            Err(Error::OutOfDomain { x, lo: self.lo, hi: self.hi })
        }
    }

    pub fn g_at(&self, x: f64) -> Result<f64> {
        self.g.eval(x)
    }

    pub fn h_at(&self, x: f64) -> Result<f64> {
        match &self.h {
            Some(h) => h.eval(x),
            None => Ok(0.0),
        }
    }

    pub fn f_at(&self, x: f64) -> Result<Complex64> {
        Ok(Complex64::new(self.g_at(x)?, self.h_at(x)?))
    }

    /// `G(x; α) = ∫_α^x g`.
    pub fn g_integral(&self, alpha: f64, x: f64, cfg: &QuadratureConfig) -> Result<f64> {
        self.check(alpha)?;
        self.check(x)?;
        integrate(&self.g, alpha, x, cfg)
    }

    /// `H(x; α) = ∫_α^x h`; exactly zero for real profiles.
    pub fn h_integral(&self, alpha: f64, x: f64, cfg: &QuadratureConfig) -> Result<f64> {
        self.check(alpha)?;
        self.check(x)?;
        match &self.h {
            Some(h) => integrate(h, alpha, x, cfg),
            None => Ok(0.0),
        }
    }

    /// Largest `|f|` over `samples` equally spaced points of `[a, b]`.
    pub fn max_abs_on(&self, a: f64, b: f64, samples: usize) -> Result<f64> {
        let n = samples.max(2) - 1;
        (0..=n)
            .map(|i| self.f_at(a + (b - a) * i as f64 / n as f64).map(|f| f.norm()))
            .try_fold(0.0f64, |acc, v| v.map(|v| acc.max(v)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    fn expr(text: &str) -> Expression {
        parse_expression(text).unwrap()
    }

    #[test]
    fn integrate_examples() {
        assert_abs_diff_eq!(integrate(&expr("x"), 0.0, 1.0, &cfg()).unwrap(), 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(integrate(&expr("cos(x)"), 0.0, PI / 2.0, &cfg()).unwrap(), 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(integrate(&expr("x^2"), 0.0, 2.0, &cfg()).unwrap(), 8.0 / 3.0, epsilon = 1e-12);
        assert!(matches!(integrate(&expr("1/x"), -1.0, 1.0, &cfg()), Err(Error::Domain { .. })));
    }

    #[test]
    fn g_and_h_integrals() {
        let p = CoefficientProfile::parse("4", None, -1.0, 2.0).unwrap();
        assert_abs_diff_eq!(p.g_integral(0.0, 1.0, &cfg()).unwrap(), 4.0, epsilon = 1e-14);
        assert_eq!(p.g_integral(0.7, 0.7, &cfg()).unwrap(), 0.0);
        assert_eq!(p.h_integral(0.0, 1.0, &cfg()).unwrap(), 0.0);
        let p = CoefficientProfile::parse("x", Some("1"), 0.0, 1.0).unwrap();
        assert_abs_diff_eq!(p.g_integral(0.0, 1.0, &cfg()).unwrap(), 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(p.h_integral(0.0, 1.0, &cfg()).unwrap(), 1.0, epsilon = 1e-14);
        assert!(matches!(p.g_integral(0.0, 1.5, &cfg()), Err(Error::OutOfDomain { .. })));
    }

    #[test]
    fn moment_integral_examples() {
        assert_eq!(moment_integral(&expr("3.5"), -0.3, 2.0, &cfg()).unwrap(), 0.0);
        assert_abs_diff_eq!(moment_integral(&expr("x"), 0.0, 1.0, &cfg()).unwrap(), -1.0 / 6.0, epsilon = 1e-14);
        assert_abs_diff_eq!(moment_integral(&expr("x"), 0.0, 2.0, &cfg()).unwrap(), -8.0 / 6.0, epsilon = 1e-13);
    }

    #[test]
    fn rejects_inverted_domain() {
        assert!(CoefficientProfile::parse("1", None, 1.0, 0.0).is_err());
    }

    // The literal nested form, kept independent of `moment_integral`.
    fn nested_gamma(g: &Expression, alpha: f64, x: f64) -> f64 {
        let c = cfg();
        integrate_fn(
            |t| Ok(-(t - alpha) * g.eval(t)? + integrate(g, alpha, t, &c)?),
            alpha,
            x,
            &c,
        )
        .unwrap()
    }

    fn polynomial() -> impl Strategy<Value = Expression> {
        proptest::collection::vec(-3.0f64..3.0, 1..5).prop_map(|coeffs| {
            let terms: Vec<String> =
                coeffs.iter().enumerate().map(|(k, c)| format!("({c})*x^{k}")).collect();
            expr(&terms.join(" + "))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn moment_integral_matches_nested_form(g in polynomial(), alpha in -2.0f64..2.0, len in -2.0f64..2.0) {
            let x = alpha + len;
            let single = moment_integral(&g, alpha, x, &cfg()).unwrap();
            let nested = nested_gamma(&g, alpha, x);
            prop_assert!((single - nested).abs() <= 1e-9 * (1.0 + nested.abs()), "{} vs {}", single, nested);
        }

        #[test]
        fn integrate_is_additive(a in -3.0f64..3.0, d1 in 0.0f64..2.0, d2 in 0.0f64..2.0) {
            let e = expr("cos(3*x) + x^2 - exp(x/2)");
            let (b, c) = (a + d1, a + d1 + d2);
            let whole = integrate(&e, a, c, &cfg()).unwrap();
            let parts = integrate(&e, a, b, &cfg()).unwrap() + integrate(&e, b, c, &cfg()).unwrap();
            prop_assert!((whole - parts).abs() <= 10.0 * 1e-10 * (1.0 + whole.abs()));
        }
    }
}
