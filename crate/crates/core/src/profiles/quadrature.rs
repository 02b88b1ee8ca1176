//! Globally adaptive Simpson quadrature with interval-halving error control.
//!
//! The panel with the largest error estimate is split until the estimates
//! sum below the tolerance, so endpoint singularities in a derivative (such
//! as `√t` at 0) only cost refinement where they are.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Tolerances for [`integrate_fn`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_depth: u32,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self { rel_tol: 1e-10, abs_tol: 1e-12, max_depth: 40 }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::InvalidArgument("quadrature tolerances must be positive".into()));
        }
        if self.max_depth == 0 {
            return Err(Error::InvalidArgument("quadrature depth must be at least 1".into()));
        }
        Ok(())
    }
}

// Halvings always taken before the error test may accept anything. Guards
// against a coarse three-point rule hitting the zeros of an oscillating
// integrand and reporting a spurious zero error.
const FORCED_LEVELS: u32 = 2;

const MAX_PANELS: usize = 1 << 22;

/// Integrates `f` over `[a, b]`.
///
/// `integrate_fn(f, b, a)` is exactly `-integrate_fn(f, a, b)` and an empty
/// interval gives exactly zero. Any error returned by the integrand aborts
/// the whole integral.
pub fn integrate_fn<F>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    cfg.validate()?;
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidArgument(format!("non-finite integration bounds [{a}, {b}]")));
    }
    if a == b {
        return Ok(0.0);
    }
    if a > b {
        return integrate_fn(f, b, a, cfg).map(|v| -v);
    }

    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a)?, f(m)?, f(b)?);
    let scale = simpson(a, b, fa.abs(), fm.abs(), fb.abs());
    let eps = cfg.abs_tol.max(cfg.rel_tol * scale);
    let not_converged = || Error::QuadratureNotConverged { a, b, depth: cfg.max_depth };

    let mut pending = vec![Panel::new(&f, a, b, fa, fm, fb, simpson(a, b, fa, fm, fb), 0)?];
    for _ in 0..FORCED_LEVELS {
        let mut next = Vec::with_capacity(2 * pending.len());
        for p in pending {
            if p.depth + 1 >= cfg.max_depth {
                return Err(not_converged());
            }
            let (l, r) = p.split(&f)?;
            next.extend([l, r]);
        }
        pending = next;
    }

    let mut total: f64 = pending.iter().map(|p| p.error).sum();
    let mut heap: BinaryHeap<Panel> = pending.into_iter().collect();
    while total > eps {
        let worst = heap.pop().expect("heap never empties");
        if worst.depth + 1 >= cfg.max_depth || heap.len() + 2 > MAX_PANELS {
            return Err(not_converged());
        }
        let (l, r) = worst.split(&f)?;
        if !(worst.a < l.b && l.b < worst.b) {
            return Err(not_converged());
        }
        total += l.error + r.error - worst.error;
        heap.extend([l, r]);
        if total <= eps {
            // re-sum to shed drift from the running updates
            total = heap.iter().map(|p| p.error).sum();
        }
    }

    let mut panels = heap.into_vec();
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    Ok(panels.iter().map(|p| p.value).sum())
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

/// A panel with its two half-panel Simpson estimates already evaluated.
#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    flm: f64,
    frm: f64,
    left: f64,
    right: f64,
    /// Richardson-corrected estimate.
    value: f64,
    error: f64,
    depth: u32,
}

impl Panel {
    #[allow(clippy::too_many_arguments)]
    fn new<F>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, depth: u32) -> Result<Self>
    where
        F: Fn(f64) -> Result<f64>,
    {
        let m = 0.5 * (a + b);
        let (flm, frm) = (f(0.5 * (a + m))?, f(0.5 * (m + b))?);
        let left = simpson(a, m, fa, flm, fm);
        let right = simpson(m, b, fm, frm, fb);
        let delta = left + right - whole;
        Ok(Self {
            a,
            b,
            fa,
            fm,
            fb,
            flm,
            frm,
            left,
            right,
            value: left + right + delta / 15.0,
            error: delta.abs() / 15.0,
            depth,
        })
    }

    fn split<F>(&self, f: &F) -> Result<(Self, Self)>
    where
        F: Fn(f64) -> Result<f64>,
    {
        let m = 0.5 * (self.a + self.b);
        let d = self.depth + 1;
        Ok((
            Panel::new(f, self.a, m, self.fa, self.flm, self.fm, self.left, d)?,
            Panel::new(f, m, self.b, self.fm, self.frm, self.fb, self.right, d)?,
        ))
    }
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    // largest error first; position breaks ties so the order is total
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error).then_with(|| other.a.total_cmp(&self.a))
    }
}
