//! Sectioned propagation over long ranges.
//!
//! The single-step propagators are accurate near their origin only, so the
//! range is split into sections and each section starts from the state the
//! previous one delivered at its end.

use crate::basis::psi;
use crate::error::{Error, Result};
use crate::profiles::{CoefficientProfile, QuadratureConfig};
use crate::transfer::{build_q, Interval, State, TransferMatrix};

/// Sections per unit of `√max|f| · length` used by [`default_sections`].
pub const SECTIONS_PER_WAVENUMBER_LENGTH: f64 = 64.0;

/// Monotone breakpoints `x₀ = α, x₁, …, x_N`.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    points: Vec<f64>,
}

impl Partition {
    /// Validates explicit breakpoints; they may be unequally spaced.
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidArgument("a partition needs at least two points".into()));
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidArgument("partition points must be finite".into()));
        }
        let first = points[0];
        let last = points[points.len() - 1];
        let monotone = if first < last {
            points.windows(2).all(|w| w[0] < w[1])
        } else if first > last {
            points.windows(2).all(|w| w[0] > w[1])
        } else {
            // zero-length range: every section is degenerate
            points.iter().all(|&p| p == first)
        };
        if !monotone {
            return Err(Error::InvalidArgument("partition must be strictly monotone".into()));
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn start(&self) -> f64 {
        self.points[0]
    }

    pub fn end(&self) -> f64 {
        self.points[self.points.len() - 1]
    }

    pub fn sections(&self) -> impl Iterator<Item = Interval> + '_ {
        self.points.windows(2).map(|w| Interval::new(w[0], w[1]))
    }

    pub fn section_count(&self) -> usize {
        self.points.len() - 1
    }
}

/// `n` equal sections from `alpha` to `end` (descending when `end < alpha`).
pub fn make_partition(alpha: f64, end: f64, n: usize) -> Result<Partition> {
    if n == 0 {
        return Err(Error::InvalidArgument("need at least one section".into()));
    }
    let step = (end - alpha) / n as f64;
    let mut points: Vec<f64> = (0..n).map(|i| alpha + step * i as f64).collect();
    points.push(end);
    Partition::new(points)
}

/// Section count that resolves the local wavelength: 64 per unit of
/// `√max|f| · |end - alpha|`, at least one.
pub fn default_sections(profile: &CoefficientProfile, alpha: f64, end: f64) -> Result<usize> {
    let peak = profile.max_abs_on(alpha, end, 257)?;
    let n = (SECTIONS_PER_WAVENUMBER_LENGTH * peak.sqrt() * (end - alpha).abs()).ceil();
    Ok((n as usize).max(1))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub x: f64,
    pub state: State,
}

/// Samples of the propagated solution; the first is the initial condition.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionTrace {
    pub samples: Vec<Sample>,
}

impl SolutionTrace {
    pub fn last(&self) -> &Sample {
        self.samples.last().expect("trace is never empty")
    }
}

/// One step of either propagator: the Ψ basis for real profiles, the full
/// planar-block transfer matrix otherwise.
fn step(
    profile: &CoefficientProfile,
    from: f64,
    to: f64,
    s: State,
    corrected: bool,
    cfg: &QuadratureConfig,
) -> Result<State> {
    if profile.is_real() {
        let b = psi(profile, from, to, corrected, cfg)?;
        let (u, du) = b.apply(s.u, s.du);
        let (v, dv) = b.apply(s.v, s.dv);
        Ok(State { u, v, du, dv })
    } else {
        Ok(build_q(profile, Interval::new(from, to), corrected, cfg)?.apply(s))
    }
}

/// Solves the initial-value problem across `partition`.
///
/// Each section emits `samples_per_section` equally spaced points, the last
/// of which is the section end. Every sample is produced from its section's
/// start state by a fresh sub-interval step.
pub fn solve_ivp(
    profile: &CoefficientProfile,
    partition: &Partition,
    s0: State,
    corrected: bool,
    samples_per_section: usize,
    cfg: &QuadratureConfig,
) -> Result<SolutionTrace> {
    if !s0.is_finite() {
        return Err(Error::InvalidArgument("initial state must be finite".into()));
    }
    if samples_per_section == 0 {
        return Err(Error::InvalidArgument("need at least one sample per section".into()));
    }
    profile.check(partition.start())?;
    profile.check(partition.end())?;

    let mut samples = Vec::with_capacity(1 + partition.section_count() * samples_per_section);
    samples.push(Sample { x: partition.start(), state: s0 });
    let mut start_state = s0;
    for section in partition.sections() {
        let width = section.length();
        for j in 1..=samples_per_section {
            let x = if j == samples_per_section {
                section.end
            } else {
                section.start + width * j as f64 / samples_per_section as f64
            };
            let state = step(profile, section.start, x, start_state, corrected, cfg)?;
            samples.push(Sample { x, state });
        }
        start_state = samples.last().expect("just pushed").state;
    }
    Ok(SolutionTrace { samples })
}

/// Product of transfer matrices applied in sequence: `Qs[0]` first.
pub fn chain(qs: &[TransferMatrix]) -> TransferMatrix {
    qs.iter().fold(TransferMatrix::IDENTITY, |acc, q| *q * acc)
}

/// Per-section transfer matrices over `partition`.
pub fn section_transfers(
    profile: &CoefficientProfile,
    partition: &Partition,
    corrected: bool,
    cfg: &QuadratureConfig,
) -> Result<Vec<TransferMatrix>> {
    partition.sections().map(|s| build_q(profile, s, corrected, cfg)).collect()
}

/// Transfer matrix across the whole partition.
pub fn chained_transfer(
    profile: &CoefficientProfile,
    partition: &Partition,
    corrected: bool,
    cfg: &QuadratureConfig,
) -> Result<TransferMatrix> {
    Ok(chain(&section_transfers(profile, partition, corrected, cfg)?))
}
