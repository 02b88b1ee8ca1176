use dtmm_core::basis::{psi, wkb, WkbEval};
use dtmm_core::bloch::{band_profile, band_scan};
use dtmm_core::oracle::{rk_solve, OracleConfig};
use dtmm_core::profiles::{CoefficientProfile, QuadratureConfig};
use dtmm_core::propagate::{default_sections, make_partition, solve_ivp, SolutionTrace};
use dtmm_core::Error;

use crate::config::{BandProblem, Problem, ProblemConfig};
use crate::number::g17;

/// Command-line settings that take precedence over the config file.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub sections: Option<usize>,
    pub corrected: Option<bool>,
    pub samples: Option<usize>,
}

#[derive(Debug, Clone, Default)]
pub struct BasisArgs {
    pub g: Option<String>,
    pub alpha: Option<f64>,
    pub x_max: Option<f64>,
}

/// Finished command output, produced before anything is written.
#[derive(Debug)]
pub struct Report {
    pub csv: Vec<u8>,
    pub summary: Option<String>,
    /// Set when the command completed but no result is usable.
    pub failed: bool,
}

impl Report {
    fn ok(csv: Vec<u8>) -> Self {
        Self { csv, summary: None, failed: false }
    }
}

fn corrected(cfg: &ProblemConfig, over: &Overrides) -> bool {
    over.corrected.or(cfg.corrected).unwrap_or(true)
}

fn positive(value: Option<usize>, what: &str) -> Result<Option<usize>, Error> {
    match value {
        Some(0) => Err(Error::InvalidArgument(format!("{what} must be at least 1"))),
        v => Ok(v),
    }
}

fn writer() -> csv::Writer<Vec<u8>> {
    csv::Writer::from_writer(Vec::new())
}

fn finish(w: csv::Writer<Vec<u8>>) -> Vec<u8> {
    w.into_inner().expect("writing to memory cannot fail")
}

fn row<const N: usize>(w: &mut csv::Writer<Vec<u8>>, fields: [String; N]) {
    w.write_record(fields).expect("writing to memory cannot fail");
}

fn propagate(problem: &Problem, over: &Overrides, corrected: bool) -> Result<SolutionTrace, Error> {
    let samples = positive(over.samples, "samples")?.unwrap_or(1);
    let n = match positive(over.sections, "sections")?.or(problem.sections) {
        Some(n) => n,
        None => default_sections(&problem.profile, problem.alpha, problem.end)?,
    };
    let partition = make_partition(problem.alpha, problem.end, n)?;
    solve_ivp(&problem.profile, &partition, problem.initial, corrected, samples, &QuadratureConfig::default())
}

pub fn solve(cfg: &ProblemConfig, over: &Overrides) -> Result<Report, Error> {
    let problem = Problem::from_config(cfg)?;
    let trace = propagate(&problem, over, corrected(cfg, over))?;
    let mut w = writer();
    row(&mut w, ["x", "u", "v", "du", "dv"].map(String::from));
    for s in &trace.samples {
        let st = s.state;
        row(&mut w, [s.x, st.u, st.v, st.du, st.dv].map(g17));
    }
    Ok(Report::ok(finish(w)))
}

pub fn basis(cfg: &ProblemConfig, args: &BasisArgs, over: &Overrides) -> Result<Report, Error> {
    let g = args.g.as_deref().or(cfg.g.as_deref()).ok_or_else(|| Error::InvalidArgument("basis needs `g`".into()))?;
    if cfg.h.is_some() && args.g.is_none() {
        return Err(Error::ComplexProfile);
    }
    let alpha = args.alpha.or(cfg.alpha).or(cfg.domain.map(|d| d[0])).unwrap_or(0.0);
    let x_max = args
        .x_max
        .or(cfg.domain.map(|d| d[1]))
        .ok_or_else(|| Error::InvalidArgument("basis needs `--x-max` or a domain".into()))?;
    if !(alpha.is_finite() && x_max.is_finite()) {
        return Err(Error::InvalidArgument("alpha and x-max must be finite".into()));
    }
    let samples = positive(over.samples, "samples")?.unwrap_or(101);
    let profile = CoefficientProfile::parse(g, None, alpha.min(x_max), alpha.max(x_max))?;
    let corrected = corrected(cfg, over);
    let qcfg = QuadratureConfig::default();

    let mut w = writer();
    row(&mut w, ["x", "psi1", "psi2", "psi3", "psi4", "wkb_u1", "wkb_u2"].map(String::from));
    for k in 0..samples {
        let x = match (k, samples) {
            (_, 1) | (0, _) => alpha,
            (k, n) if k + 1 == n => x_max,
            (k, n) => alpha + (x_max - alpha) * k as f64 / (n - 1) as f64,
        };
        let b = psi(&profile, alpha, x, corrected, &qcfg)?;
        let (u1, u2) = match wkb(&profile, alpha, x, &qcfg)? {
            WkbEval::Finite { u1, u2 } => (g17(u1), g17(u2)),
            WkbEval::TurningPoint => ("div".to_string(), "div".to_string()),
        };
        row(&mut w, [g17(x), g17(b.psi1), g17(b.psi2), g17(b.psi3), g17(b.psi4), u1, u2]);
    }
    Ok(Report::ok(finish(w)))
}

pub fn band(cfg: &ProblemConfig, over: &Overrides) -> Result<Report, Error> {
    let problem = BandProblem::from_config(cfg)?;
    let (lo, hi, _) = problem.energies;
    let half = 0.5 * problem.period;
    let n = match positive(over.sections, "sections")?.or(problem.sections) {
        Some(n) => n,
        // an energy whose profile cannot be evaluated fails in the scan itself
        None => [lo, hi]
            .into_iter()
            .filter_map(|e| {
                band_profile(&problem.potential, e, problem.period)
                    .and_then(|p| default_sections(&p, -half, half))
                    .ok()
            })
            .max()
            .unwrap_or(1),
    };
    let points = band_scan(
        &problem.potential,
        problem.energies,
        problem.period,
        n,
        corrected(cfg, over),
        &QuadratureConfig::default(),
    )?;

    let mut w = writer();
    row(&mut w, ["E", "re_kappa1", "im_kappa1", "re_kappa2", "im_kappa2", "propagating"].map(String::from));
    let mut failures = Vec::new();
    for point in &points {
        match &point.result {
            Ok(r) => {
                let [k1, k2] = r.kappas;
                let flag = if r.is_propagating() { "1" } else { "0" };
                row(&mut w, [g17(point.energy), g17(k1.re), g17(k1.im), g17(k2.re), g17(k2.im), flag.to_string()]);
            }
            Err(e) => {
                failures.push(format!("E = {}: {e}", g17(point.energy)));
                let nan = || "nan".to_string();
                row(&mut w, [g17(point.energy), nan(), nan(), nan(), nan(), nan()]);
            }
        }
    }
    let failed = failures.len() == points.len();
    let summary = (!failures.is_empty()).then(|| failures.join("\n"));
    Ok(Report { csv: finish(w), summary, failed })
}

pub fn compare(cfg: &ProblemConfig, over: &Overrides) -> Result<Report, Error> {
    let problem = Problem::from_config(cfg)?;
    let trace = propagate(&problem, over, corrected(cfg, over))?;
    let ocfg = OracleConfig::default();

    let mut w = writer();
    row(&mut w, ["x", "u_dtmm", "u_oracle", "abs_err"].map(String::from));
    let mut reference = problem.initial;
    let mut previous = problem.alpha;
    let mut worst = 0.0f64;
    for s in &trace.samples {
        reference = rk_solve(&problem.profile, previous, reference, s.x, &ocfg)?;
        previous = s.x;
        let err = (s.state.u - reference.u).abs();
        worst = worst.max(err);
        row(&mut w, [s.x, s.state.u, reference.u, err].map(g17));
    }
    Ok(Report { csv: finish(w), summary: Some(format!("max_abs_err={}", g17(worst))), failed: false })
}
