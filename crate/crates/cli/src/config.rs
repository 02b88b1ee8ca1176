use std::path::Path;

use dtmm_core::profiles::{parse_expression, CoefficientProfile, Expression};
use dtmm_core::{Error, State};
use serde::Deserialize;

/// Problem description read from `--config`. Every key is optional here and
/// checked per command.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub g: Option<String>,
    pub h: Option<String>,
    pub domain: Option<[f64; 2]>,
    pub initial: Option<[f64; 4]>,
    pub alpha: Option<f64>,
    pub sections: Option<usize>,
    pub corrected: Option<bool>,
    #[serde(rename = "V")]
    pub potential: Option<String>,
    #[serde(rename = "E_range")]
    pub energy_range: Option<(f64, f64, usize)>,
    #[serde(rename = "L")]
    pub period: Option<f64>,
}

impl ProblemConfig {
    pub fn load(path: &Path) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))
    }
}

fn missing(key: &str) -> Error {
    Error::InvalidArgument(format!("config is missing `{key}`"))
}

/// Validated input for `solve` and `compare`.
#[derive(Debug, Clone)]
pub struct Problem {
    pub profile: CoefficientProfile,
    pub alpha: f64,
    pub end: f64,
    pub initial: State,
    pub sections: Option<usize>,
}

impl Problem {
    /// Integrates from `alpha` to the upper end of the domain, or to the
    /// lower end when `alpha` sits on the upper one.
    pub fn from_config(cfg: &ProblemConfig) -> Result<Self, Error> {
        let g = cfg.g.as_deref().ok_or_else(|| missing("g"))?;
        let [lo, hi] = cfg.domain.ok_or_else(|| missing("domain"))?;
        if lo.partial_cmp(&hi) != Some(std::cmp::Ordering::Less) {
            return Err(Error::InvalidArgument(format!("domain [{lo}, {hi}] must have lo < hi")));
        }
        let profile = CoefficientProfile::parse(g, cfg.h.as_deref(), lo, hi)?;
        let alpha = cfg.alpha.unwrap_or(lo);
        profile.check(alpha)?;
        let [u, v, du, dv] = cfg.initial.ok_or_else(|| missing("initial"))?;
        let initial = State::new(u, v, du, dv);
        if !initial.is_finite() {
            return Err(Error::InvalidArgument("initial state must be finite".into()));
        }
        if cfg.sections == Some(0) {
            return Err(Error::InvalidArgument("sections must be at least 1".into()));
        }
        let end = if alpha == hi { lo } else { hi };
        Ok(Self { profile, alpha, end, initial, sections: cfg.sections })
    }
}

/// Validated input for `band`.
#[derive(Debug, Clone)]
pub struct BandProblem {
    pub potential: Expression,
    pub energies: (f64, f64, usize),
    pub period: f64,
    pub sections: Option<usize>,
}

impl BandProblem {
    pub fn from_config(cfg: &ProblemConfig) -> Result<Self, Error> {
        let potential = parse_expression(cfg.potential.as_deref().ok_or_else(|| missing("V"))?)?;
        let energies = cfg.energy_range.ok_or_else(|| missing("E_range"))?;
        let (lo, hi, count) = energies;
        if count == 0 || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidArgument("E_range must be finite with count ≥ 1".into()));
        }
        let period = cfg.period.ok_or_else(|| missing("L"))?;
        if !(period > 0.0 && period.is_finite()) {
            return Err(Error::InvalidArgument("L must be positive".into()));
        }
        if cfg.sections == Some(0) {
            return Err(Error::InvalidArgument("sections must be at least 1".into()));
        }
        Ok(Self { potential, energies, period, sections: cfg.sections })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(json: &str) -> ProblemConfig {
        serde_json::from_str(json).unwrap()
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(serde_json::from_str::<ProblemConfig>(r#"{"g": "1", "gg": "2"}"#).is_err());
        assert!(serde_json::from_str::<ProblemConfig>(r#"{"v": "1"}"#).is_err());
    }

    #[test]
    fn solve_direction() {
        let cfg = parse(r#"{"g": "1", "domain": [0, 2], "initial": [1, 0, 0, 0]}"#);
        let p = Problem::from_config(&cfg).unwrap();
        assert_eq!((p.alpha, p.end), (0.0, 2.0));
        let cfg = parse(r#"{"g": "1", "domain": [0, 2], "initial": [1, 0, 0, 0], "alpha": 2}"#);
        let p = Problem::from_config(&cfg).unwrap();
        assert_eq!((p.alpha, p.end), (2.0, 0.0));
    }

    #[test]
    fn validation_errors() {
        for json in [
            r#"{"domain": [0, 1], "initial": [1, 0, 0, 0]}"#,
            r#"{"g": "1", "initial": [1, 0, 0, 0]}"#,
            r#"{"g": "1", "domain": [1, 0], "initial": [1, 0, 0, 0]}"#,
            r#"{"g": "1", "domain": [0, 1]}"#,
            r#"{"g": "1", "domain": [0, 1], "initial": [1, 0, 0, 0], "alpha": 3}"#,
            r#"{"g": "x +", "domain": [0, 1], "initial": [1, 0, 0, 0]}"#,
            r#"{"g": "1", "domain": [0, 1], "initial": [1, 0, 0, 0], "sections": 0}"#,
        ] {
            let err = Problem::from_config(&parse(json)).unwrap_err();
            assert!(err.is_input_error(), "{json}: {err}");
        }
        for json in [
            r#"{"E_range": [0, 1, 2], "L": 1}"#,
            r#"{"V": "0", "L": 1}"#,
            r#"{"V": "0", "E_range": [0, 1, 0], "L": 1}"#,
            r#"{"V": "0", "E_range": [0, 1, 2], "L": 0}"#,
        ] {
            assert!(BandProblem::from_config(&parse(json)).unwrap_err().is_input_error(), "{json}");
        }
    }
}
