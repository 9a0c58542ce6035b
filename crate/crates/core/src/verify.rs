//! End-to-end verification sweep over the sampler catalog.

use crate::analysis::{
    check_f_growth, check_h_bounds, check_sum_bound, coefficient_check, css2_q, css2_search,
    herglotz_delta, koebe_distance, refined_distortion_check, rigidity_probe, BoundReport,
    BoundSample, RigidityVerdict,
};
use crate::error::{Error, Result};
use crate::mappings::{polar_grid, CertifiedMap};
use crate::sampler::{build_samples, draw_recipes, ShearRecipe};
use crate::series::{DEFAULT_ORDER, MIN_ORDER};
use num_complex::Complex64 as Complex;
use rayon::prelude::*;
use serde::Serialize;

pub const SCHEMA: u32 = 1;
pub const MIN_CERTIFIED: usize = 30;
pub const KOEBE_EXCLUSION: f64 = 0.1;
pub const COEFF_N_MAX: usize = 12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub seed: u64,
    pub order: usize,
    /// Outermost grid radius.
    pub rmax: f64,
    /// Angles per grid radius.
    pub grid: usize,
    /// Shrink factor for the growth and distortion envelopes (1 = exact).
    pub envelope_scale: f64,
    pub samples: usize,
    pub css2_steps: usize,
    pub mu_steps: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 1,
            order: DEFAULT_ORDER,
            rmax: 0.99,
            grid: 10,
            envelope_scale: 1.0,
            samples: 48,
            css2_steps: 360,
            mu_steps: 360,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rmax > 0.9 && self.rmax < 1.0) {
            return Err(Error::RadiusOutOfRange(self.rmax));
        }
        if self.grid == 0 {
            return Err(Error::TooFewSamples { min: 1, got: 0 });
        }
        if self.order < MIN_ORDER {
            return Err(Error::TooFewSamples {
                min: MIN_ORDER,
                got: self.order,
            });
        }
        if !(self.envelope_scale > 0.0 && self.envelope_scale <= 1.0) {
            return Err(Error::Parse {
                input: self.envelope_scale.to_string(),
                reason: "envelope scale must lie in (0, 1]".into(),
            });
        }
        Ok(())
    }

    /// Radii `0.1, ..., 0.9` and `rmax`, each with `grid` equally spaced angles.
    pub fn points(&self) -> Vec<Complex> {
        let mut radii: Vec<f64> = (1..=9).map(|i| i as f64 / 10.0).collect();
        radii.push(self.rmax);
        polar_grid(&radii, self.grid, 0.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleSummary {
    pub index: usize,
    pub label: String,
    pub recipe: ShearRecipe,
    pub certified: bool,
    pub chords_failed: Option<usize>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub sample: Option<usize>,
    pub pass: bool,
    /// Headline number of the check (smallest margin, residual or count).
    pub value: f64,
    /// Worst grid point, reported when the check fails.
    pub offending: Option<BoundSample>,
    pub detail: Option<String>,
}

impl CheckResult {
    fn global(name: &str, pass: bool, value: f64, detail: Option<String>) -> Self {
        Self {
            name: name.into(),
            sample: None,
            pass,
            value,
            offending: None,
            detail,
        }
    }

    fn bound(index: usize, report: &BoundReport) -> Self {
        Self {
            name: report.name.clone(),
            sample: Some(index),
            pass: report.pass,
            value: report.min_lower_margin.min(report.min_upper_margin),
            offending: (!report.pass).then(|| report.worst().copied()).flatten(),
            detail: None,
        }
    }

    fn scalar(index: usize, name: &str, pass: bool, value: f64, detail: Option<String>) -> Self {
        Self {
            name: name.into(),
            sample: Some(index),
            pass,
            value,
            offending: None,
            detail,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub config: RunConfig,
    pub certified: usize,
    pub samples: Vec<SampleSummary>,
    pub checks: Vec<CheckResult>,
    pub pass: bool,
}

struct SampleOutcome {
    checks: Vec<CheckResult>,
    equality_points: usize,
    rigidity_detected: bool,
}

fn check_sample(
    index: usize,
    f: &CertifiedMap,
    points: &[Complex],
    config: &RunConfig,
) -> Result<SampleOutcome> {
    let mut checks = vec![];
    let h = check_h_bounds(f, points, config.envelope_scale)?;
    for report in [&h.growth, &h.distortion, &h.s_growth, &h.s_distortion] {
        checks.push(CheckResult::bound(index, report));
    }
    checks.push(CheckResult::bound(index, &check_f_growth(f, points)?));

    let coeffs = coefficient_check(f, COEFF_N_MAX);
    let worst = coeffs
        .rows
        .iter()
        .map(|r| r.a_margin.min(r.b_margin))
        .fold(f64::INFINITY, f64::min);
    checks.push(CheckResult::scalar(
        index,
        "coefficients",
        coeffs.pass,
        worst,
        None,
    ));

    let distance = koebe_distance(f, COEFF_N_MAX);
    checks.push(CheckResult::scalar(
        index,
        "koebe-exclusion",
        distance > KOEBE_EXCLUSION,
        distance,
        None,
    ));

    match css2_search(f, points, config.css2_steps) {
        Ok(pair) => {
            checks.push(CheckResult::scalar(
                index,
                "css2-pair",
                true,
                pair.min_residual,
                Some(format!("alpha={:.9} beta={:.9}", pair.alpha, pair.beta)),
            ));
            checks.push(CheckResult::bound(
                index,
                &check_sum_bound(f, pair.alpha, points),
            ));
            let q = css2_q(f, pair.alpha, pair.beta)?;
            let (pass, value, detail) = match herglotz_delta(&q, pair.alpha + pair.beta, points) {
                Ok(r) => (
                    r.schwarz_ok && r.round_trip_error <= crate::analysis::herglotz::ROUND_TRIP_TOL,
                    r.max_schwarz_ratio,
                    Some(format!("round_trip_error={:e}", r.round_trip_error)),
                ),
                Err(e) => (false, f64::NAN, Some(e.to_string())),
            };
            checks.push(CheckResult::scalar(index, "herglotz", pass, value, detail));
        }
        Err(e) => checks.push(CheckResult::scalar(
            index,
            "css2-pair",
            false,
            match e {
                Error::NoAdmissiblePair { min_residual } => min_residual,
                _ => f64::NAN,
            },
            Some(e.to_string()),
        )),
    }

    let refined = refined_distortion_check(f, points);
    checks.push(CheckResult::bound(index, &refined.refined));
    checks.push(CheckResult::bound(index, &refined.final_bound));

    let rigidity = rigidity_probe(f, config.mu_steps, points);
    checks.push(CheckResult::scalar(
        index,
        "rigidity",
        rigidity.pass(),
        rigidity.distance,
        Some(format!("{:?}", rigidity.verdict)),
    ));

    Ok(SampleOutcome {
        checks,
        equality_points: h.equality_points(),
        rigidity_detected: rigidity.verdict == RigidityVerdict::Pass,
    })
}

pub fn run_verification(config: &RunConfig) -> Result<VerificationReport> {
    config.validate()?;
    let recipes = draw_recipes(config.seed, config.samples);
    let samples = build_samples(&recipes, config.order);
    let points = config.points();

    let outcomes: Vec<Option<Result<SampleOutcome>>> = samples
        .par_iter()
        .enumerate()
        .map(|(i, s)| s.certified().map(|f| check_sample(i, f, &points, config)))
        .collect();

    let mut checks = vec![];
    let mut equality_outside_l = vec![];
    for (i, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            None => {}
            Some(Ok(o)) => {
                if o.equality_points > 0 && !o.rigidity_detected {
                    equality_outside_l.push(i);
                }
                checks.extend(o.checks);
            }
            Some(Err(e)) => checks.push(CheckResult::scalar(
                i,
                "evaluation",
                false,
                f64::NAN,
                Some(e.to_string()),
            )),
        }
    }
    let certified = samples.iter().filter(|s| s.certified().is_some()).count();
    checks.push(CheckResult::global(
        "certified-samples",
        certified >= MIN_CERTIFIED,
        certified as f64,
        None,
    ));
    checks.push(CheckResult::global(
        "equality-only-at-l",
        equality_outside_l.is_empty(),
        equality_outside_l.len() as f64,
        (!equality_outside_l.is_empty()).then(|| format!("samples {equality_outside_l:?}")),
    ));

    let summaries = samples
        .iter()
        .enumerate()
        .map(|(index, s)| SampleSummary {
            index,
            label: s.recipe.label(),
            recipe: s.recipe,
            certified: s.certified().is_some(),
            chords_failed: s.certified().map(|f| f.membership().chords_failed),
            error: s.outcome.as_ref().err().map(|e| e.to_string()),
        })
        .collect();
    let pass = checks.iter().all(|c| c.pass);
    Ok(VerificationReport {
        schema: SCHEMA,
        config: config.clone(),
        certified,
        samples: summaries,
        checks,
        pass,
    })
}
