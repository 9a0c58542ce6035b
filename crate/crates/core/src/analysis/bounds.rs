//! Pointwise bound checks on grids.
//!
//! Margins are relative: `(measured - lower) / max(1, upper)` and
//! `(upper - measured) / max(1, upper)`, so that one tolerance serves points
//! near the boundary where `|h'|` reaches `10^6`.

use super::envelopes::{envelopes, Envelope};
use crate::error::Result;
use crate::mappings::{CertifiedMap, HarmonicMap};
use num_complex::Complex64 as Complex;
use serde::Serialize;

/// Tolerance on relative margins.
pub const BOUND_TOL: f64 = 1e-8;
/// Relative gap below which a sample counts as attaining its bound.
pub const EQUALITY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundSample {
    pub z: Complex,
    pub measured: f64,
    pub lower: f64,
    pub upper: f64,
    pub lower_margin: f64,
    pub upper_margin: f64,
}

impl BoundSample {
    pub fn new(z: Complex, measured: f64, env: Envelope) -> Self {
        let scale = if env.upper.is_finite() {
            env.upper.max(1.0)
        } else {
            measured.max(1.0)
        };
        Self {
            z,
            measured,
            lower: env.lower,
            upper: env.upper,
            lower_margin: (measured - env.lower) / scale,
            upper_margin: (env.upper - measured) / scale,
        }
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.lower_margin >= -tol && self.upper_margin >= -tol
    }

    /// Whether the sample attains either bound, relative to the bound itself.
    pub fn attains(&self, tol: f64) -> bool {
        let lo = self.lower > 0.0 && (self.measured - self.lower).abs() <= tol * self.lower;
        let hi = self.upper.is_finite() && (self.upper - self.measured).abs() <= tol * self.upper;
        lo || hi
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub name: String,
    pub tol: f64,
    pub pass: bool,
    pub min_lower_margin: f64,
    pub min_upper_margin: f64,
    /// Samples with `z ≠ 0` that attain a bound within [`EQUALITY_TOL`].
    pub equality_points: usize,
    /// The lower bound is not sharp; failures of sharpness are expected.
    pub non_sharp_lower: bool,
    pub samples: Vec<BoundSample>,
}

impl BoundReport {
    pub fn new(name: impl Into<String>, samples: Vec<BoundSample>, tol: f64) -> Self {
        Self {
            name: name.into(),
            tol,
            pass: samples.iter().all(|s| s.holds(tol)),
            min_lower_margin: samples
                .iter()
                .map(|s| s.lower_margin)
                .fold(f64::INFINITY, f64::min),
            min_upper_margin: samples
                .iter()
                .map(|s| s.upper_margin)
                .fold(f64::INFINITY, f64::min),
            equality_points: samples
                .iter()
                .filter(|s| s.z.norm() > 0.0 && s.attains(EQUALITY_TOL))
                .count(),
            non_sharp_lower: false,
            samples,
        }
    }

    pub fn worst(&self) -> Option<&BoundSample> {
        self.samples.iter().min_by(|a, b| {
            a.lower_margin
                .min(a.upper_margin)
                .total_cmp(&b.lower_margin.min(b.upper_margin))
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HBoundsReport {
    pub growth: BoundReport,
    pub distortion: BoundReport,
    /// The weaker univalent-class envelopes, checked for consistency.
    pub s_growth: BoundReport,
    pub s_distortion: BoundReport,
    pub pass: bool,
}

impl HBoundsReport {
    pub fn equality_points(&self) -> usize {
        self.growth.equality_points + self.distortion.equality_points
    }
}

/// Growth and distortion of the analytic part `h` at every grid point.
/// `envelope_scale` shrinks both envelopes (1 leaves them exact).
pub fn check_h_bounds(
    f: &CertifiedMap,
    points: &[Complex],
    envelope_scale: f64,
) -> Result<HBoundsReport> {
    let mut rows = [vec![], vec![], vec![], vec![]];
    for &z in points {
        let e = envelopes(z.norm())?;
        let value = f.h().eval(z).norm();
        let deriv = f.h().derivative(z).norm();
        rows[0].push(BoundSample::new(
            z,
            value,
            e.h_growth.scaled(envelope_scale),
        ));
        rows[1].push(BoundSample::new(
            z,
            deriv,
            e.h_distortion.scaled(envelope_scale),
        ));
        rows[2].push(BoundSample::new(z, value, e.s_growth));
        rows[3].push(BoundSample::new(z, deriv, e.s_distortion));
    }
    let [g, d, sg, sd] = rows;
    let growth = BoundReport::new("h-growth", g, BOUND_TOL);
    let distortion = BoundReport::new("h-distortion", d, BOUND_TOL);
    let s_growth = BoundReport::new("S-growth", sg, BOUND_TOL);
    let s_distortion = BoundReport::new("S-distortion", sd, BOUND_TOL);
    let pass = growth.pass && distortion.pass && s_growth.pass && s_distortion.pass;
    Ok(HBoundsReport {
        growth,
        distortion,
        s_growth,
        s_distortion,
        pass,
    })
}

/// `|h'(z) + e^{-2iα} g'(z)| ≤ 1/(1-|z|)^2`.
pub fn check_sum_bound(f: &HarmonicMap, alpha: f64, points: &[Complex]) -> BoundReport {
    let rot = Complex::from_polar(1.0, -2.0 * alpha);
    let samples = points
        .iter()
        .map(|&z| {
            let measured = (f.h().derivative(z) + rot * f.g().derivative(z)).norm();
            let env = Envelope {
                lower: 0.0,
                upper: (1.0 - z.norm()).powi(-2),
            };
            BoundSample::new(z, measured, env)
        })
        .collect();
    BoundReport::new("sum-bound", samples, BOUND_TOL)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RefinedDistortionReport {
    /// `1/((1+|a|)^2 (1+|ω(a)|)) ≤ |h'(a)|`.
    pub refined: BoundReport,
    /// `1/(1+|a|)^3 ≤ |h'(a)|`.
    pub final_bound: BoundReport,
    pub pass: bool,
}

pub fn refined_distortion_check(f: &HarmonicMap, points: &[Complex]) -> RefinedDistortionReport {
    let mut refined = vec![];
    let mut final_bound = vec![];
    for &a in points {
        let r = a.norm();
        let measured = f.h().derivative(a).norm();
        let w = f.dilatation_at(a).norm();
        refined.push(BoundSample::new(
            a,
            measured,
            Envelope {
                lower: 1.0 / ((1.0 + r).powi(2) * (1.0 + w)),
                upper: f64::INFINITY,
            },
        ));
        final_bound.push(BoundSample::new(
            a,
            measured,
            Envelope {
                lower: (1.0 + r).powi(-3),
                upper: f64::INFINITY,
            },
        ));
    }
    let refined = BoundReport::new("refined-distortion", refined, BOUND_TOL);
    let final_bound = BoundReport::new("h-distortion-lower", final_bound, BOUND_TOL);
    let pass = refined.pass && final_bound.pass;
    RefinedDistortionReport {
        refined,
        final_bound,
        pass,
    }
}

/// Growth of the full map `|f(z)|`. The lower bound is known not to be
/// sharp, so only violations count.
pub fn check_f_growth(f: &HarmonicMap, points: &[Complex]) -> Result<BoundReport> {
    let samples = points
        .iter()
        .map(|&z| {
            Ok(BoundSample::new(
                z,
                f.eval(z).norm(),
                envelopes(z.norm())?.f_growth,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut report = BoundReport::new("f-growth", samples, BOUND_TOL);
    report.non_sharp_lower = true;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mappings::{certify, halfplane_l, harmonic_l, identity, polar_grid};

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn grid() -> Vec<Complex> {
        polar_grid(&[0.1, 0.3, 0.5, 0.7, 0.9, 0.99], 10, 0.0)
    }

    #[test]
    fn l_attains_h_bounds_on_the_real_axis() {
        let l = certify(harmonic_l()).unwrap();
        let rep = check_h_bounds(&l, &[c(0.5, 0.0), c(-0.5, 0.0)], 1.0).unwrap();
        assert!(rep.pass);
        let s = rep.growth.samples[0];
        assert!((s.measured - 1.5).abs() < 1e-15 && s.upper_margin.abs() < 1e-15);
        let s = rep.distortion.samples[1];
        assert!((s.measured - 1.5f64.powi(-3)).abs() < 1e-15 && s.lower_margin.abs() < 1e-15);
        assert_eq!(rep.equality_points(), 4);
        let rep = check_h_bounds(&l, &grid(), 1.0).unwrap();
        assert!(rep.pass);
    }

    #[test]
    fn scaled_envelope_fails_at_l() {
        let l = certify(harmonic_l()).unwrap();
        assert!(!check_h_bounds(&l, &grid(), 0.9).unwrap().pass);
    }

    #[test]
    fn halfplane_bounds_hold_strictly() {
        let ell = certify(HarmonicMap::analytic(halfplane_l()).unwrap()).unwrap();
        let rep = check_h_bounds(&ell, &[c(0.5, 0.0)], 1.0).unwrap();
        assert!(rep.pass);
        assert!((rep.growth.samples[0].measured - 1.0).abs() < 1e-15);
        assert!(rep.growth.samples[0].upper_margin > 0.3);
        assert_eq!(rep.equality_points(), 0);
    }

    #[test]
    fn sum_bound_examples() {
        let l = harmonic_l();
        let rep = check_sum_bound(&l, 0.0, &[c(0.3, 0.0), c(0.9, 0.0)]);
        assert!(rep.pass);
        for s in &rep.samples {
            assert!((s.measured - s.upper).abs() <= 1e-12 * s.upper);
        }
        let id = HarmonicMap::analytic(identity()).unwrap();
        assert!(check_sum_bound(&id, 1.0, &grid()).pass);
    }

    #[test]
    fn refined_distortion_examples() {
        let l = harmonic_l();
        let rep = refined_distortion_check(&l, &[c(-0.5, 0.0)]);
        let s = rep.refined.samples[0];
        assert!((s.measured - 8.0 / 27.0).abs() < 1e-15);
        assert!((s.lower - 8.0 / 27.0).abs() < 1e-15);
        assert!(rep.pass);
        let ell = HarmonicMap::analytic(halfplane_l()).unwrap();
        let rep = refined_distortion_check(&ell, &grid());
        assert!(rep.pass);
        for s in &rep.refined.samples {
            assert!((s.lower - (1.0 + s.z.norm()).powi(-2)).abs() < 1e-15);
        }
    }

    #[test]
    fn f_growth_holds_for_l() {
        let rep = check_f_growth(&harmonic_l(), &grid()).unwrap();
        assert!(rep.pass && rep.non_sharp_lower);
    }
}
