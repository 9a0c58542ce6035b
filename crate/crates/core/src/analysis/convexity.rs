//! Convexity tests: sampled image curves, convexity in a direction, and
//! chord lifting for the image domain itself.
//!
//! Curve checks are exact criteria for analytic maps (the image of every
//! sub-disk of a convex analytic map is convex) but not for harmonic ones:
//! `L` maps `|z| = r` onto a non-convex curve once `r > sqrt(2) - 1`. Domain
//! convexity is therefore certified by lifting chords of `f(D)` back into the
//! disk along `f^{-1}`.

use crate::error::{Error, Result};
use crate::mappings::{HarmonicMap, PlanarMap};
use num_complex::Complex64 as Complex;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::TAU;

pub const CURVE_TOL: f64 = 1e-9;
pub const DEFAULT_SAMPLES: usize = 1024;
pub const MIN_SAMPLES: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurveConvexity {
    pub r: f64,
    pub samples: usize,
    pub convex: bool,
    /// Minimum of `(w1 - w0) × (w2 - w1) / (|w1 - w0| |w2 - w1|)`.
    pub min_cross: f64,
    pub max_cross: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DirectionConvexity {
    pub theta: f64,
    pub r: f64,
    pub samples: usize,
    pub sign_changes: usize,
    pub convex_in_direction: bool,
}

fn sample_curve<M: PlanarMap + ?Sized>(f: &M, r: f64, samples: usize) -> Result<Vec<Complex>> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::RadiusOutOfRange(r));
    }
    if samples < MIN_SAMPLES {
        return Err(Error::TooFewSamples {
            min: MIN_SAMPLES,
            got: samples,
        });
    }
    let curve: Vec<Complex> = (0..samples)
        .map(|m| f.eval(Complex::from_polar(r, TAU * m as f64 / samples as f64)))
        .collect();
    if curve.iter().any(|w| !w.is_finite()) {
        return Err(Error::NonFinite("curve samples"));
    }
    for m in 0..samples {
        if curve[(m + 1) % samples] == curve[m] {
            return Err(Error::DegenerateCurve { index: m });
        }
    }
    Ok(curve)
}

/// Discrete convexity of the image of `|z| = r`.
pub fn convex_curve_check<M: PlanarMap + ?Sized>(
    f: &M,
    r: f64,
    samples: usize,
) -> Result<CurveConvexity> {
    let w = sample_curve(f, r, samples)?;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for m in 0..samples {
        let e1 = w[(m + 1) % samples] - w[m];
        let e2 = w[(m + 2) % samples] - w[(m + 1) % samples];
        let cross = (e1.re * e2.im - e1.im * e2.re) / (e1.norm() * e2.norm());
        lo = lo.min(cross);
        hi = hi.max(cross);
    }
    Ok(CurveConvexity {
        r,
        samples,
        convex: lo >= -CURVE_TOL || hi <= CURVE_TOL,
        min_cross: lo,
        max_cross: hi,
    })
}

/// Convexity of the image of `|z| = r` in direction `θ`: after rotating by
/// `e^{-iθ}`, the imaginary part along the closed curve must change
/// monotonicity exactly twice.
pub fn direction_convexity_check<M: PlanarMap + ?Sized>(
    f: &M,
    theta: f64,
    r: f64,
    samples: usize,
) -> Result<DirectionConvexity> {
    let w = sample_curve(f, r, samples)?;
    let rot = Complex::from_polar(1.0, -theta);
    let y: Vec<f64> = w.iter().map(|&v| (rot * v).im).collect();
    let signs: Vec<i8> = (0..samples)
        .filter_map(|m| {
            let d = y[(m + 1) % samples] - y[m];
            (d != 0.0).then_some(if d > 0.0 { 1 } else { -1 })
        })
        .collect();
    let sign_changes = if signs.is_empty() {
        0
    } else {
        (0..signs.len())
            .filter(|&i| signs[i] != signs[(i + 1) % signs.len()])
            .count()
    };
    Ok(DirectionConvexity {
        theta,
        r,
        samples,
        sign_changes,
        convex_in_direction: sign_changes == 2,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChordReport {
    /// Chords lifted before stopping.
    pub tested: usize,
    pub failed: usize,
    /// Whether every chord was lifted; false when the scan stopped after a
    /// block containing a failure.
    pub exhaustive: bool,
    /// Endpoints of the first failing chord in enumeration order.
    pub first_failure: Option<(Complex, Complex)>,
}

const BOUNDARY_GUARD: f64 = 1e-9;
const MIN_STEP: f64 = 1e-12;
const MAX_STEPS: usize = 100_000;
const NEWTON_ITERS: usize = 8;
const STEP_FRACTION: f64 = 0.2;
const ENDPOINT_TOL: f64 = 1e-6;
const CHORD_BLOCK: usize = 64;

/// Lifts every chord `[f(z_i), f(z_j)]` through `f^{-1}`. A convex image
/// contains all its chords, so each lift must stay inside the disk and end at
/// `z_j`. Chords are processed in fixed blocks and the scan stops after the
/// first block with a failure.
pub fn chord_convexity(f: &HarmonicMap, points: &[Complex]) -> ChordReport {
    let pairs: Vec<(Complex, Complex)> = (0..points.len())
        .flat_map(|i| (i + 1..points.len()).map(move |j| (i, j)))
        .map(|(i, j)| (points[i], points[j]))
        .collect();
    let mut report = ChordReport {
        tested: 0,
        failed: 0,
        exhaustive: true,
        first_failure: None,
    };
    for block in pairs.chunks(CHORD_BLOCK) {
        let ok: Vec<bool> = block
            .par_iter()
            .map(|&(a, b)| lift_chord(f, a, b))
            .collect();
        report.tested += block.len();
        report.failed += ok.iter().filter(|&&x| !x).count();
        if report.first_failure.is_none() {
            report.first_failure = ok.iter().position(|&x| !x).map(|i| block[i]);
        }
        if report.failed > 0 {
            break;
        }
    }
    report.exhaustive = report.tested == pairs.len();
    report
}

/// Continues `f^{-1}` along `w(s) = f(z1) + s (f(z2) - f(z1))`, `0 ≤ s ≤ 1`,
/// with Newton correction. `f` is tracked by increments so quadrature-backed
/// maps never integrate from the origin.
pub fn lift_chord(f: &HarmonicMap, z1: Complex, z2: Complex) -> bool {
    lift_chord_steps(f, z1, z2).is_some()
}

/// As [`lift_chord`], returning the number of continuation steps on success.
pub fn lift_chord_steps(f: &HarmonicMap, z1: Complex, z2: Complex) -> Option<usize> {
    let delta = f.increment(z1, z2);
    if !delta.is_finite() {
        return None;
    }
    let tol = 1e-10 * (f.eval(z1).norm() + delta.norm() + 1.0);
    let (mut z, mut at, mut s, mut ds) = (z1, Complex::new(0.0, 0.0), 0.0_f64, 0.0625_f64);
    let mut steps = 0;
    while s < 1.0 {
        steps += 1;
        if steps > MAX_STEPS {
            return None;
        }
        let s_next = (s + ds).min(1.0);
        match correct(f, z, at, delta * s_next, tol) {
            Some((zn, an)) => {
                z = zn;
                at = an;
                s = s_next;
                ds = (ds * 1.5).min(0.25);
            }
            None => {
                ds /= 2.0;
                if ds < MIN_STEP {
                    return None;
                }
            }
        }
    }
    ((z - z2).norm() <= ENDPOINT_TOL).then_some(steps)
}

/// Newton iteration for `f(z) - f(z1) = target`, starting at `z` where the
/// tracked value is `at`.
fn correct(
    f: &HarmonicMap,
    mut z: Complex,
    mut at: Complex,
    target: Complex,
    tol: f64,
) -> Option<(Complex, Complex)> {
    for _ in 0..NEWTON_ITERS {
        let residual = target - at;
        if residual.norm() <= tol {
            return Some((z, at));
        }
        let dz = f.inverse_differential(z, residual);
        if !dz.is_finite() || dz.norm() > STEP_FRACTION * (1.0 - z.norm()) {
            return None;
        }
        let next = z + dz;
        if next.norm() >= 1.0 - BOUNDARY_GUARD {
            return None;
        }
        at += f.increment(z, next);
        z = next;
    }
    ((target - at).norm() <= tol).then_some((z, at))
}
