//! Rigidity probe: if `h - e^{-2iμ} g` is a rotation of Koebe for some `μ`,
//! the map must be a rotation of `L`.

use crate::mappings::{harmonic_l, rotate_harmonic, CertifiedMap};
use num_complex::Complex64 as Complex;
use serde::Serialize;
use std::f64::consts::PI;

pub const RIGIDITY_TOL: f64 = 1e-6;
pub const RIGIDITY_COEFFS: usize = 12;
pub const MATCH_TOL: f64 = 1e-6;
pub const DEFAULT_MU_STEPS: usize = 360;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RigidityVerdict {
    /// No Koebe shear found.
    NotDetected,
    /// Koebe shear found and the map is the matching rotation of `L`.
    Pass,
    /// Koebe shear found but the map is not a rotation of `L`.
    Violation,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RigidityReport {
    pub mu: f64,
    pub lambda: Complex,
    /// `max_{n ≤ 12} |A_n - n λ^{n-1}|` at the best `μ`.
    pub distance: f64,
    pub detected: bool,
    /// `max |f - L_λ| / max(1, |L_λ|)` over the grid, when detected.
    pub max_deviation: Option<f64>,
    pub verdict: RigidityVerdict,
}

impl RigidityReport {
    pub fn pass(&self) -> bool {
        self.verdict != RigidityVerdict::Violation
    }
}

fn koebe_fit(a: &[Complex], b: &[Complex], mu: f64) -> (f64, Complex) {
    let rot = Complex::from_polar(1.0, -2.0 * mu);
    let coeff = |n: usize| a[n] - rot * b[n];
    let half = coeff(2) / 2.0;
    let lambda = if half.norm() > 0.0 {
        half / half.norm()
    } else {
        Complex::new(1.0, 0.0)
    };
    let distance = (1..=RIGIDITY_COEFFS)
        .map(|n| (coeff(n) - n as f64 * lambda.powu(n as u32 - 1)).norm())
        .fold(0.0, f64::max);
    (distance, lambda)
}

pub fn rigidity_probe(f: &CertifiedMap, mu_steps: usize, points: &[Complex]) -> RigidityReport {
    let a: Vec<Complex> = (0..=RIGIDITY_COEFFS).map(|n| f.h().coeff(n)).collect();
    let b: Vec<Complex> = (0..=RIGIDITY_COEFFS).map(|n| f.g().coeff(n)).collect();
    let steps = mu_steps.max(4);
    let step = PI / steps as f64;
    let (i, _) = (0..steps)
        .map(|i| (i, koebe_fit(&a, &b, step * i as f64).0))
        .fold(
            (0, f64::INFINITY),
            |acc, x| if x.1 < acc.1 { x } else { acc },
        );

    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (step * (i as f64 - 1.0), step * (i as f64 + 1.0));
    for _ in 0..100 {
        let x1 = hi - ratio * (hi - lo);
        let x2 = lo + ratio * (hi - lo);
        if koebe_fit(&a, &b, x1).0 > koebe_fit(&a, &b, x2).0 {
            lo = x1;
        } else {
            hi = x2;
        }
    }
    let candidates = [step * i as f64, 0.5 * (lo + hi)];
    let (mu, (distance, lambda)) = candidates.iter().map(|&m| (m, koebe_fit(&a, &b, m))).fold(
        (0.0, (f64::INFINITY, Complex::new(1.0, 0.0))),
        |acc, x| {
            if x.1 .0 < acc.1 .0 {
                x
            } else {
                acc
            }
        },
    );

    let detected = distance < RIGIDITY_TOL;
    let max_deviation = detected.then(|| match rotate_harmonic(&harmonic_l(), lambda) {
        Ok(l) => points
            .iter()
            .map(|&z| {
                let w = l.eval(z);
                (f.eval(z) - w).norm() / w.norm().max(1.0)
            })
            .fold(0.0, f64::max),
        Err(_) => f64::INFINITY,
    });
    let verdict = match max_deviation {
        None => RigidityVerdict::NotDetected,
        Some(d) if d <= MATCH_TOL => RigidityVerdict::Pass,
        Some(_) => RigidityVerdict::Violation,
    };
    RigidityReport {
        mu: mu.rem_euclid(PI),
        lambda,
        distance,
        detected,
        max_deviation,
        verdict,
    }
}
