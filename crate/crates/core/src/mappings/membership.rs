//! Numerical certification of membership in `K_H` and `K_H^0`.
//!
//! Flags are certified at tested points only: normalization at the origin,
//! the Jacobian on the validation grid and chord points, and convexity of
//! `f(D)` through chords between images of the chord points.

use super::{polar_grid, validation_grid, HarmonicMap, NORMALIZATION_TOL};
use crate::analysis::convexity::{chord_convexity, convex_curve_check, DEFAULT_SAMPLES};
use crate::error::{Error, Result};
use num_complex::Complex64 as Complex;
use serde::Serialize;
use std::ops::Deref;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MembershipOptions {
    pub radii: Vec<f64>,
    pub angles: usize,
    pub angle_offset: f64,
    /// Radii at which image-curve convexity is reported (diagnostic only).
    pub curve_radii: Vec<f64>,
}

impl Default for MembershipOptions {
    fn default() -> Self {
        Self {
            radii: vec![0.5, 0.9, 0.99],
            angles: 12,
            angle_offset: 0.1,
            curve_radii: vec![0.5, 0.9, 0.99],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveDiagnostic {
    pub r: f64,
    pub convex: bool,
    pub min_cross: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassMembership {
    pub label: String,
    pub normalized: bool,
    pub orientation_ok: bool,
    pub convex: bool,
    pub in_kh: bool,
    pub in_k0h: bool,
    pub g_prime_at_zero: f64,
    pub min_jacobian: f64,
    pub chords_tested: usize,
    pub chords_failed: usize,
    pub first_failed_chord: Option<(Complex, Complex)>,
    pub curves: Vec<CurveDiagnostic>,
    pub normalization_tol: f64,
    pub options: MembershipOptions,
}

pub fn membership(f: &HarmonicMap) -> ClassMembership {
    membership_with(f, &MembershipOptions::default())
}

pub fn membership_with(f: &HarmonicMap, opts: &MembershipOptions) -> ClassMembership {
    let zero = Complex::new(0.0, 0.0);
    let residual = f
        .h()
        .eval(zero)
        .norm()
        .max(f.g().eval(zero).norm())
        .max((f.h().derivative(zero) - 1.0).norm());
    let normalized = residual <= NORMALIZATION_TOL;
    let g_prime_at_zero = f.g().derivative(zero).norm();

    let points = polar_grid(&opts.radii, opts.angles, opts.angle_offset);
    let min_jacobian = validation_grid()
        .into_iter()
        .chain(points.iter().copied())
        .map(|z| f.jacobian(z))
        .fold(f64::INFINITY, f64::min);
    let orientation_ok = min_jacobian > 0.0;

    let chords = chord_convexity(f, &points);
    let convex = orientation_ok && chords.failed == 0;
    let curves = opts
        .curve_radii
        .iter()
        .filter_map(|&r| convex_curve_check(f, r, DEFAULT_SAMPLES).ok())
        .map(|c| CurveDiagnostic {
            r: c.r,
            convex: c.convex,
            min_cross: c.min_cross,
        })
        .collect();

    let in_kh = normalized && orientation_ok && convex;
    ClassMembership {
        label: f.label().to_string(),
        normalized,
        orientation_ok,
        convex,
        in_kh,
        in_k0h: in_kh && g_prime_at_zero <= NORMALIZATION_TOL,
        g_prime_at_zero,
        min_jacobian,
        chords_tested: chords.tested,
        chords_failed: chords.failed,
        first_failed_chord: chords.first_failure,
        curves,
        normalization_tol: NORMALIZATION_TOL,
        options: opts.clone(),
    }
}

/// A harmonic map whose membership in `K_H^0` has been certified.
#[derive(Debug, Clone)]
pub struct CertifiedMap {
    map: HarmonicMap,
    membership: ClassMembership,
}

impl CertifiedMap {
    pub fn map(&self) -> &HarmonicMap {
        &self.map
    }

    pub fn membership(&self) -> &ClassMembership {
        &self.membership
    }

    pub fn into_inner(self) -> HarmonicMap {
        self.map
    }
}

impl Deref for CertifiedMap {
    type Target = HarmonicMap;

    fn deref(&self) -> &HarmonicMap {
        &self.map
    }
}

pub fn certify(f: HarmonicMap) -> Result<CertifiedMap> {
    let membership = membership(&f);
    if !membership.in_k0h {
        return Err(Error::MembershipNotCertified {
            label: f.label().to_string(),
        });
    }
    Ok(CertifiedMap { map: f, membership })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mappings::{
        halfplane_l, harmonic_l, identity, koebe, rotate_harmonic, strip_map, zero_map,
    };

    #[test]
    fn membership_examples() {
        let l = membership(&harmonic_l());
        assert!(l.in_k0h, "{l:?}");
        let k = membership(&HarmonicMap::analytic(koebe()).unwrap());
        assert!(!k.in_k0h);
        assert!(k.normalized && k.orientation_ok);
        assert!(membership(&HarmonicMap::analytic(identity()).unwrap()).in_k0h);
        assert!(membership(&HarmonicMap::analytic(strip_map()).unwrap()).in_k0h);
    }

    #[test]
    fn rotation_preserves_membership() {
        let l = harmonic_l();
        for lambda in [Complex::new(0.0, 1.0), Complex::from_polar(1.0, 2.3)] {
            let m = membership(&rotate_harmonic(&l, lambda).unwrap());
            assert!(m.in_k0h);
        }
    }

    #[test]
    fn g_prime_at_zero_separates_kh_from_k0h() {
        // ℓ + conj(c ℓ) with |c| < 1 is an affine image of the half-plane map.
        let c = Complex::new(0.3, 0.2);
        let g = halfplane_l()
            .combine(c, &zero_map(64), Complex::new(0.0, 0.0))
            .unwrap();
        let f = HarmonicMap::new("l+cz", halfplane_l(), g).unwrap();
        let m = membership(&f);
        assert!(m.in_kh && !m.in_k0h, "{m:?}");
        assert!(matches!(
            certify(f),
            Err(Error::MembershipNotCertified { .. })
        ));
    }
}
