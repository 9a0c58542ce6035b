//! Disk automorphisms and the transform `F_a` that keeps `K_H^0` invariant.

use crate::error::{Error, Result};
use crate::mappings::{AnalyticMap, CertifiedMap, HarmonicMap};
use crate::series::{extract_coeffs, TruncatedSeries};
use num_complex::Complex64 as Complex;
use serde::Serialize;
use std::sync::Arc;

/// Largest `|a|` accepted by [`koebe_transform`].
pub const A_CAP: f64 = 0.9;
/// Smallest `1 - |ω(a)|^2` accepted by [`koebe_transform`].
pub const CONDITION_TOL: f64 = 1e-6;
/// Series order and sampling radius for the transformed parts.
pub const TRANSFORM_ORDER: usize = crate::series::DEFAULT_ORDER;
pub const TRANSFORM_RHO: f64 = 0.75;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AutomorphismParams {
    a: Complex,
}

impl AutomorphismParams {
    pub fn new(a: Complex) -> Result<Self> {
        if !(a.norm() < 1.0) {
            return Err(Error::OutsideDisk { modulus: a.norm() });
        }
        Ok(Self { a })
    }

    /// Parameters within the transform cap `|a| ≤ 0.9`.
    pub fn for_transform(a: Complex) -> Result<Self> {
        if !(a.norm() <= A_CAP) {
            return Err(Error::ACapExceeded {
                modulus: a.norm(),
                cap: A_CAP,
            });
        }
        Self::new(a)
    }

    pub fn a(&self) -> Complex {
        self.a
    }
}

fn mobius(a: Complex, z: Complex) -> Complex {
    (a - z) / (1.0 - a.conj() * z)
}

/// `φ_a(z) = (a - z) / (1 - conj(a) z)`.
pub fn disk_automorphism(a: Complex) -> Result<AnalyticMap> {
    let a = AutomorphismParams::new(a)?.a();
    let ab = a.conj();
    let k = a.norm_sqr() - 1.0;
    AnalyticMap::closed(
        format!("phi_{:.4}", a),
        move |z| mobius(a, z),
        move |z| k / (1.0 - ab * z).powi(2),
        TruncatedSeries::from_fn(crate::series::DEFAULT_ORDER, |n| {
            if n == 0 {
                a
            } else {
                k * ab.powu(n as u32 - 1)
            }
        }),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormalizationResiduals {
    pub f_at_zero: f64,
    pub h_prime_minus_one: f64,
    pub g_prime_at_zero: f64,
}

impl NormalizationResiduals {
    pub fn max(&self) -> f64 {
        self.f_at_zero
            .max(self.h_prime_minus_one)
            .max(self.g_prime_at_zero)
    }
}

#[derive(Debug, Clone)]
pub struct TransformResult {
    pub map: HarmonicMap,
    pub a: Complex,
    /// `μ_a = h'(a) / conj(h'(a))`.
    pub mu: Complex,
    pub omega_at_a: Complex,
    pub residuals: NormalizationResiduals,
    /// Unimodular factor `c` with `ω_F = c · φ_{ω(a)} ∘ ω ∘ φ_a`, fitted from
    /// the dilatation of the transformed map.
    pub fitted_prefactor: Complex,
}

struct Setup {
    a: Complex,
    omega_a: Complex,
    d: Complex,
    mu: Complex,
}

fn setup(f: &HarmonicMap, a: Complex) -> Result<Setup> {
    let a = AutomorphismParams::for_transform(a)?.a();
    let omega_a = f.dilatation_at(a);
    let value = 1.0 - omega_a.norm_sqr();
    if !(value >= CONDITION_TOL) {
        return Err(Error::IllConditioned { value });
    }
    let hp = f.h().derivative(a);
    Ok(Setup {
        a,
        omega_a,
        // Exact derivative at 0 of the numerator of H_a, so H_a'(0) = 1.
        d: -hp * (1.0 - a.norm_sqr()) * value,
        mu: hp / hp.conj(),
    })
}

/// Builds `u (h∘φ_a - h(a)) + v (g∘φ_a - g(a))` as an analytic map.
fn combination(
    label: String,
    f: &HarmonicMap,
    a: Complex,
    u: Complex,
    v: Complex,
) -> Result<AnalyticMap> {
    let (hd, gd) = (f.h().delta_fn(), f.g().delta_fn());
    let (hp, gp) = (f.h().deriv_fn(), f.g().deriv_fn());
    let ab = a.conj();
    let k = a.norm_sqr() - 1.0;
    let (hd1, gd1) = (hd.clone(), gd.clone());
    let value = move |z: Complex| {
        let w = mobius(a, z);
        u * hd1(a, w) + v * gd1(a, w)
    };
    let series = extract_coeffs(&value, TRANSFORM_ORDER, TRANSFORM_RHO)?;
    AnalyticMap::from_parts(
        label,
        Arc::new(value),
        Arc::new(move |z| {
            let w = mobius(a, z);
            (u * hp(w) + v * gp(w)) * k / (1.0 - ab * z).powi(2)
        }),
        Arc::new(move |p, q| {
            let (p, q) = (mobius(a, p), mobius(a, q));
            u * hd(p, q) + v * gd(p, q)
        }),
        series,
    )
}

/// `F_a = H_a + conj(G_a)` with
/// `H_a = [(h∘φ_a - h(a)) - conj(ω(a)) (g∘φ_a - g(a))] / D`,
/// `G_a = [(g∘φ_a - g(a)) - ω(a) (h∘φ_a - h(a))] / conj(D)` and
/// `D = -h'(a) (1 - |a|^2) (1 - |ω(a)|^2)`.
pub fn koebe_transform(f: &CertifiedMap, a: Complex) -> Result<TransformResult> {
    let s = setup(f, a)?;
    let (a, w, d) = (s.a, s.omega_a, s.d);
    let label = format!("F_{:.4}[{}]", a, f.label());
    let h = combination(format!("H[{label}]"), f, a, 1.0 / d, -w.conj() / d)?;
    let g = combination(
        format!("G[{label}]"),
        f,
        a,
        -w / d.conj(),
        Complex::new(1.0, 0.0) / d.conj(),
    )?;
    let map = HarmonicMap::new(label, h, g)?;

    let zero = Complex::new(0.0, 0.0);
    let residuals = NormalizationResiduals {
        f_at_zero: map.eval(zero).norm(),
        h_prime_minus_one: (map.h().derivative(zero) - 1.0).norm(),
        g_prime_at_zero: map.g().derivative(zero).norm(),
    };
    let fitted_prefactor = fit_prefactor(&map, f, a, w);
    Ok(TransformResult {
        map,
        a,
        mu: s.mu,
        omega_at_a: w,
        residuals,
        fitted_prefactor,
    })
}

fn fit_prefactor(map: &HarmonicMap, f: &HarmonicMap, a: Complex, w: Complex) -> Complex {
    let mut sum = Complex::new(0.0, 0.0);
    let mut weight = 0.0;
    for j in 0..16 {
        let z = Complex::from_polar(0.5, std::f64::consts::TAU * j as f64 / 16.0);
        let base = mobius(w, f.dilatation_at(mobius(a, z)));
        if base.norm() > 1e-3 {
            sum += map.dilatation_at(z) / base * base.norm();
            weight += base.norm();
        }
    }
    if weight == 0.0 {
        Complex::new(1.0, 0.0)
    } else {
        let c = sum / weight;
        c / c.norm()
    }
}

/// `ω_a(z) = -μ_a φ_{ω(a)}(ω(φ_a(z)))`.
pub fn transformed_dilatation(f: &CertifiedMap, a: Complex) -> Result<AnalyticMap> {
    let s = setup(f, a)?;
    let (a, w, mu) = (s.a, s.omega_a, s.mu);
    let (hp, gp) = (f.h().deriv_fn(), f.g().deriv_fn());
    let value = move |z: Complex| {
        let p = mobius(a, z);
        -mu * mobius(w, gp(p) / hp(p))
    };
    let series = extract_coeffs(&value, TRANSFORM_ORDER, TRANSFORM_RHO)?;
    AnalyticMap::from_value(format!("omega_{:.4}[{}]", a, f.label()), value, series)
}


#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn automorphism_is_an_involution_of_the_disk(
            ar in 0.0f64..0.95, at in 0.0f64..6.3, r in 0.0f64..0.999, t in 0.0f64..6.3,
        ) {
            let a = Complex::from_polar(ar, at);
            let phi = disk_automorphism(a).unwrap();
            let z = Complex::from_polar(r, t);
            let w = phi.eval(z);
            prop_assert!(w.norm() < 1.0);
            prop_assert!((phi.eval(w) - z).norm() < 1e-9);
            prop_assert!(phi.eval(a).norm() < 1e-15);
        }
    }
}
