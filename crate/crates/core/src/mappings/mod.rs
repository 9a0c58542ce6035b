//! Analytic and harmonic maps of the unit disk.
//!
//! An [`AnalyticMap`] carries a closed-form (or quadrature-backed) point
//! evaluator, its derivative, and a cached [`TruncatedSeries`]. The evaluator
//! is authoritative near the boundary; the series exists for coefficient
//! statements. A [`HarmonicMap`] is the pair `(h, g)` standing for
//! `f = h + conj(g)`.

mod catalog;
mod membership;
mod shear;

pub use catalog::{
    dilatation_blaschke, dilatation_monomial, halfplane_l, harmonic_l, identity, koebe, strip_map,
    zero_map, Catalog, CatalogEntry, DILATATION_SPECS, ENTRIES,
};
pub use membership::{certify, membership, CertifiedMap, ClassMembership, MembershipOptions};
pub use shear::shear;

use crate::error::{fmt_z, Error, Result};
use crate::quadrature::integrate_segment;
use crate::rng::SplitMix64;
use crate::series::TruncatedSeries;
use num_complex::Complex64 as Complex;
use std::f64::consts::TAU;
use std::fmt;
use std::sync::Arc;

pub type PointFn = Arc<dyn Fn(Complex) -> Complex + Send + Sync>;
pub type SegmentFn = Arc<dyn Fn(Complex, Complex) -> Complex + Send + Sync>;

/// Relative agreement required between evaluator and cached series.
pub const EVAL_TOL: f64 = 1e-9;
const VALIDATION_POINTS: usize = 20;
const VALIDATION_SEED: u64 = 0x005E_ED0F_D15C;

/// Anything that maps disk points to the plane.
pub trait PlanarMap {
    fn eval(&self, z: Complex) -> Complex;
}

#[derive(Clone)]
pub struct AnalyticMap {
    label: String,
    value: PointFn,
    deriv: PointFn,
    delta: SegmentFn,
    series: TruncatedSeries,
}

impl fmt::Debug for AnalyticMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AnalyticMap")
            .field("label", &self.label)
            .field("order", &self.series.order())
            .finish()
    }
}

impl AnalyticMap {
    /// Map with closed-form value and derivative.
    pub fn closed(
        label: impl Into<String>,
        value: impl Fn(Complex) -> Complex + Send + Sync + 'static,
        deriv: impl Fn(Complex) -> Complex + Send + Sync + 'static,
        series: TruncatedSeries,
    ) -> Result<Self> {
        let value: PointFn = Arc::new(value);
        let v = value.clone();
        Self::from_parts(
            label.into(),
            value,
            Arc::new(deriv),
            Arc::new(move |a, b| v(b) - v(a)),
            series,
        )
    }

    /// Map with closed-form value; the derivative comes from a Cauchy integral
    /// on a small circle around the point.
    pub fn from_value(
        label: impl Into<String>,
        value: impl Fn(Complex) -> Complex + Send + Sync + 'static,
        series: TruncatedSeries,
    ) -> Result<Self> {
        let value: PointFn = Arc::new(value);
        let (v1, v2) = (value.clone(), value.clone());
        Self::from_parts(
            label.into(),
            value,
            Arc::new(move |z| contour_derivative(&*v1, z)),
            Arc::new(move |a, b| v2(b) - v2(a)),
            series,
        )
    }

    /// Map known through its derivative, normalized by `value(0) = 0`.
    /// Values are path integrals of the derivative.
    pub fn from_derivative(
        label: impl Into<String>,
        deriv: impl Fn(Complex) -> Complex + Send + Sync + 'static,
        series: TruncatedSeries,
    ) -> Result<Self> {
        let deriv: PointFn = Arc::new(deriv);
        let (d1, d2) = (deriv.clone(), deriv.clone());
        Self::from_parts(
            label.into(),
            Arc::new(move |z| integrate_segment(&*d1, Complex::new(0.0, 0.0), z)),
            deriv,
            Arc::new(move |a, b| integrate_segment(&*d2, a, b)),
            series,
        )
    }

    pub(crate) fn from_parts(
        label: String,
        value: PointFn,
        deriv: PointFn,
        delta: SegmentFn,
        series: TruncatedSeries,
    ) -> Result<Self> {
        let map = Self {
            label,
            value,
            deriv,
            delta,
            series,
        };
        map.validate()?;
        Ok(map)
    }

    fn validate(&self) -> Result<()> {
        let sd = self.series.differentiate();
        let mut rng = SplitMix64::new(VALIDATION_SEED);
        for _ in 0..VALIDATION_POINTS {
            let z = rng.disk_point(0.5);
            let v = self.eval(z);
            let d = self.derivative(z);
            if !v.is_finite() || !d.is_finite() {
                return Err(Error::NonFinite("map evaluator"));
            }
            let ev = (self.series.horner(z) - v).norm() / v.norm().max(1.0);
            let ed = (sd.horner(z) - d).norm() / d.norm().max(1.0);
            let error = ev.max(ed / 10.0);
            if error > EVAL_TOL {
                return Err(Error::SeriesMismatch {
                    label: self.label.clone(),
                    z: fmt_z(z),
                    error,
                });
            }
        }
        Ok(())
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn eval(&self, z: Complex) -> Complex {
        (self.value)(z)
    }

    pub fn derivative(&self, z: Complex) -> Complex {
        (self.deriv)(z)
    }

    /// `self(b) - self(a)`, integrated along the segment when the map is
    /// quadrature-backed.
    pub fn increment(&self, a: Complex, b: Complex) -> Complex {
        (self.delta)(a, b)
    }

    pub fn series(&self) -> &TruncatedSeries {
        &self.series
    }

    pub fn coeff(&self, n: usize) -> Complex {
        self.series.coeff(n)
    }

    pub(crate) fn value_fn(&self) -> PointFn {
        self.value.clone()
    }

    pub(crate) fn deriv_fn(&self) -> PointFn {
        self.deriv.clone()
    }

    pub(crate) fn delta_fn(&self) -> SegmentFn {
        self.delta.clone()
    }

    /// `z ↦ outer * self(inner * z)` for unimodular `inner`.
    pub fn rescaled(&self, outer: Complex, inner: Complex) -> Result<Self> {
        check_unimodular(inner)?;
        let (v, d, dl) = (self.value_fn(), self.deriv_fn(), self.delta_fn());
        let series = TruncatedSeries::from_fn(self.series.order(), |n| {
            outer * inner.powu(n as u32) * self.series.coeff(n)
        });
        Self::from_parts(
            format!("{}∘rot", self.label),
            Arc::new(move |z| outer * v(inner * z)),
            Arc::new(move |z| outer * inner * d(inner * z)),
            Arc::new(move |a, b| outer * dl(inner * a, inner * b)),
            series,
        )
    }

    /// Rotation `z ↦ conj(λ) φ(λ z)`.
    pub fn rotated(&self, lambda: Complex) -> Result<Self> {
        Ok(self.rescaled(lambda.conj(), lambda)?.with_label(format!(
            "{}_rot({:.4})",
            self.label,
            lambda.arg()
        )))
    }

    /// `a * self + b * other`.
    pub fn combine(&self, a: Complex, other: &Self, b: Complex) -> Result<Self> {
        let (v1, d1, l1) = (self.value_fn(), self.deriv_fn(), self.delta_fn());
        let (v2, d2, l2) = (other.value_fn(), other.deriv_fn(), other.delta_fn());
        Self::from_parts(
            format!("({}){}", self.label, other.label),
            Arc::new(move |z| a * v1(z) + b * v2(z)),
            Arc::new(move |z| a * d1(z) + b * d2(z)),
            Arc::new(move |p, q| a * l1(p, q) + b * l2(p, q)),
            self.series.scale(a).add(&other.series.scale(b)),
        )
    }
}

impl PlanarMap for AnalyticMap {
    fn eval(&self, z: Complex) -> Complex {
        AnalyticMap::eval(self, z)
    }
}

/// Rotation `z ↦ conj(λ) φ(λ z)` of an analytic map.
pub fn rotate_analytic(phi: &AnalyticMap, lambda: Complex) -> Result<AnalyticMap> {
    phi.rotated(lambda)
}

pub(crate) fn check_unimodular(lambda: Complex) -> Result<()> {
    if (lambda.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::NotUnimodular {
            modulus: lambda.norm(),
        });
    }
    Ok(())
}

/// Derivative of an analytic function by the trapezoidal Cauchy integral on
/// a circle of radius (1 - |z|) / 4 about `z`.
pub fn contour_derivative(f: &(dyn Fn(Complex) -> Complex + Send + Sync), z: Complex) -> Complex {
    const NODES: usize = 32;
    let eps = (1.0 - z.norm()).max(1e-12) / 4.0;
    let sum: Complex = (0..NODES)
        .map(|j| {
            let w = Complex::from_polar(1.0, TAU * j as f64 / NODES as f64);
            f(z + w * eps) * w.conj()
        })
        .sum();
    sum / (NODES as f64 * eps)
}

/// Radii and angle count of the grid used to validate harmonic maps.
pub const VALIDATION_RADII: [f64; 6] = [0.1, 0.3, 0.5, 0.7, 0.9, 0.99];
pub const VALIDATION_ANGLES: usize = 32;
pub const NORMALIZATION_TOL: f64 = 1e-10;

pub fn validation_grid() -> Vec<Complex> {
    polar_grid(&VALIDATION_RADII, VALIDATION_ANGLES, 0.0)
}

/// `radii × angles` with the angle sequence offset by `offset` radians.
pub fn polar_grid(radii: &[f64], angles: usize, offset: f64) -> Vec<Complex> {
    radii
        .iter()
        .flat_map(|&r| {
            (0..angles)
                .map(move |j| Complex::from_polar(r, offset + TAU * j as f64 / angles as f64))
        })
        .collect()
}

/// `f = h + conj(g)`, normalized with `h(0) = g(0) = 0`, `h'(0) = 1` and
/// orientation-preserving on the validation grid.
#[derive(Clone, Debug)]
pub struct HarmonicMap {
    label: String,
    h: AnalyticMap,
    g: AnalyticMap,
}

impl HarmonicMap {
    pub fn new(label: impl Into<String>, h: AnalyticMap, g: AnalyticMap) -> Result<Self> {
        let f = Self {
            label: label.into(),
            h,
            g,
        };
        f.validate()?;
        Ok(f)
    }

    /// The analytic map `φ` viewed as `φ + conj(0)`.
    pub fn analytic(phi: AnalyticMap) -> Result<Self> {
        let order = phi.series().order();
        let label = phi.label().to_string();
        Self::new(label, phi, zero_map(order))
    }

    fn validate(&self) -> Result<()> {
        let zero = Complex::new(0.0, 0.0);
        let checks = [
            ("h(0)", self.h.eval(zero).norm()),
            ("g(0)", self.g.eval(zero).norm()),
            ("h'(0) - 1", (self.h.derivative(zero) - 1.0).norm()),
        ];
        for (which, residual) in checks {
            if !(residual <= NORMALIZATION_TOL) {
                return Err(Error::NotNormalized {
                    label: self.label.clone(),
                    which,
                    residual,
                });
            }
        }
        for z in validation_grid() {
            let jacobian = self.jacobian(z);
            if !(jacobian > 0.0) {
                return Err(Error::NotOrientationPreserving {
                    label: self.label.clone(),
                    z: fmt_z(z),
                    jacobian,
                });
            }
        }
        Ok(())
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn h(&self) -> &AnalyticMap {
        &self.h
    }

    pub fn g(&self) -> &AnalyticMap {
        &self.g
    }

    pub fn eval(&self, z: Complex) -> Complex {
        self.h.eval(z) + self.g.eval(z).conj()
    }

    pub fn increment(&self, a: Complex, b: Complex) -> Complex {
        self.h.increment(a, b) + self.g.increment(a, b).conj()
    }

    /// `|h'|^2 - |g'|^2`.
    pub fn jacobian(&self, z: Complex) -> f64 {
        self.h.derivative(z).norm_sqr() - self.g.derivative(z).norm_sqr()
    }

    /// `g'(z) / h'(z)`.
    pub fn dilatation_at(&self, z: Complex) -> Complex {
        self.g.derivative(z) / self.h.derivative(z)
    }

    /// Solves `df = h' dz + conj(g' dz)` for `dz`.
    pub fn inverse_differential(&self, z: Complex, dw: Complex) -> Complex {
        let hp = self.h.derivative(z);
        let gp = self.g.derivative(z);
        (hp.conj() * dw - gp.conj() * dw.conj()) / (hp.norm_sqr() - gp.norm_sqr())
    }
}

impl PlanarMap for HarmonicMap {
    fn eval(&self, z: Complex) -> Complex {
        HarmonicMap::eval(self, z)
    }
}

/// `f_λ(z) = conj(λ) f(λ z)`: `h_λ(z) = conj(λ) h(λz)`, `g_λ(z) = λ g(λz)`.
pub fn rotate_harmonic(f: &HarmonicMap, lambda: Complex) -> Result<HarmonicMap> {
    let h = f.h.rescaled(lambda.conj(), lambda)?;
    let g = f.g.rescaled(lambda, lambda)?;
    HarmonicMap::new(format!("{}_rot({:.4})", f.label, lambda.arg()), h, g)
}

pub fn evaluate_harmonic(f: &HarmonicMap, z: Complex) -> Complex {
    f.eval(z)
}

/// Dilatation `ω = g'/h'` as an analytic map.
pub fn dilatation(f: &HarmonicMap) -> Result<AnalyticMap> {
    let vanishing = |z: Complex| Error::VanishingDerivative {
        label: f.label.clone(),
        z: fmt_z(z),
    };
    for z in std::iter::once(Complex::new(0.0, 0.0)).chain(validation_grid()) {
        if f.h.derivative(z).norm() < 1e-12 {
            return Err(vanishing(z));
        }
    }
    let hp = f.h.series().differentiate();
    let gp = f.g.series().differentiate();
    let series = gp.div(&hp).map_err(|_| vanishing(Complex::new(0.0, 0.0)))?;
    let (h, g) = (f.h.deriv_fn(), f.g.deriv_fn());
    AnalyticMap::from_value(format!("ω[{}]", f.label), move |z| g(z) / h(z), series)
}


#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn rotation_round_trip(a in 0.0f64..6.3, r in 0.0f64..0.95, t in 0.0f64..6.3) {
            let l = harmonic_l();
            let lambda = Complex::from_polar(1.0, a);
            let rotated = rotate_harmonic(&l, lambda).unwrap();
            let back = rotate_harmonic(&rotated, lambda.conj()).unwrap();
            let z = Complex::from_polar(r, t);
            let w = l.eval(z);
            prop_assert!((back.eval(z) - w).norm() <= 1e-12 * w.norm().max(1.0));
            let direct = lambda.conj() * l.eval(lambda * z);
            prop_assert!((rotated.eval(z) - direct).norm() <= 1e-12 * w.norm().max(1.0));
            prop_assert!((rotated.jacobian(z) - l.jacobian(lambda * z)).abs()
                <= 1e-9 * l.jacobian(lambda * z).max(1.0));
        }

        #[test]
        fn rotation_keeps_coefficient_moduli(a in 0.0f64..6.3, n in 1usize..20) {
            let l = harmonic_l();
            let rotated = rotate_harmonic(&l, Complex::from_polar(1.0, a)).unwrap();
            prop_assert!((rotated.h().coeff(n).norm() - l.h().coeff(n).norm()).abs() < 1e-12);
            prop_assert!((rotated.g().coeff(n).norm() - l.g().coeff(n).norm()).abs() < 1e-12);
        }
    }
}
