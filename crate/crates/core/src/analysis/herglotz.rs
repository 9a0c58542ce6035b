//! Schwarz-function representation of a Carathéodory-type function.

use crate::error::{fmt_z, Error, Result};
use crate::mappings::{AnalyticMap, HarmonicMap, PointFn};
use crate::series::TruncatedSeries;
use num_complex::Complex64 as Complex;
use std::sync::Arc;

/// Matches the admissibility tolerance of the direction-pair search.
pub const HERGLOTZ_TOL: f64 = super::css2::ADMISSIBLE_TOL;
pub const ROUND_TRIP_TOL: f64 = 1e-9;
/// Relative slack in `|δ(z)| ≤ |z|`. The direction-pair search pins the
/// pair down from circles with `1 - r ≥ 1e-5`, and a pair admissible on the
/// disk of radius `R` only gives `|δ(z)| ≤ |z| / R`; the measured excess in
/// the default sweep stays below `3e-7`.
pub const SCHWARZ_TOL: f64 = 1e-6;

/// `q(z) = (h'(z) + e^{-2iα} g'(z)) (1 - e^{-2iβ} z^2)`. With the pair from
/// the direction search, `Re(e^{i(α+β)} q) ≥ 0` and `q(0) = 1`.
pub fn css2_q(f: &HarmonicMap, alpha: f64, beta: f64) -> Result<AnalyticMap> {
    let ra = Complex::from_polar(1.0, -2.0 * alpha);
    let rb = Complex::from_polar(1.0, -2.0 * beta);
    let order = f.h().series().order();
    let factor = TruncatedSeries::from_fn(order, |n| match n {
        0 => Complex::new(1.0, 0.0),
        2 => -rb,
        _ => Complex::new(0.0, 0.0),
    });
    let series = f
        .h()
        .series()
        .differentiate()
        .add(&f.g().series().differentiate().scale(ra))
        .mul(&factor);
    let (hp, gp) = (f.h().deriv_fn(), f.g().deriv_fn());
    AnalyticMap::from_value(
        format!("q[{}]", f.label()),
        move |z| (hp(z) + ra * gp(z)) * (1.0 - rb * z * z),
        series,
    )
}

#[derive(Debug, Clone)]
pub struct HerglotzResult {
    pub delta: AnalyticMap,
    pub alpha: f64,
    /// `max |δ(z)| / |z|` over the grid (at most 1 for a Schwarz function).
    pub max_schwarz_ratio: f64,
    pub schwarz_ok: bool,
    /// `max |q - (1 + e^{-2iα} δ)/(1 - δ)| / max(1, |q|)` over the grid.
    pub round_trip_error: f64,
}

/// `δ = (q - 1) / (q + e^{-2iα})` for `q(0) = 1` and `Re(e^{iα} q) ≥ 0`.
pub fn herglotz_delta(q: &AnalyticMap, alpha: f64, points: &[Complex]) -> Result<HerglotzResult> {
    let zero = Complex::new(0.0, 0.0);
    let q0 = q.eval(zero);
    if (q0 - 1.0).norm() > 1e-10 {
        return Err(Error::NotUnitAtOrigin { value: fmt_z(q0) });
    }
    if !(alpha.cos() > 1e-12) {
        return Err(Error::DegenerateAlpha { cos: alpha.cos() });
    }
    let rot = Complex::from_polar(1.0, alpha);
    for &z in points {
        let v = q.eval(z);
        let value = (rot * v).re;
        if value < -HERGLOTZ_TOL {
            return Err(Error::NotHerglotz { z: fmt_z(z), value });
        }
    }

    let e = Complex::from_polar(1.0, -2.0 * alpha);
    let order = q.series().order();
    let one = TruncatedSeries::constant(Complex::new(1.0, 0.0), order);
    let series = q
        .series()
        .sub(&one)
        .div(&q.series().add(&TruncatedSeries::constant(e, order)))?;
    let (qv, qd) = (q.value_fn(), q.deriv_fn());
    let value: PointFn = Arc::new(move |z| (qv(z) - 1.0) / (qv(z) + e));
    let qv = q.value_fn();
    let v = value.clone();
    let delta = AnalyticMap::from_parts(
        format!("delta[{}]", q.label()),
        value,
        Arc::new(move |z| qd(z) * (1.0 + e) / (qv(z) + e).powi(2)),
        Arc::new(move |a, b| v(b) - v(a)),
        series,
    )?;

    let mut max_ratio: f64 = 0.0;
    let mut round_trip: f64 = 0.0;
    for &z in points {
        let d = delta.eval(z);
        if z.norm() > 0.0 {
            max_ratio = max_ratio.max(d.norm() / z.norm());
        }
        let v = q.eval(z);
        let back = (1.0 + e * d) / (1.0 - d);
        round_trip = round_trip.max((back - v).norm() / v.norm().max(1.0));
    }
    Ok(HerglotzResult {
        delta,
        alpha,
        max_schwarz_ratio: max_ratio,
        schwarz_ok: delta_at_zero_ok(q, e) && max_ratio <= 1.0 + SCHWARZ_TOL,
        round_trip_error: round_trip,
    })
}

fn delta_at_zero_ok(q: &AnalyticMap, e: Complex) -> bool {
    let q0 = q.eval(Complex::new(0.0, 0.0));
    ((q0 - 1.0) / (q0 + e)).norm() <= 1e-10
}
