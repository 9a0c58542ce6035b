//! Covering radius of analytic parts and the growth-order probe for `L`.

use crate::mappings::{harmonic_l, PlanarMap};
use serde::Serialize;
use std::f64::consts::TAU;

pub const DEFAULT_RADII: [f64; 3] = [0.9, 0.99, 0.999];
const COARSE_ANGLES: usize = 8192;
const GOLDEN_ITERS: usize = 80;

/// Extremum of `t ↦ |f(r e^{it})|` by a dense scan and golden-section
/// refinement around the best sample. `sign = 1` maximizes, `-1` minimizes.
fn extremum<M: PlanarMap + ?Sized>(f: &M, r: f64, sign: f64) -> (f64, f64) {
    let g = |t: f64| sign * f.eval(num_complex::Complex64::from_polar(r, t)).norm();
    let h = TAU / COARSE_ANGLES as f64;
    let (i, _) =
        (0..COARSE_ANGLES)
            .map(|i| (i, g(h * i as f64)))
            .fold(
                (0, f64::NEG_INFINITY),
                |acc, x| if x.1 > acc.1 { x } else { acc },
            );
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (h * (i as f64 - 1.0), h * (i as f64 + 1.0));
    for _ in 0..GOLDEN_ITERS {
        let x1 = hi - ratio * (hi - lo);
        let x2 = lo + ratio * (hi - lo);
        if g(x1) < g(x2) {
            lo = x1;
        } else {
            hi = x2;
        }
    }
    let t = 0.5 * (lo + hi);
    let best = g(t).max(g(h * i as f64));
    (t.rem_euclid(TAU), sign * best)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoveringRow {
    pub r: f64,
    pub min_modulus: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoveringReport {
    pub rows: Vec<CoveringRow>,
    /// `min_t |h(r e^{it})|` at the largest radius.
    pub estimate: f64,
    /// The minima never decrease along the radius sequence.
    pub nondecreasing: bool,
}

/// `min_t |h(r e^{it})|` along an increasing radius sequence.
pub fn covering_radius<M: PlanarMap + ?Sized>(h: &M, radii: &[f64]) -> CoveringReport {
    let rows: Vec<CoveringRow> = radii
        .iter()
        .map(|&r| CoveringRow {
            r,
            min_modulus: extremum(h, r, -1.0).1,
        })
        .collect();
    CoveringReport {
        estimate: rows.last().map_or(0.0, |r| r.min_modulus),
        nondecreasing: rows
            .windows(2)
            .all(|w| w[1].min_modulus >= w[0].min_modulus - 1e-12),
        rows,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrowthRow {
    pub r: f64,
    /// Angle of the maximum of `|L(r e^{it})|`.
    pub t: f64,
    /// `(1 - r)^2 max_t |L(r e^{it})|`.
    pub scaled_max: f64,
}

pub fn growth_order_l(radii: &[f64]) -> Vec<GrowthRow> {
    let l = harmonic_l();
    radii
        .iter()
        .map(|&r| {
            if r == 0.0 {
                return GrowthRow {
                    r,
                    t: 0.0,
                    scaled_max: 0.0,
                };
            }
            let (t, m) = extremum(&l, r, 1.0);
            GrowthRow {
                r,
                t,
                scaled_max: (1.0 - r).powi(2) * m,
            }
        })
        .collect()
}
