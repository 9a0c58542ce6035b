//! Search for a direction pair `(α, β)` with
//! `Re(e^{i(α+β)} (h' + e^{-2iα} g')(1 - e^{-2iβ} z^2)) ≥ 0` on the disk.
//!
//! The expression factors as `Re((e^{iα} h' + e^{-iα} g')(e^{iβ} - e^{-iβ} z^2))`,
//! the real part of an analytic function, so its minimum over `|z| ≤ r` sits
//! on the circle `|z| = r`.

use crate::error::{Error, Result};
use crate::mappings::HarmonicMap;
use num_complex::Complex64 as Complex;
use serde::Serialize;
use std::f64::consts::{PI, TAU};

pub const DEFAULT_ANGLE_STEPS: usize = 360;
pub const ADMISSIBLE_TOL: f64 = 1e-6;
const GOLDEN_ITERS: usize = 80;
const SCAN_SAMPLES: usize = 64;
/// Finest `α` scan spacing in units of `(1 - r)²`.
const SCAN_SPACING: f64 = 0.25;
const MAX_SCAN: usize = 1 << 14;
const MAX_RUNS: usize = 8;
/// Values of `1 - r` for the boundary circles that pin the pair down.
const CIRCLE_GAPS: [f64; 5] = [1e-1, 1e-2, 1e-3, 1e-4, 1e-5];
const CIRCLE_SAMPLES: usize = 4096;
/// Dense patches added around the most active points of each circle.
const PATCHES: usize = 4;
/// Patch spacing in units of `1 - r`.
const PATCH_SPACING: f64 = 0.5;
const MAX_PATCH: usize = 4096;
const NARROW_INTERVAL: f64 = 1e-3;
const EXTRAPOLATION_AGREEMENT: f64 = 1e-9;

fn wrap(x: f64) -> f64 {
    (x + PI).rem_euclid(TAU) - PI
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DirectionPair {
    pub alpha: f64,
    pub beta: f64,
    pub min_residual: f64,
}

struct Tables {
    hp: Vec<Complex>,
    gp: Vec<Complex>,
    z2: Vec<Complex>,
}

impl Tables {
    fn new(f: &HarmonicMap, points: &[Complex]) -> Self {
        Self {
            hp: points.iter().map(|&z| f.h().derivative(z)).collect(),
            gp: points.iter().map(|&z| f.g().derivative(z)).collect(),
            z2: points.iter().map(|&z| z * z).collect(),
        }
    }

    fn a_row(&self, alpha: f64) -> Vec<Complex> {
        let (e, ec) = (
            Complex::from_polar(1.0, alpha),
            Complex::from_polar(1.0, -alpha),
        );
        self.hp
            .iter()
            .zip(&self.gp)
            .map(|(&h, &g)| e * h + ec * g)
            .collect()
    }

    fn b_row(&self, beta: f64) -> Vec<Complex> {
        let (e, ec) = (
            Complex::from_polar(1.0, beta),
            Complex::from_polar(1.0, -beta),
        );
        self.z2.iter().map(|&z2| e - ec * z2).collect()
    }

    fn objective(&self, alpha: f64, beta: f64) -> f64 {
        min_product(&self.a_row(alpha), &self.b_row(beta))
    }
}

fn min_product(a: &[Complex], b: &[Complex]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.re * y.re - x.im * y.im)
        .fold(f64::INFINITY, f64::min)
}

/// `min_z Re(e^{i(α+β)} (h' + e^{-2iα} g')(1 - e^{-2iβ} z^2))` at one pair.
pub fn css2_residual(f: &HarmonicMap, alpha: f64, beta: f64, points: &[Complex]) -> f64 {
    Tables::new(f, points).objective(alpha, beta)
}

/// Admissible `β` arc for fixed `α`.
///
/// At each point the constraint reads `Re(e^{iβ} c) ≥ 0` with
/// `c = A - conj(A z²)`, `A = e^{iα} h' + e^{-iα} g'`, so the admissible `β`
/// form an arc of width `π - (angular spread of the arguments of c)`.
/// A negative width means no `β` works for this `α`.
#[derive(Debug, Clone, Copy)]
struct BetaArc {
    center: f64,
    width: f64,
}

impl Tables {
    fn beta_arc(&self, alpha: f64) -> BetaArc {
        let c: Vec<Complex> = self
            .a_row(alpha)
            .iter()
            .zip(&self.z2)
            .map(|(&a, &z2)| a - (a * z2).conj())
            .filter(|c| c.norm() > f64::MIN_POSITIVE)
            .map(|c| c / c.norm())
            .collect();
        let sum: Complex = c.iter().sum();
        if c.is_empty() || sum.norm() < f64::MIN_POSITIVE {
            return BetaArc {
                center: 0.0,
                width: if c.is_empty() { TAU } else { -PI },
            };
        }
        // Arguments relative to the mean direction; when they fit in a half
        // circle this is the exact spread, otherwise the width is negative
        // either way.
        let reference = sum / sum.norm();
        let (lo, hi) = c.iter().fold((PI, -PI), |(lo, hi), &u| {
            let t = (u * reference.conj()).arg();
            (lo.min(t), hi.max(t))
        });
        BetaArc {
            center: -(reference.arg() + (lo + hi) / 2.0),
            width: PI - (hi - lo),
        }
    }
}

/// Unit vector of `c = A - conj(A z²)` with `A = e^{iα} h' + e^{-iα} g'`.
fn unit_c(a: Complex, z2: Complex) -> Option<Complex> {
    let c = a - (a * z2).conj();
    let n = c.norm();
    (n > f64::MIN_POSITIVE).then(|| c / n)
}

/// A circle `|z| = r` sampled at sorted angles; the extreme arguments of `c`
/// are refined between samples, so the arc is that of the full circle.
struct Circle<'a> {
    f: &'a HarmonicMap,
    r: f64,
    theta: Vec<f64>,
    table: Tables,
}

impl<'a> Circle<'a> {
    fn new(f: &'a HarmonicMap, r: f64, mut theta: Vec<f64>) -> Self {
        for t in &mut theta {
            *t = t.rem_euclid(TAU);
        }
        theta.sort_by(f64::total_cmp);
        theta.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
        let points: Vec<Complex> = theta.iter().map(|&t| Complex::from_polar(r, t)).collect();
        Self {
            f,
            r,
            theta,
            table: Tables::new(f, &points),
        }
    }

    fn unit_c_at(&self, alpha: f64, theta: f64) -> Option<Complex> {
        let z = Complex::from_polar(self.r, theta);
        let a = Complex::from_polar(1.0, alpha) * self.f.h().derivative(z)
            + Complex::from_polar(1.0, -alpha) * self.f.g().derivative(z);
        unit_c(a, z * z)
    }

    /// Angles bracketing sample `i` by its neighbors.
    fn bracket(&self, i: usize) -> (f64, f64) {
        let n = self.theta.len();
        let prev = if i == 0 {
            self.theta[n - 1] - TAU
        } else {
            self.theta[i - 1]
        };
        let next = if i + 1 == n {
            self.theta[0] + TAU
        } else {
            self.theta[i + 1]
        };
        (prev, next)
    }

    fn beta_arc(&self, alpha: f64) -> BetaArc {
        let units: Vec<Option<Complex>> = self
            .table
            .a_row(alpha)
            .iter()
            .zip(&self.table.z2)
            .map(|(&a, &z2)| unit_c(a, z2))
            .collect();
        let sum: Complex = units.iter().flatten().sum();
        if sum.norm() < 1e-9 {
            return BetaArc {
                center: 0.0,
                width: -PI,
            };
        }
        let reference = sum / sum.norm();
        let rel = |u: Complex| (u * reference.conj()).arg();
        let (mut lo, mut hi) = ((0, PI), (0, -PI));
        for (i, u) in units.iter().enumerate() {
            if let Some(u) = u {
                let t = rel(*u);
                if t < lo.1 {
                    lo = (i, t);
                }
                if t > hi.1 {
                    hi = (i, t);
                }
            }
        }
        let rel_at = |theta: f64| self.unit_c_at(alpha, theta).map_or(0.0, rel);
        let (a, b) = self.bracket(lo.0);
        let lo = lo.1.min(-golden_max(|t| -rel_at(t), a, b).1);
        let (a, b) = self.bracket(hi.0);
        let hi = hi.1.max(golden_max(rel_at, a, b).1);
        BetaArc {
            center: -(reference.arg() + (lo + hi) / 2.0),
            width: PI - (hi - lo),
        }
    }

    /// Angles of the `count` deepest local minima of the angular margin
    /// `cos(β + arg c)` at `(α, β)`.
    fn active(&self, alpha: f64, beta: f64, count: usize) -> Vec<f64> {
        let e = Complex::from_polar(1.0, beta);
        let margin: Vec<f64> = self
            .table
            .a_row(alpha)
            .iter()
            .zip(&self.table.z2)
            .map(|(&a, &z2)| unit_c(a, z2).map_or(f64::INFINITY, |u| (e * u).re))
            .collect();
        let n = margin.len();
        let mut minima: Vec<usize> = (0..n)
            .filter(|&i| margin[i] <= margin[(i + n - 1) % n] && margin[i] <= margin[(i + 1) % n])
            .collect();
        minima.sort_by(|&i, &j| margin[i].total_cmp(&margin[j]));
        minima.truncate(count);
        minima.into_iter().map(|i| self.theta[i]).collect()
    }
}

/// Golden-section maximization of a unimodal function on `[lo, hi]`.
fn golden_max(g: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - r * (hi - lo);
    let mut x2 = lo + r * (hi - lo);
    let (mut f1, mut f2) = (g(x1), g(x2));
    for _ in 0..GOLDEN_ITERS {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = g(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = g(x1);
        }
        if hi - lo < 1e-15 * (1.0 + lo.abs()) {
            break;
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// A maximal run of admissible scan samples: `inner` spans the admissible
/// samples, `outer` widens it by one spacing on both sides.
#[derive(Debug, Clone, Copy)]
struct Run {
    inner: (f64, f64),
    outer: (f64, f64),
}

/// Runs of `[lo, hi]` where the arc width is nonnegative at `n + 1` equally
/// spaced samples.
fn feasible_runs(arc: &impl Fn(f64) -> BetaArc, lo: f64, hi: f64, n: usize) -> Vec<Run> {
    let h = (hi - lo) / n as f64;
    let at = |i: usize| lo + h * i as f64;
    let ok: Vec<bool> = (0..=n).map(|i| arc(at(i)).width >= 0.0).collect();
    let mut runs = Vec::new();
    let mut i = 0;
    while i <= n {
        if ok[i] {
            let start = i;
            while i < n && ok[i + 1] {
                i += 1;
            }
            runs.push(Run {
                inner: (at(start), at(i)),
                outer: (at(start) - h, at(i) + h),
            });
        }
        i += 1;
    }
    runs
}

/// Bisection for the edge of the admissible set between an admissible
/// `inside` and `outside`.
fn edge(arc: &impl Fn(f64) -> BetaArc, mut inside: f64, mut outside: f64) -> f64 {
    for _ in 0..GOLDEN_ITERS {
        let mid = 0.5 * (inside + outside);
        if mid == inside || mid == outside {
            break;
        }
        if arc(mid).width >= 0.0 {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    inside
}

/// New runs, midpoint `α` and interval length.
type Refined = (Vec<(f64, f64)>, f64, f64);

/// Rescans `runs` for admissible `α`, refining the scan geometrically until
/// something admissible shows up or the spacing drops below `min_spacing`.
/// Returns the new runs (at most `MAX_RUNS`), the midpoint of the admissible
/// interval of the run with the widest arc, and the length of that interval.
/// The midpoint rather than the widest arc, because the width can be flat
/// across the interval.
fn refine_runs(
    arc: &impl Fn(f64) -> BetaArc,
    runs: &[(f64, f64)],
    first_scan: usize,
    min_spacing: f64,
) -> Option<Refined> {
    let widest = runs.iter().map(|r| r.1 - r.0).fold(0.0, f64::max);
    let mut n = first_scan;
    let mut next = loop {
        let next: Vec<Run> = runs
            .iter()
            .flat_map(|&(lo, hi)| feasible_runs(arc, lo, hi, n))
            .collect();
        if !next.is_empty() || widest / (n as f64) < min_spacing || n >= MAX_SCAN {
            break next;
        }
        n *= 4;
    };
    if next.is_empty() {
        return None;
    }
    next.sort_by(|a, b| (b.outer.1 - b.outer.0).total_cmp(&(a.outer.1 - a.outer.0)));
    next.truncate(MAX_RUNS);
    let best = next
        .iter()
        .map(|run| {
            (
                run,
                golden_max(|a| arc(a).width, run.outer.0, run.outer.1).1,
            )
        })
        .fold((&next[0], f64::NEG_INFINITY), |acc, x| {
            if x.1 > acc.1 {
                x
            } else {
                acc
            }
        })
        .0;
    let lo = edge(arc, best.inner.0, best.outer.0);
    let hi = edge(arc, best.inner.1, best.outer.1);
    let alpha = 0.5 * (lo + hi);
    Some((next.iter().map(|r| r.outer).collect(), alpha, hi - lo))
}

/// Polynomial extrapolation to `1 - r = 0` through the last `k`
/// `(1 - r, α, β)` points.
fn extrapolate(track: &[(f64, f64, f64)], k: usize) -> Option<(f64, f64)> {
    let pts = &track[track.len().saturating_sub(k)..];
    if pts.len() < 2 {
        return None;
    }
    let (_, a_ref, b_ref) = pts[pts.len() - 1];
    // Lagrange weights at x = 0.
    let weight = |i: usize| {
        pts.iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, p)| p.0 / (p.0 - pts[i].0))
            .product::<f64>()
    };
    let (mut a, mut b) = (a_ref, b_ref);
    for (i, p) in pts.iter().enumerate() {
        let w = weight(i);
        a += w * (p.1 - a_ref);
        b += w * wrap(p.2 - b_ref);
    }
    Some((a, b))
}

/// Search for an admissible pair; `min_residual` is the minimum over `points`.
///
/// For fixed `α` the admissible `β` form an arc that is computed exactly, so
/// the search runs over `α` alone and takes `β` at the arc center, which
/// maximizes the angular margin `min_z cos(β + arg c)`.
///
/// The admissible `α` set can shrink far below any grid spacing near the
/// boundary: for the half-plane map it tends to a single point, and outside
/// it the width has plateaus and near-discontinuous cliffs. So `points` are
/// first scanned on an `angle_steps` grid over `[0, π)`, which suffices
/// because `(α + π, β + π)` gives the same expression, and then a sequence of
/// circles closing in on `|z| = 1` is admitted one at a time. Each circle
/// rescans only the admissible runs of the previous one, since the admissible
/// set of a larger disk is smaller, and gets dense patches around the points
/// where the constraint is active. Each circle contributes the midpoint of
/// its admissible `α` interval, which drifts smoothly in `1 - r`, so the last
/// three circles are extrapolated to `r = 1`; the extrapolated pair is kept
/// only if it agrees with the two-circle extrapolation, stays admissible on
/// the last circle and moves less than the last step did.
pub fn css2_search(
    f: &HarmonicMap,
    points: &[Complex],
    angle_steps: usize,
) -> Result<DirectionPair> {
    if points.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let steps = angle_steps.max(4);
    let step = PI / steps as f64;
    let grid = Tables::new(f, points);
    let grid_arc = |a: f64| grid.beta_arc(a);

    let (alpha, beta) = match refine_runs(&grid_arc, &[(-step, PI + step)], steps + 2, 0.0) {
        None => {
            // Nothing admissible even on the grid: report the best grid
            // angle so the caller sees how far off the best pair is.
            let alpha = (0..steps)
                .map(|i| step * i as f64)
                .max_by(|&a, &b| grid.beta_arc(a).width.total_cmp(&grid.beta_arc(b).width))
                .unwrap_or(0.0);
            (alpha, grid.beta_arc(alpha).center)
        }
        Some((mut runs, mut alpha, mut interval)) => {
            let mut beta = grid.beta_arc(alpha).center;
            // (1 - r, α, β) per circle, and the circles themselves.
            let mut track: Vec<(f64, f64, f64)> = Vec::new();
            let mut circles: Vec<Circle> = Vec::new();
            for &gap in &CIRCLE_GAPS {
                let r = 1.0 - gap;
                let base = Circle::new(
                    f,
                    r,
                    (0..CIRCLE_SAMPLES)
                        .map(|i| TAU * i as f64 / CIRCLE_SAMPLES as f64)
                        .collect(),
                );
                let spacing = TAU / CIRCLE_SAMPLES as f64;
                let h = PATCH_SPACING * gap;
                let m = ((spacing / h).ceil() as usize).min(MAX_PATCH / 2);
                let mut theta = base.theta.clone();
                for center in base.active(alpha, beta, PATCHES) {
                    theta.extend((0..=2 * m).map(|j| center + h * (j as f64 - m as f64)));
                }
                let circle = Circle::new(f, r, theta);
                let arc = |a: f64| circle.beta_arc(a);
                let Some((next, a, len)) =
                    refine_runs(&arc, &runs, SCAN_SAMPLES, SCAN_SPACING * gap * gap)
                else {
                    break;
                };
                // A narrow admissible interval that stops shrinking has hit
                // the floating-point floor; deeper circles only add noise.
                if interval < NARROW_INTERVAL && len > 0.5 * interval {
                    break;
                }
                interval = len;
                runs = next;
                alpha = a;
                beta = circle.beta_arc(alpha).center;
                track.push((gap, alpha, beta));
                circles.push(circle);
            }
            // Extrapolations of different orders disagree when the midpoints
            // are noisy rather than smooth in `1 - r`.
            let smooth = match (extrapolate(&track, 3), extrapolate(&track, 2)) {
                (Some(p3), Some(p2)) if track.len() >= 3 => {
                    ((p3.0 - p2.0).abs().max(wrap(p3.1 - p2.1).abs()) <= EXTRAPOLATION_AGREEMENT)
                        .then_some(p3)
                }
                _ => None,
            };
            if let Some((a, b)) = smooth {
                // The true pair is admissible on every circle.
                let outer = &circles[circles.len() - 1];
                let arc = outer.beta_arc(a);
                let step = (track[track.len() - 1].1 - track[track.len() - 2].1).abs();
                if arc.width >= 0.0
                    && wrap(b - arc.center).abs() <= arc.width / 2.0
                    && (a - alpha).abs() <= step
                {
                    (alpha, beta) = (a, b);
                }
            }
            (alpha, beta)
        }
    };
    let pair = DirectionPair {
        alpha: alpha.rem_euclid(TAU),
        beta: beta.rem_euclid(TAU),
        min_residual: grid.objective(alpha, beta),
    };
    if pair.min_residual < -ADMISSIBLE_TOL {
        return Err(Error::NoAdmissiblePair {
            min_residual: pair.min_residual,
        });
    }
    Ok(pair)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mappings::{
        halfplane_l, harmonic_l, identity, polar_grid, rotate_analytic, HarmonicMap,
    };

    fn grid() -> Vec<Complex> {
        polar_grid(&[0.1, 0.3, 0.5, 0.7, 0.9, 0.99], 16, 0.05)
    }

    #[test]
    fn l_admits_zero_pair() {
        let l = harmonic_l();
        let pts = grid();
        // The expression reduces to Re((1+z)/(1-z)).
        let r = css2_residual(&l, 0.0, 0.0, &pts);
        let expected = pts
            .iter()
            .map(|&z| ((1.0 + z) / (1.0 - z)).re)
            .fold(f64::INFINITY, f64::min);
        assert!((r - expected).abs() < 1e-12);
        assert!(r > 0.0);
        let pair = css2_search(&l, &pts, 360).unwrap();
        assert!(pair.min_residual > 0.0);
    }

    #[test]
    fn identity_admits_zero_pair() {
        let id = HarmonicMap::analytic(identity()).unwrap();
        let pts = grid();
        let r = css2_residual(&id, 0.0, 0.0, &pts);
        assert!(r >= 1.0 - 0.99f64.powi(2) - 1e-15);
        assert!(css2_search(&id, &pts, 90).unwrap().min_residual > 0.0);
    }

    #[test]
    fn halfplane_pair_is_recovered_exactly() {
        // For the rotated half-plane map the only admissible pair on the whole
        // disk satisfies e^{-2iβ} = λ², α + β = 0 (mod π).
        let lam = Complex::from_polar(1.0, 0.7);
        let f = HarmonicMap::analytic(rotate_analytic(&halfplane_l(), lam).unwrap()).unwrap();
        let pair = css2_search(&f, &grid(), 360).unwrap();
        let b = (Complex::from_polar(1.0, -2.0 * pair.beta) - lam * lam).norm();
        let s = (pair.alpha + pair.beta).rem_euclid(PI);
        assert!(b < 1e-8, "{pair:?}");
        assert!(s.min(PI - s) < 1e-8, "{pair:?}");
        assert!(pair.min_residual >= 0.0);
    }

    #[test]
    fn beta_arc_matches_brute_force() {
        let l = harmonic_l();
        let t = Tables::new(&l, &grid());
        let arc = t.beta_arc(0.0);
        let inside = t.objective(0.0, arc.center);
        let outside = t.objective(0.0, arc.center + arc.width / 2.0 + 1e-3);
        assert!(arc.width > 0.0 && inside > 0.0 && outside < 0.0);
    }
}
