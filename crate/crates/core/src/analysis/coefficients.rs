//! Coefficient bounds for `K_H^0` and the Bieberbach bound for `S`.

use crate::mappings::{AnalyticMap, HarmonicMap};
use serde::Serialize;

pub const COEFF_TOL: f64 = 1e-9;
pub const COEFF_EQUALITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoefficientRow {
    pub n: usize,
    pub a_abs: f64,
    pub a_bound: f64,
    pub b_abs: f64,
    pub b_bound: f64,
    pub a_margin: f64,
    pub b_margin: f64,
    pub a_equal: bool,
    pub b_equal: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoefficientReport {
    pub label: String,
    pub tol: f64,
    pub rows: Vec<CoefficientRow>,
    pub pass: bool,
    /// Equality in both bounds for every `n`.
    pub equality_everywhere: bool,
}

/// `|a_n| ≤ (n+1)/2` and `|b_n| ≤ (n-1)/2` for `1 ≤ n ≤ n_max`.
pub fn coefficient_check(f: &HarmonicMap, n_max: usize) -> CoefficientReport {
    let rows: Vec<CoefficientRow> = (1..=n_max)
        .map(|n| {
            let a_abs = f.h().coeff(n).norm();
            let b_abs = f.g().coeff(n).norm();
            let a_bound = (n as f64 + 1.0) / 2.0;
            let b_bound = (n as f64 - 1.0) / 2.0;
            CoefficientRow {
                n,
                a_abs,
                a_bound,
                b_abs,
                b_bound,
                a_margin: a_bound - a_abs,
                b_margin: b_bound - b_abs,
                a_equal: (a_bound - a_abs).abs() <= COEFF_EQUALITY_TOL,
                b_equal: (b_bound - b_abs).abs() <= COEFF_EQUALITY_TOL,
            }
        })
        .collect();
    CoefficientReport {
        label: f.label().to_string(),
        tol: COEFF_TOL,
        pass: rows
            .iter()
            .all(|r| r.a_margin >= -COEFF_TOL && r.b_margin >= -COEFF_TOL),
        equality_everywhere: rows.iter().all(|r| r.a_equal && r.b_equal),
        rows,
    }
}

/// `max_{1 ≤ n ≤ n_max} |a_n - n|`, the distance of the analytic part from
/// Koebe's coefficient vector.
pub fn koebe_distance(f: &HarmonicMap, n_max: usize) -> f64 {
    (1..=n_max)
        .map(|n| (f.h().coeff(n) - n as f64).norm())
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BieberbachReport {
    /// `|φ''(0)| = 2 |c_2|`.
    pub second_derivative: f64,
    pub pass: bool,
    pub equality: bool,
}

/// `|φ''(0)| ≤ 4`, with equality only for rotations of Koebe.
pub fn bieberbach_check(phi: &AnalyticMap) -> BieberbachReport {
    let second_derivative = 2.0 * phi.coeff(2).norm();
    BieberbachReport {
        second_derivative,
        pass: second_derivative <= 4.0 + COEFF_TOL,
        equality: (second_derivative - 4.0).abs() <= COEFF_TOL,
    }
}
