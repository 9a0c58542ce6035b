//! The four extremal values of `H` against the growth and distortion
//! envelopes.

use super::envelopes::{h_distortion, h_growth};
use crate::error::{Error, Result};
use crate::mappings::Catalog;
use num_complex::Complex64 as Complex;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Quantity {
    /// `|H(r)|` against the upper growth envelope.
    GrowthUpper,
    /// `|H(-r)|` against the lower growth envelope.
    GrowthLower,
    /// `|H'(r)|` against the upper distortion envelope.
    DistortionUpper,
    /// `|H'(-r)|` against the lower distortion envelope.
    DistortionLower,
}

impl Quantity {
    pub fn name(self) -> &'static str {
        match self {
            Self::GrowthUpper => "growth-upper",
            Self::GrowthLower => "growth-lower",
            Self::DistortionUpper => "distortion-upper",
            Self::DistortionLower => "distortion-lower",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SharpnessRow {
    pub r: f64,
    pub quantity: Quantity,
    pub value_at_extremal: f64,
    pub envelope_value: f64,
    /// `(upper - value)/upper` or `(value - lower)/lower`.
    pub relative_gap: f64,
}

pub fn sharpness_table(radii: &[f64]) -> Result<Vec<SharpnessRow>> {
    let h = Catalog::default().big_h();
    let mut rows = Vec::with_capacity(4 * radii.len());
    for &r in radii {
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::RadiusOutOfRange(r));
        }
        let (g, d) = (h_growth(r)?, h_distortion(r)?);
        let (p, m) = (Complex::new(r, 0.0), Complex::new(-r, 0.0));
        let entries = [
            (Quantity::GrowthUpper, h.eval(p).norm(), g.upper),
            (Quantity::GrowthLower, h.eval(m).norm(), g.lower),
            (Quantity::DistortionUpper, h.derivative(p).norm(), d.upper),
            (Quantity::DistortionLower, h.derivative(m).norm(), d.lower),
        ];
        for (quantity, value, envelope) in entries {
            let gap = match quantity {
                Quantity::GrowthUpper | Quantity::DistortionUpper => (envelope - value) / envelope,
                Quantity::GrowthLower | Quantity::DistortionLower => (value - envelope) / envelope,
            };
            rows.push(SharpnessRow {
                r,
                quantity,
                value_at_extremal: value,
                envelope_value: envelope,
                relative_gap: gap,
            });
        }
    }
    Ok(rows)
}
