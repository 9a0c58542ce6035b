//! Closed-form growth and distortion envelopes as functions of `r = |z|`.

use crate::error::{Error, Result};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Envelope {
    pub lower: f64,
    pub upper: f64,
}

impl Envelope {
    /// Shrinks the interval by `scale`: upper times `scale`, lower divided by
    /// it. `scale = 1` is the identity.
    pub fn scaled(self, scale: f64) -> Self {
        Self {
            lower: self.lower / scale,
            upper: self.upper * scale,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Envelopes {
    pub r: f64,
    /// Convex analytic maps: `|φ(z)|`.
    pub k_growth: Envelope,
    /// Convex analytic maps: `|φ'(z)|`.
    pub k_distortion: Envelope,
    /// Univalent analytic maps: `|φ(z)|`.
    pub s_growth: Envelope,
    /// Univalent analytic maps: `|φ'(z)|`.
    pub s_distortion: Envelope,
    /// Carathéodory class: `|p(z)|`.
    pub p_growth: Envelope,
    /// `|f(z)|` for `f ∈ K_H^0`.
    pub f_growth: Envelope,
    /// `|h(z)|` for the analytic part of `f ∈ K_H^0`.
    pub h_growth: Envelope,
    /// `|h'(z)|` for the analytic part of `f ∈ K_H^0`.
    pub h_distortion: Envelope,
}

fn check(r: f64) -> Result<()> {
    if !(0.0..1.0).contains(&r) {
        return Err(Error::RadiusOutOfRange(r));
    }
    Ok(())
}

pub fn h_growth(r: f64) -> Result<Envelope> {
    check(r)?;
    Ok(Envelope {
        lower: (2.0 * r + r * r) / (2.0 * (1.0 + r).powi(2)),
        upper: (2.0 * r - r * r) / (2.0 * (1.0 - r).powi(2)),
    })
}

pub fn h_distortion(r: f64) -> Result<Envelope> {
    check(r)?;
    Ok(Envelope {
        lower: (1.0 + r).powi(-3),
        upper: (1.0 - r).powi(-3),
    })
}

pub fn s_growth(r: f64) -> Result<Envelope> {
    check(r)?;
    Ok(Envelope {
        lower: r / (1.0 + r).powi(2),
        upper: r / (1.0 - r).powi(2),
    })
}

pub fn s_distortion(r: f64) -> Result<Envelope> {
    check(r)?;
    Ok(Envelope {
        lower: (1.0 - r) / (1.0 + r).powi(3),
        upper: (1.0 + r) / (1.0 - r).powi(3),
    })
}

pub fn envelopes(r: f64) -> Result<Envelopes> {
    check(r)?;
    Ok(Envelopes {
        r,
        k_growth: Envelope {
            lower: r / (1.0 + r),
            upper: r / (1.0 - r),
        },
        k_distortion: Envelope {
            lower: (1.0 + r).powi(-2),
            upper: (1.0 - r).powi(-2),
        },
        s_growth: s_growth(r)?,
        s_distortion: s_distortion(r)?,
        p_growth: Envelope {
            lower: (1.0 - r) / (1.0 + r),
            upper: (1.0 + r) / (1.0 - r),
        },
        f_growth: s_growth(r)?,
        h_growth: h_growth(r)?,
        h_distortion: h_distortion(r)?,
    })
}
