//! Canonical maps: Koebe, the half-plane map, the half-plane harmonic
//! mapping, the strip map, the identity, and the dilatations used by the
//! sampler.

use super::{AnalyticMap, HarmonicMap};
use crate::error::{Error, Result};
use crate::series::{TruncatedSeries, DEFAULT_ORDER};
use num_complex::Complex64 as Complex;
use serde::Serialize;

fn one() -> Complex {
    Complex::new(1.0, 0.0)
}

fn real(x: f64) -> Complex {
    Complex::new(x, 0.0)
}

/// Catalog with a chosen series truncation order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Catalog {
    pub order: usize,
}

impl Default for Catalog {
    fn default() -> Self {
        Self {
            order: DEFAULT_ORDER,
        }
    }
}

impl Catalog {
    pub fn new(order: usize) -> Self {
        Self { order }
    }

    /// `k(z) = z / (1 - z)^2`, coefficients `n`.
    pub fn koebe(&self) -> AnalyticMap {
        AnalyticMap::closed(
            "koebe",
            |z| z / (one() - z).powi(2),
            |z| (one() + z) / (one() - z).powi(3),
            TruncatedSeries::from_fn(self.order, |n| real(n as f64)),
        )
        .expect("Koebe series matches its closed form")
    }

    /// `l(z) = z / (1 - z)`, onto `Re w > -1/2`.
    pub fn halfplane_l(&self) -> AnalyticMap {
        AnalyticMap::closed(
            "halfplane-l",
            |z| z / (one() - z),
            |z| (one() - z).powi(-2),
            TruncatedSeries::from_fn(self.order, |n| real(if n == 0 { 0.0 } else { 1.0 })),
        )
        .expect("half-plane series matches its closed form")
    }

    /// `H = (l + k) / 2 = (2z - z^2) / (2 (1-z)^2)`.
    pub fn big_h(&self) -> AnalyticMap {
        AnalyticMap::closed(
            "H",
            |z| (z * 2.0 - z * z) / ((one() - z).powi(2) * 2.0),
            |z| (one() - z).powi(-3),
            TruncatedSeries::from_fn(self.order, |n| {
                real(if n == 0 { 0.0 } else { (n as f64 + 1.0) / 2.0 })
            }),
        )
        .expect("H series matches its closed form")
    }

    /// `G = (l - k) / 2 = -z^2 / (2 (1-z)^2)`.
    pub fn big_g(&self) -> AnalyticMap {
        AnalyticMap::closed(
            "G",
            |z| -(z * z) / ((one() - z).powi(2) * 2.0),
            |z| -z / (one() - z).powi(3),
            TruncatedSeries::from_fn(self.order, |n| real((1.0 - n as f64).min(0.0) / 2.0)),
        )
        .expect("G series matches its closed form")
    }

    /// The half-plane harmonic mapping `L = H + conj(G)`.
    pub fn harmonic_l(&self) -> HarmonicMap {
        HarmonicMap::new("harmonic-L", self.big_h(), self.big_g())
            .expect("L is normalized and orientation-preserving")
    }

    /// `s(z) = (1/2) log((1+z)/(1-z))`, onto the strip `|Im w| < pi/4`.
    pub fn strip_map(&self) -> AnalyticMap {
        AnalyticMap::closed(
            "strip",
            |z| z.atanh(),
            |z| (one() - z * z).inv(),
            TruncatedSeries::from_fn(self.order, |n| {
                real(if n % 2 == 1 { 1.0 / n as f64 } else { 0.0 })
            }),
        )
        .expect("strip series matches its closed form")
    }

    pub fn identity(&self) -> AnalyticMap {
        AnalyticMap::closed("identity", |z| z, |_| one(), TruncatedSeries::z(self.order))
            .expect("identity")
    }

    pub fn zero(&self) -> AnalyticMap {
        zero_map(self.order)
    }

    /// `λ z^m`.
    pub fn dilatation_monomial(&self, lambda: Complex, power: u32) -> Result<AnalyticMap> {
        AnalyticMap::closed(
            format!("{:.4}z^{power}", lambda),
            move |z| lambda * z.powu(power),
            move |z| {
                if power == 0 {
                    Complex::new(0.0, 0.0)
                } else {
                    lambda * power as f64 * z.powu(power - 1)
                }
            },
            TruncatedSeries::monomial(lambda, power as usize, self.order),
        )
    }

    /// `z (c + z) / (1 + conj(c) z)` for `|c| < 1`.
    pub fn dilatation_blaschke(&self, c: Complex) -> Result<AnalyticMap> {
        if !(c.norm() < 1.0) {
            return Err(Error::OutsideDisk { modulus: c.norm() });
        }
        let cb = c.conj();
        let numerator = TruncatedSeries::from_fn(self.order, |n| match n {
            1 => c,
            2 => one(),
            _ => Complex::new(0.0, 0.0),
        });
        let inverse = TruncatedSeries::from_fn(self.order, |n| (-cb).powu(n as u32));
        AnalyticMap::closed(
            format!("blaschke({:.4})", c),
            move |z| z * (c + z) / (one() + cb * z),
            move |z| {
                ((c + z * 2.0) * (one() + cb * z) - cb * z * (c + z)) / (one() + cb * z).powi(2)
            },
            numerator.mul(&inverse),
        )
    }
}

pub fn koebe() -> AnalyticMap {
    Catalog::default().koebe()
}

pub fn halfplane_l() -> AnalyticMap {
    Catalog::default().halfplane_l()
}

pub fn harmonic_l() -> HarmonicMap {
    Catalog::default().harmonic_l()
}

pub fn strip_map() -> AnalyticMap {
    Catalog::default().strip_map()
}

pub fn identity() -> AnalyticMap {
    Catalog::default().identity()
}

pub fn zero_map(order: usize) -> AnalyticMap {
    AnalyticMap::closed(
        "0",
        |_| Complex::new(0.0, 0.0),
        |_| Complex::new(0.0, 0.0),
        TruncatedSeries::zero(order),
    )
    .expect("zero map")
}

pub fn dilatation_monomial(lambda: Complex, power: u32) -> Result<AnalyticMap> {
    Catalog::default().dilatation_monomial(lambda, power)
}

pub fn dilatation_blaschke(c: Complex) -> Result<AnalyticMap> {
    Catalog::default().dilatation_blaschke(c)
}

/// One named entry of the catalog listing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CatalogEntry {
    pub id: &'static str,
    pub kind: &'static str,
    pub formula: &'static str,
    pub dilatation: &'static str,
}

pub const ENTRIES: [CatalogEntry; 5] = [
    CatalogEntry {
        id: "koebe",
        kind: "analytic",
        formula: "z/(1-z)^2",
        dilatation: "0",
    },
    CatalogEntry {
        id: "halfplane-l",
        kind: "analytic",
        formula: "z/(1-z)",
        dilatation: "0",
    },
    CatalogEntry {
        id: "strip",
        kind: "analytic",
        formula: "(1/2)log((1+z)/(1-z))",
        dilatation: "0",
    },
    CatalogEntry {
        id: "identity",
        kind: "analytic",
        formula: "z",
        dilatation: "0",
    },
    CatalogEntry {
        id: "harmonic-L",
        kind: "harmonic",
        formula: "H + conj(G), H = (2z-z^2)/(2(1-z)^2), G = -z^2/(2(1-z)^2)",
        dilatation: "-z",
    },
];

/// Dilatation forms accepted by [`Catalog::dilatation_by_spec`].
pub const DILATATION_SPECS: [&str; 4] = ["0", "[-]z[^m]", "e^(iT)z^m", "blaschke(RE,IM)"];

fn parse_err(input: &str, reason: &str) -> Error {
    Error::Parse {
        input: input.into(),
        reason: reason.into(),
    }
}

fn parse_f64(input: &str, s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| parse_err(input, "expected a finite number"))
}

fn parse_power(input: &str, s: &str) -> Result<u32> {
    match s.strip_prefix('^') {
        None if s.is_empty() => Ok(1),
        None => Err(parse_err(input, "expected '^m' after 'z'")),
        Some(m) => m
            .parse::<u32>()
            .ok()
            .filter(|&m| m >= 1)
            .ok_or_else(|| parse_err(input, "power must be a positive integer")),
    }
}

impl Catalog {
    /// Analytic catalog map by id (`koebe`, `halfplane-l`, `strip`, `identity`).
    pub fn analytic_by_id(&self, id: &str) -> Result<AnalyticMap> {
        match id {
            "koebe" => Ok(self.koebe()),
            "halfplane-l" => Ok(self.halfplane_l()),
            "strip" => Ok(self.strip_map()),
            "identity" => Ok(self.identity()),
            _ => Err(Error::UnknownMap(id.into())),
        }
    }

    /// Any catalog map by id; analytic maps are returned as `φ + conj(0)`.
    pub fn harmonic_by_id(&self, id: &str) -> Result<HarmonicMap> {
        match id {
            "harmonic-L" => Ok(self.harmonic_l()),
            _ => HarmonicMap::analytic(self.analytic_by_id(id)?),
        }
    }

    /// Parses `0`, `z`, `-z`, `z^m`, `-z^m`, `e^(iT)z^m` or `blaschke(RE,IM)`.
    pub fn dilatation_by_spec(&self, spec: &str) -> Result<AnalyticMap> {
        let s: String = spec.chars().filter(|c| !c.is_whitespace()).collect();
        if s == "0" {
            return Ok(self.zero());
        }
        if let Some(args) = s
            .strip_prefix("blaschke(")
            .and_then(|r| r.strip_suffix(')'))
        {
            let (re, im) = args
                .split_once(',')
                .ok_or_else(|| parse_err(spec, "expected blaschke(RE,IM)"))?;
            let c = Complex::new(parse_f64(spec, re)?, parse_f64(spec, im)?);
            return self.dilatation_blaschke(c);
        }
        if let Some(rest) = s.strip_prefix("e^(i") {
            let (t, tail) = rest
                .split_once(")z")
                .ok_or_else(|| parse_err(spec, "expected e^(iT)z^m"))?;
            let lambda = Complex::from_polar(1.0, parse_f64(spec, t)?);
            return self.dilatation_monomial(lambda, parse_power(spec, tail)?);
        }
        let (sign, rest) = match s.strip_prefix('-') {
            Some(r) => (-1.0, r),
            None => (1.0, s.as_str()),
        };
        let tail = rest
            .strip_prefix('z')
            .ok_or_else(|| parse_err(spec, "unrecognized dilatation"))?;
        self.dilatation_monomial(real(sign), parse_power(spec, tail)?)
    }
}
