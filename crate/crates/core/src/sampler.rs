//! Seeded catalog of shear recipes for property sweeps.
//!
//! Seeds are the half-plane map, the strip map, the identity and Koebe, each
//! rotated by a random `λ`, sheared with a dilatation drawn from
//! `{0, λ z^m (m = 1..3), z (c + z)/(1 + conj(c) z)}`. The half-plane and strip
//! seeds are sheared along their direction of unboundedness, Koebe along its
//! direction of convexity and the identity along a random direction. Every
//! built map is certified before use; Koebe seeds are expected to fail except
//! for the rotations of `L`, which are appended explicitly.

use crate::error::Result;
use crate::mappings::{certify, shear, AnalyticMap, Catalog, CertifiedMap, HarmonicMap};
use crate::rng::SplitMix64;
use num_complex::Complex64 as Complex;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::{FRAC_PI_2, PI, TAU};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Seed {
    Halfplane,
    Strip,
    Identity,
    Koebe,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DilatationRecipe {
    Zero,
    Monomial { arg: f64, power: u32 },
    Blaschke { c: Complex },
}

impl DilatationRecipe {
    pub fn build(&self, order: usize) -> Result<AnalyticMap> {
        let cat = Catalog::new(order);
        match *self {
            Self::Zero => Ok(cat.zero()),
            Self::Monomial { arg, power } => {
                cat.dilatation_monomial(Complex::from_polar(1.0, arg), power)
            }
            Self::Blaschke { c } => cat.dilatation_blaschke(c),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShearRecipe {
    pub seed: Seed,
    /// `arg λ` of the rotation `conj(λ) φ(λ z)` applied to the seed.
    pub rotation: f64,
    pub dilatation: DilatationRecipe,
    pub theta: f64,
}

impl ShearRecipe {
    pub fn label(&self) -> String {
        let omega = match self.dilatation {
            DilatationRecipe::Zero => "0".to_string(),
            DilatationRecipe::Monomial { arg, power } => format!("e^(i{arg:.4})z^{power}"),
            DilatationRecipe::Blaschke { c } => format!("blaschke({:.4}{:+.4}i)", c.re, c.im),
        };
        format!(
            "shear({:?}@{:.4}, {omega}, {:.4})",
            self.seed, self.rotation, self.theta
        )
        .to_lowercase()
    }

    pub fn build(&self, order: usize) -> Result<HarmonicMap> {
        let cat = Catalog::new(order);
        let phi = match self.seed {
            Seed::Halfplane => cat.halfplane_l(),
            Seed::Strip => cat.strip_map(),
            Seed::Identity => cat.identity(),
            Seed::Koebe => cat.koebe(),
        };
        let phi = phi.rotated(Complex::from_polar(1.0, self.rotation))?;
        let omega = self.dilatation.build(order)?;
        Ok(shear(&phi, &omega, self.theta)?.with_label(self.label()))
    }

    /// `rotate_harmonic(L, ν)` as a shear of the rotated Koebe function.
    pub fn rotated_l(nu_arg: f64) -> Self {
        Self {
            seed: Seed::Koebe,
            rotation: nu_arg,
            dilatation: DilatationRecipe::Monomial {
                arg: (PI + 3.0 * nu_arg).rem_euclid(TAU),
                power: 1,
            },
            theta: (-nu_arg).rem_euclid(PI),
        }
    }
}

const SEED_CYCLE: [Seed; 6] = [
    Seed::Halfplane,
    Seed::Strip,
    Seed::Identity,
    Seed::Koebe,
    Seed::Halfplane,
    Seed::Strip,
];

/// Angles of the explicit rotations of `L`, chosen on a ten-fold angular
/// grid so that equality cases are visible on grids with 10 angles.
pub const L_ROTATIONS: [f64; 4] = [0.0, TAU / 10.0, 3.0 * TAU / 10.0, 7.0 * TAU / 10.0];

pub fn draw_recipes(seed: u64, count: usize) -> Vec<ShearRecipe> {
    let mut rng = SplitMix64::new(seed);
    let mut out: Vec<ShearRecipe> = (0..count)
        .map(|i| {
            let seed = SEED_CYCLE[i % SEED_CYCLE.len()];
            let rotation = if seed == Seed::Identity {
                0.0
            } else {
                rng.angle()
            };
            let dilatation = match rng.next_u64() % 5 {
                0 => DilatationRecipe::Zero,
                k @ 1..=3 => DilatationRecipe::Monomial {
                    arg: rng.angle(),
                    power: k as u32,
                },
                _ => DilatationRecipe::Blaschke {
                    c: rng.disk_point(0.9),
                },
            };
            let theta = match seed {
                Seed::Halfplane => FRAC_PI_2 - rotation,
                Seed::Strip | Seed::Koebe => -rotation,
                Seed::Identity => rng.uniform(0.0, PI),
            }
            .rem_euclid(PI);
            ShearRecipe {
                seed,
                rotation,
                dilatation,
                theta,
            }
        })
        .collect();
    out.extend(L_ROTATIONS.iter().map(|&a| ShearRecipe::rotated_l(a)));
    out
}

#[derive(Debug, Clone)]
pub struct Sample {
    pub recipe: ShearRecipe,
    pub outcome: std::result::Result<CertifiedMap, crate::Error>,
}

impl Sample {
    pub fn certified(&self) -> Option<&CertifiedMap> {
        self.outcome.as_ref().ok()
    }
}

/// Builds and certifies every recipe in parallel; the output order follows
/// the recipe order.
pub fn build_samples(recipes: &[ShearRecipe], order: usize) -> Vec<Sample> {
    recipes
        .par_iter()
        .map(|&recipe| Sample {
            recipe,
            outcome: recipe.build(order).and_then(certify),
        })
        .collect()
}
