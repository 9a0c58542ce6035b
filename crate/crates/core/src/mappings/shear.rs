//! Shear construction: given `φ = h - e^{2iθ} g` and a dilatation `ω`,
//! solve for `h` and `g`.

use super::{validation_grid, AnalyticMap, HarmonicMap};
use crate::error::{fmt_z, Error, Result};
use num_complex::Complex64 as Complex;

const DENOMINATOR_TOL: f64 = 1e-12;

/// `h' = φ' / (1 - e^{2iθ} ω)`, `g' = ω h'`, both vanishing at the origin.
pub fn shear(phi: &AnalyticMap, omega: &AnalyticMap, theta: f64) -> Result<HarmonicMap> {
    let rot = Complex::from_polar(1.0, 2.0 * theta);
    let zero = Complex::new(0.0, 0.0);
    for z in std::iter::once(zero).chain(validation_grid()) {
        if (Complex::new(1.0, 0.0) - rot * omega.eval(z)).norm() < DENOMINATOR_TOL {
            return Err(Error::DenominatorVanishes { z: fmt_z(z) });
        }
    }

    let one =
        crate::series::TruncatedSeries::constant(Complex::new(1.0, 0.0), omega.series().order());
    let denominator = one.sub(&omega.series().scale(rot));
    let hp_series = phi.series().differentiate().div(&denominator)?;
    let gp_series = hp_series.mul(omega.series());

    let (dphi, w) = (phi.deriv_fn(), omega.value_fn());
    let hp = move |z: Complex| dphi(z) / (1.0 - rot * w(z));
    let hp2 = hp.clone();
    let w2 = omega.value_fn();
    let gp = move |z: Complex| w2(z) * hp2(z);

    let label = format!("shear({}, {}, {:.4})", phi.label(), omega.label(), theta);
    let h =
        AnalyticMap::from_derivative(format!("h[{label}]"), hp, hp_series.integrate_from_zero())?;
    let g =
        AnalyticMap::from_derivative(format!("g[{label}]"), gp, gp_series.integrate_from_zero())?;
    HarmonicMap::new(label, h, g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mappings::{
        dilatation, dilatation_blaschke, dilatation_monomial, halfplane_l, harmonic_l, koebe,
        strip_map, zero_map,
    };
    use crate::rng::SplitMix64;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn rel(a: Complex, b: Complex) -> f64 {
        (a - b).norm() / b.norm().max(1.0)
    }

    #[test]
    fn koebe_shear_with_minus_z_is_l() {
        let f = shear(
            &koebe(),
            &dilatation_monomial(c(-1.0, 0.0), 1).unwrap(),
            0.0,
        )
        .unwrap();
        let l = harmonic_l();
        let mut rng = SplitMix64::new(21);
        for _ in 0..50 {
            let z = rng.disk_point(0.99);
            assert!(rel(f.eval(z), l.eval(z)) < 1e-10, "{z}");
            assert!(rel(f.h().derivative(z), l.h().derivative(z)) < 1e-13);
        }
        assert!(f.h().series().max_distance(l.h().series()) < 1e-12);
        assert!(f.g().series().max_distance(l.g().series()) < 1e-12);
    }

    #[test]
    fn shear_with_zero_dilatation_is_phi() {
        let ell = halfplane_l();
        for theta in [0.0, 1.0, 2.5] {
            let f = shear(&ell, &zero_map(64), theta).unwrap();
            for z in [c(0.3, 0.4), c(-0.9, 0.0), c(0.0, 0.99)] {
                assert!(rel(f.eval(z), ell.eval(z)) < 1e-12);
            }
        }
    }

    #[test]
    fn shear_recombines_and_has_prescribed_dilatation() {
        let mut rng = SplitMix64::new(33);
        let phis = [halfplane_l(), strip_map(), koebe()];
        for phi in &phis {
            let omega = dilatation_blaschke(rng.disk_point(0.7)).unwrap();
            let theta = rng.uniform(0.0, std::f64::consts::PI);
            let f = shear(phi, &omega, theta).unwrap();
            let w = dilatation(&f).unwrap();
            let rot = Complex::from_polar(1.0, 2.0 * theta);
            for _ in 0..50 {
                let z = rng.disk_point(0.99);
                let recombined = f.h().eval(z) - rot * f.g().eval(z);
                assert!(rel(recombined, phi.eval(z)) < 1e-9);
                assert!((w.eval(z) - omega.eval(z)).norm() < 1e-9);
                assert!(f.jacobian(z) > 0.0);
            }
        }
    }

    #[test]
    fn shear_rejects_unimodular_constant_dilatation() {
        let omega = dilatation_monomial(c(1.0, 0.0), 0).unwrap();
        assert!(matches!(
            shear(&halfplane_l(), &omega, 0.0),
            Err(Error::DenominatorVanishes { .. })
        ));
    }
}
