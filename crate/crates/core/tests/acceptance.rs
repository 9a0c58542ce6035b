//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

use harmonic_core::analysis::convexity::{convex_curve_check, DEFAULT_SAMPLES};
use harmonic_core::analysis::envelopes::{h_distortion, h_growth, s_distortion, s_growth};
use harmonic_core::analysis::{covering_radius, growth_order_l, rigidity_probe, RigidityVerdict};
use harmonic_core::mappings::{
    certify, dilatation, dilatation_monomial, harmonic_l, koebe, polar_grid, rotate_harmonic,
    shear, strip_map, Catalog, HarmonicMap,
};
use harmonic_core::rng::SplitMix64;
use harmonic_core::series::{extract_coeffs, TruncatedSeries};
use harmonic_core::transforms::{koebe_transform, transformed_dilatation};
use harmonic_core::verify::{run_verification, RunConfig, VerificationReport};
use harmonic_core::Complex;
use std::f64::consts::TAU;
use std::process::ExitCode;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn sample_points(seed: u64, count: usize, radius: f64) -> Vec<Complex> {
    let mut rng = SplitMix64::new(seed);
    (0..count).map(|_| rng.disk_point(radius)).collect()
}

fn criterion_1() -> Outcome {
    let h = Catalog::default().big_h();
    let mut worst: f64 = 0.0;
    for r in [0.1, 0.3, 0.5, 0.7, 0.9] {
        let (p, m) = (c(r, 0.0), c(-r, 0.0));
        worst = worst
            .max(rel(
                h.eval(p).norm(),
                (2.0 * r - r * r) / (2.0 * (1.0 - r).powi(2)),
            ))
            .max(rel(
                h.eval(m).norm(),
                (2.0 * r + r * r) / (2.0 * (1.0 + r).powi(2)),
            ))
            .max(rel(h.derivative(p).norm(), (1.0 - r).powi(-3)))
            .max(rel(h.derivative(m).norm(), (1.0 + r).powi(-3)));
    }
    outcome(worst <= 1e-12, format!("max relative error {worst:.2e}"))
}

fn worst_check(report: &VerificationReport, name: &str) -> (bool, f64, usize) {
    let checks: Vec<_> = report.checks.iter().filter(|c| c.name == name).collect();
    let pass = checks.iter().all(|c| c.pass);
    let worst = checks.iter().map(|c| c.value).fold(f64::INFINITY, f64::min);
    (pass, worst, checks.len())
}

fn criterion_2(report: &VerificationReport, config: &RunConfig) -> Outcome {
    let points = config.points().len();
    let (gp, gw, gn) = worst_check(report, "h-growth");
    let (dp, dw, dn) = worst_check(report, "h-distortion");
    let scaled = run_verification(&RunConfig {
        envelope_scale: 0.9,
        samples: 6,
        ..config.clone()
    })
    .expect("scaled sweep runs");
    let scaled_fails = scaled
        .checks
        .iter()
        .any(|c| !c.pass && (c.name == "h-growth" || c.name == "h-distortion"));
    let pass = report.certified >= 30
        && points >= 100
        && gn == report.certified
        && dn == report.certified
        && gp
        && dp
        && gw >= -1e-8
        && dw >= -1e-8
        && scaled_fails;
    outcome(
        pass,
        format!(
            "{} certified x {points} points, min margins growth {gw:.2e} distortion {dw:.2e}, \
             scale 0.9 fails: {scaled_fails}",
            report.certified
        ),
    )
}

fn criterion_3() -> Outcome {
    let cat = Catalog::default();
    let h = covering_radius(&cat.big_h(), &[0.999]).estimate;
    let l = covering_radius(&cat.halfplane_l(), &[0.999]).estimate;
    outcome(
        (h - 0.375).abs() <= 0.01 && (l - 0.5).abs() <= 0.01,
        format!("min |H| = {h:.6}, min |l| = {l:.6}"),
    )
}

fn criterion_4() -> Outcome {
    let l = harmonic_l();
    let w = dilatation(&l).expect("dilatation of L");
    let lead = (w.coeff(1) - c(-1.0, 0.0)).norm();
    let others = (0..=30)
        .filter(|&n| n != 1)
        .map(|n| w.coeff(n).norm())
        .fold(0.0, f64::max);
    outcome(
        lead <= 1e-10 && others <= 1e-10 && w.series().order() >= 30,
        format!("|w_1 + 1| = {lead:.2e}, max other |w_n| = {others:.2e}"),
    )
}

fn criterion_5(report: &VerificationReport) -> Outcome {
    let (pass, worst, count) = worst_check(report, "coefficients");
    let l = harmonic_l();
    let equality = (1..=12)
        .map(|n| {
            let a = (l.h().coeff(n).norm() - (n as f64 + 1.0) / 2.0).abs();
            let b = (l.g().coeff(n).norm() - (n as f64 - 1.0) / 2.0).abs();
            a.max(b)
        })
        .fold(0.0, f64::max);
    outcome(
        pass && count == report.certified && worst >= -1e-9 && equality <= 1e-10,
        format!("{count} samples, min margin {worst:.2e}, L equality error {equality:.2e}"),
    )
}

fn criterion_6() -> Outcome {
    let l = harmonic_l();
    let minus_z = dilatation_monomial(c(-1.0, 0.0), 1).expect("-z");
    let sheared = shear(&koebe(), &minus_z, 0.0).expect("shear of Koebe");
    let pointwise = sample_points(6, 50, 0.99)
        .into_iter()
        .map(|z| (sheared.eval(z) - l.eval(z)).norm() / l.eval(z).norm().max(1.0))
        .fold(0.0, f64::max);

    let plus_z = dilatation_monomial(c(1.0, 0.0), 1).expect("z");
    let wrong = shear(&koebe(), &plus_z, 0.0).expect("shear of Koebe with +z");
    let wrong_convex = convex_curve_check(&wrong, 0.9, DEFAULT_SAMPLES)
        .expect("curve check")
        .convex;

    let points = polar_grid(&[0.1, 0.3, 0.5, 0.7, 0.9, 0.99], 10, 0.0);
    let mut rigid = 0;
    let mut worst_match: f64 = 0.0;
    for k in 0..8 {
        let lambda = Complex::from_polar(1.0, TAU * k as f64 / 8.0 + 0.1);
        let f = certify(rotate_harmonic(&l, lambda).expect("rotation")).expect("certified");
        let report = rigidity_probe(&f, 360, &points);
        let deviation = report.max_deviation.unwrap_or(f64::INFINITY);
        let lambda_error = (report.lambda - lambda).norm();
        worst_match = worst_match.max(deviation).max(lambda_error);
        if report.verdict == RigidityVerdict::Pass && deviation <= 1e-6 && lambda_error <= 1e-6 {
            rigid += 1;
        }
    }
    outcome(
        pointwise <= 1e-10 && !wrong_convex && rigid == 8,
        format!(
            "shear(k,-z) vs L {pointwise:.2e}, shear(k,+z) convex at 0.9: {wrong_convex}, \
             rigidity {rigid}/8 (worst match {worst_match:.2e})"
        ),
    )
}

fn criterion_7() -> Outcome {
    let z2 = dilatation_monomial(c(1.0, 0.0), 2).expect("z^2");
    let maps: [HarmonicMap; 2] = [
        harmonic_l(),
        shear(&strip_map(), &z2, 0.0).expect("strip shear"),
    ];
    let grid = polar_grid(&[0.1, 0.3, 0.5, 0.7, 0.9], 10, 0.0);
    let (mut residual, mut product, mut mismatch): (f64, f64, f64) = (0.0, 0.0, 0.0);
    let mut certified = true;
    for f in maps {
        let f = certify(f).expect("seed map certified");
        for a in [c(0.3, 0.0), c(0.0, 0.5), c(-0.6, 0.0)] {
            let t = koebe_transform(&f, a).expect("transform");
            residual = residual.max(t.residuals.max());
            let w = f.dilatation_at(a);
            let p = t.map.h().derivative(a).norm()
                * f.h().derivative(a).norm()
                * (1.0 - a.norm_sqr()).powi(2)
                * (1.0 - w.norm_sqr());
            product = product.max((p - 1.0).abs());
            let predicted = transformed_dilatation(&f, a).expect("transformed dilatation");
            let direct = dilatation(&t.map).expect("dilatation of F_a");
            mismatch = grid
                .iter()
                .map(|&z| (predicted.eval(z) - direct.eval(z)).norm())
                .fold(mismatch, f64::max);
            certified &= certify(t.map).is_ok();
        }
    }
    outcome(
        residual <= 1e-8 && product <= 1e-8 && mismatch <= 1e-8 && certified,
        format!(
            "residual {residual:.2e}, |product - 1| {product:.2e}, dilatation mismatch \
             {mismatch:.2e}, all certified: {certified}"
        ),
    )
}

fn criterion_8(report: &VerificationReport) -> Outcome {
    let (pair_ok, min_residual, pairs) = worst_check(report, "css2-pair");
    let (sum_ok, sum_margin, sums) = worst_check(report, "sum-bound");
    let herglotz: Vec<_> = report
        .checks
        .iter()
        .filter(|c| c.name == "herglotz")
        .collect();
    let herglotz_ok = herglotz.iter().all(|c| c.pass);
    let ratio = herglotz.iter().map(|c| c.value).fold(0.0, f64::max);
    let n = report.certified;
    outcome(
        pair_ok
            && sum_ok
            && herglotz_ok
            && min_residual >= -1e-6
            && pairs == n
            && sums == n
            && herglotz.len() == n,
        format!(
            "{pairs} pairs, min residual {min_residual:.2e}, min sum-bound margin \
             {sum_margin:.2e}, max |delta|/|z| {ratio:.9}"
        ),
    )
}

fn criterion_9(report: &VerificationReport) -> Outcome {
    let mut min_gap = f64::INFINITY;
    for i in 0..100 {
        let r = (i as f64 + 0.5) / 100.0;
        let (hg, sg) = (h_growth(r).unwrap(), s_growth(r).unwrap());
        let (hd, sd) = (h_distortion(r).unwrap(), s_distortion(r).unwrap());
        for gap in [
            sg.upper - hg.upper,
            hg.lower - sg.lower,
            sd.upper - hd.upper,
            hd.lower - sd.lower,
        ] {
            min_gap = min_gap.min(gap);
        }
    }
    let (excluded, distance, count) = worst_check(report, "koebe-exclusion");
    outcome(
        min_gap > 0.0 && excluded && distance > 0.1 && count == report.certified,
        format!("min envelope gap {min_gap:.2e}, min Koebe distance {distance:.4}"),
    )
}

fn brute_mul(a: &[Complex], b: &[Complex], order: usize) -> Vec<Complex> {
    (0..=order)
        .map(|n| (0..=n).map(|i| a[i] * b[n - i]).sum())
        .collect()
}

/// Long division `q b = a`, solved term by term.
fn brute_div(a: &[Complex], b: &[Complex], order: usize) -> Vec<Complex> {
    let mut q: Vec<Complex> = Vec::with_capacity(order + 1);
    for n in 0..=order {
        let known: Complex = (0..n).map(|i| q[i] * b[n - i]).sum();
        q.push((a[n] - known) / b[0]);
    }
    q
}

fn criterion_10() -> Outcome {
    let k = koebe();
    let extracted = extract_coeffs(|z| k.eval(z), 32, 0.5).expect("extraction");
    let koebe_error = (1..=32)
        .map(|n| (extracted.coeff(n) - n as f64).norm())
        .fold(0.0, f64::max);

    let order = 16;
    let mut rng = SplitMix64::new(10);
    let mut arithmetic: f64 = 0.0;
    for _ in 0..100 {
        let mut draw = || -> Vec<Complex> {
            (0..=order)
                .map(|_| c(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)))
                .collect()
        };
        let (a, mut b) = (draw(), draw());
        b[0] += c(3.0, 0.0);
        let sa = TruncatedSeries::new(a.clone()).unwrap();
        let sb = TruncatedSeries::new(b.clone()).unwrap();
        let sum = sa.add(&sb);
        let product = sa.mul(&sb);
        let quotient = sa.div(&sb).unwrap();
        for n in 0..=order {
            let want = brute_mul(&a, &b, order);
            let q = brute_div(&a, &b, order);
            arithmetic = arithmetic
                .max((sum.coeff(n) - (a[n] + b[n])).norm())
                .max((product.coeff(n) - want[n]).norm())
                .max((quotient.coeff(n) - q[n]).norm());
        }
    }
    outcome(
        koebe_error <= 1e-9 && arithmetic <= 1e-9,
        format!("Koebe extraction error {koebe_error:.2e}, arithmetic vs oracle {arithmetic:.2e}"),
    )
}

fn criterion_11() -> Outcome {
    let rows = growth_order_l(&[0.9, 0.99, 0.999]);
    let values: Vec<f64> = rows.iter().map(|r| r.scaled_max).collect();
    let monotone = values.windows(2).all(|w| w[1] >= w[0] - 1e-3);
    outcome(
        values[1] >= 0.4 && monotone,
        format!("(1-r)^2 max|L| = {values:.6?}"),
    )
}

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn main() -> ExitCode {
    let config = RunConfig::default();
    let report = run_verification(&config).expect("default sweep runs");
    let criteria: [Criterion; 11] = [
        ("sharpness at L", Box::new(criterion_1)),
        ("bound sweep", Box::new(|| criterion_2(&report, &config))),
        ("covering radii", Box::new(criterion_3)),
        ("dilatation of L", Box::new(criterion_4)),
        ("coefficient bounds", Box::new(|| criterion_5(&report))),
        ("shear and rigidity", Box::new(criterion_6)),
        ("transform contract", Box::new(criterion_7)),
        (
            "direction pair and Schwarz function",
            Box::new(|| criterion_8(&report)),
        ),
        ("envelope strictness", Box::new(|| criterion_9(&report))),
        (
            "coefficient extraction and series oracle",
            Box::new(criterion_10),
        ),
        ("growth order of L", Box::new(criterion_11)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        failed += usize::from(!o.pass);
        println!(
            "{} criterion {:>2} {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            i + 1,
            o.detail
        );
    }
    println!("{} of 11 criteria passed", 11 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
