//! `harmonic`: catalog listing, boundary curves, transforms, sharpness tables
//! and verification sweeps.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 a verification
//! check failed.

use clap::{Args, Parser, Subcommand, ValueEnum};
use harmonic_core::analysis::convexity::{convex_curve_check, CurveConvexity, MIN_SAMPLES};
use harmonic_core::analysis::{sharpness_table, SharpnessRow};
use harmonic_core::mappings::{
    certify, dilatation, shear, Catalog, CatalogEntry, HarmonicMap, DILATATION_SPECS, ENTRIES,
};
use harmonic_core::series::{DEFAULT_ORDER, MIN_ORDER};
use harmonic_core::transforms::{koebe_transform, transformed_dilatation, NormalizationResiduals};
use harmonic_core::verify::{run_verification, RunConfig, SCHEMA};
use harmonic_core::{Complex, Error};
use serde::Serialize;
use std::f64::consts::TAU;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

const TRANSFORM_COEFFS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "harmonic",
    version,
    about = "Convex harmonic mappings of the unit disk"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Global {
    /// Seed of the sampler RNG.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Truncation order of the series.
    #[arg(long, global = true, default_value_t = DEFAULT_ORDER)]
    order: usize,
    /// Outermost radius of the verification grid.
    #[arg(long, global = true, default_value_t = 0.99)]
    rmax: f64,
    /// Angles per radius of the verification grid.
    #[arg(long, global = true, default_value_t = 10)]
    grid: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Output file (stdout when absent).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Shrinks the growth and distortion envelopes; below 1 the sweep must fail.
    #[arg(long, global = true, default_value_t = 1.0)]
    envelope_scale: f64,
    /// Map built by shearing catalog map PHI with dilatation OMEGA along
    /// direction THETA; selected with the map id `shear`.
    #[arg(
        long,
        global = true,
        num_args = 3,
        value_names = ["PHI", "OMEGA", "THETA"],
        allow_hyphen_values = true
    )]
    shear: Option<Vec<String>>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List catalog maps and accepted dilatations.
    Catalog {
        /// Same as `--format json`.
        #[arg(long)]
        json: bool,
    },
    /// Run the verification sweep over the seeded sampler catalog.
    Verify {
        /// Number of random shear recipes (rotations of L are always added).
        #[arg(long, default_value_t = RunConfig::default().samples)]
        count: usize,
    },
    /// Sample the image of |z| = R.
    Curve {
        map: String,
        r: f64,
        #[arg(long, default_value_t = 1024)]
        samples: usize,
    },
    /// Extremal values of H against the growth and distortion envelopes.
    Sharpness { radii: Vec<f64> },
    /// Transform F_a of a map: coefficients of H_a, G_a, omega_a and residuals.
    #[command(allow_negative_numbers = true)]
    Transform { map: String, a: String },
}

#[derive(Debug)]
enum Failure {
    Config(String),
    Violation,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self::Config(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Violation) => ExitCode::from(2),
    }
}

fn run(cli: Cli) -> CmdResult {
    let g = &cli.global;
    if g.order < MIN_ORDER {
        return Err(Failure::Config(format!(
            "--order must be at least {MIN_ORDER}"
        )));
    }
    match &cli.command {
        Command::Catalog { json } => catalog(g, if *json { Format::Json } else { g.format }),
        Command::Verify { count } => verify(g, *count),
        Command::Curve { map, r, samples } => curve(g, map, *r, *samples),
        Command::Sharpness { radii } => sharpness(g, radii),
        Command::Transform { map, a } => transform(g, map, a),
    }
}

fn resolve_map(g: &Global, id: &str) -> Result<HarmonicMap, Failure> {
    let cat = Catalog::new(g.order);
    if id != "shear" {
        return Ok(cat.harmonic_by_id(id)?);
    }
    let Some(args) = &g.shear else {
        return Err(Failure::Config(
            "map 'shear' needs --shear PHI OMEGA THETA".into(),
        ));
    };
    let phi = cat.analytic_by_id(&args[0])?;
    let omega = cat.dilatation_by_spec(&args[1])?;
    let theta: f64 = args[2]
        .parse()
        .map_err(|_| Failure::Config(format!("cannot parse THETA '{}'", args[2])))?;
    let label = format!("shear({}, {}, {})", args[0], args[1], args[2]);
    Ok(shear(&phi, &omega, theta)?.with_label(label))
}

struct Sink(Box<dyn Write>);

impl Sink {
    fn open(g: &Global) -> Result<Self, Failure> {
        Ok(Self(match &g.out {
            Some(path) => {
                Box::new(std::fs::File::create(path).map_err(|e| {
                    Failure::Config(format!("cannot create {}: {e}", path.display()))
                })?)
            }
            None => Box::new(std::io::stdout().lock()),
        }))
    }

    fn json<T: Serialize>(g: &Global, value: &T) -> CmdResult {
        let mut sink = Self::open(g)?;
        let text = serde_json::to_string_pretty(value)
            .map_err(|e| Failure::Config(format!("serialization failed: {e}")))?;
        writeln!(sink.0, "{text}").map_err(io_failure)
    }

    fn csv<T: Serialize>(g: &Global, header: &[&str], rows: &[T]) -> CmdResult {
        let sink = Self::open(g)?;
        let mut w = csv::WriterBuilder::new()
            .has_headers(false)
            .from_writer(sink.0);
        w.write_record(header).map_err(csv_failure)?;
        for row in rows {
            w.serialize(row).map_err(csv_failure)?;
        }
        w.flush().map_err(io_failure)
    }
}

fn io_failure(e: std::io::Error) -> Failure {
    Failure::Config(format!("write failed: {e}"))
}

fn csv_failure(e: csv::Error) -> Failure {
    Failure::Config(format!("write failed: {e}"))
}

#[derive(Serialize)]
struct CatalogListing {
    schema: u32,
    maps: &'static [CatalogEntry],
    dilatations: &'static [&'static str],
    shear: &'static str,
}

fn catalog(g: &Global, format: Format) -> CmdResult {
    match format {
        Format::Json => Sink::json(
            g,
            &CatalogListing {
                schema: SCHEMA,
                maps: &ENTRIES,
                dilatations: &DILATATION_SPECS,
                shear: "shear PHI OMEGA THETA: PHI an analytic map id, OMEGA a dilatation",
            },
        ),
        Format::Csv => Sink::csv(g, &["id", "kind", "formula", "dilatation"], &ENTRIES),
    }
}

fn verify(g: &Global, count: usize) -> CmdResult {
    let config = RunConfig {
        seed: g.seed,
        order: g.order,
        rmax: g.rmax,
        grid: g.grid,
        envelope_scale: g.envelope_scale,
        samples: count,
        ..RunConfig::default()
    };
    let report = run_verification(&config)?;
    match g.format {
        Format::Json => Sink::json(g, &report)?,
        Format::Csv => {
            #[derive(Serialize)]
            struct Row<'a> {
                name: &'a str,
                sample: Option<usize>,
                pass: bool,
                value: f64,
                detail: String,
            }
            let rows: Vec<Row> = report
                .checks
                .iter()
                .map(|c| Row {
                    name: &c.name,
                    sample: c.sample,
                    pass: c.pass,
                    value: c.value,
                    detail: match (&c.detail, &c.offending) {
                        (_, Some(o)) => format!("z={}{:+}i", o.z.re, o.z.im),
                        (Some(d), None) => d.clone(),
                        (None, None) => String::new(),
                    },
                })
                .collect();
            Sink::csv(g, &["name", "sample", "pass", "value", "detail"], &rows)?
        }
    }
    let failed = report.checks.iter().filter(|c| !c.pass).count();
    eprintln!(
        "verify: {} certified samples, {} checks, {} failed",
        report.certified,
        report.checks.len(),
        failed
    );
    if report.pass {
        Ok(())
    } else {
        Err(Failure::Violation)
    }
}

#[derive(Serialize)]
struct CurveRow {
    t: f64,
    re: f64,
    im: f64,
}

#[derive(Serialize)]
struct CurveOutput<'a> {
    schema: u32,
    map: &'a str,
    r: f64,
    samples: usize,
    /// Present when enough samples were requested for the discrete test.
    convexity: Option<CurveConvexity>,
    rows: Vec<CurveRow>,
}

fn curve(g: &Global, id: &str, r: f64, samples: usize) -> CmdResult {
    let f = resolve_map(g, id)?;
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::RadiusOutOfRange(r).into());
    }
    if samples == 0 {
        return Err(Error::TooFewSamples { min: 1, got: 0 }.into());
    }
    let rows: Vec<CurveRow> = (0..samples)
        .map(|m| {
            let t = TAU * m as f64 / samples as f64;
            let w = f.eval(Complex::from_polar(r, t));
            CurveRow {
                t,
                re: w.re,
                im: w.im,
            }
        })
        .collect();
    match g.format {
        Format::Json => {
            let convexity = if samples >= MIN_SAMPLES {
                Some(convex_curve_check(&f, r, samples)?)
            } else {
                None
            };
            Sink::json(
                g,
                &CurveOutput {
                    schema: SCHEMA,
                    map: f.label(),
                    r,
                    samples,
                    convexity,
                    rows,
                },
            )
        }
        Format::Csv => Sink::csv(g, &["t", "re", "im"], &rows),
    }
}

#[derive(Serialize)]
struct SharpnessOutput {
    schema: u32,
    rows: Vec<SharpnessRow>,
}

fn sharpness(g: &Global, radii: &[f64]) -> CmdResult {
    let rows = sharpness_table(radii)?;
    match g.format {
        Format::Json => Sink::json(
            g,
            &SharpnessOutput {
                schema: SCHEMA,
                rows,
            },
        ),
        Format::Csv => Sink::csv(
            g,
            &[
                "r",
                "quantity",
                "value_at_extremal",
                "envelope_value",
                "relative_gap",
            ],
            &rows,
        ),
    }
}

#[derive(Serialize)]
struct CoeffRow {
    part: &'static str,
    n: usize,
    re: f64,
    im: f64,
}

#[derive(Serialize)]
struct TransformOutput<'a> {
    schema: u32,
    map: &'a str,
    a: Complex,
    mu: Complex,
    omega_at_a: Complex,
    residuals: NormalizationResiduals,
    /// Largest `|ω_a(z) - g_a'(z)/h_a'(z)|` over a 50-point grid.
    dilatation_mismatch: f64,
    coefficients: Vec<CoeffRow>,
}

fn transform(g: &Global, id: &str, a: &str) -> CmdResult {
    let a: Complex = a
        .trim()
        .parse()
        .map_err(|_| Failure::Config(format!("cannot parse complex number '{a}'")))?;
    let f = certify(resolve_map(g, id)?)?;
    let t = koebe_transform(&f, a)?;
    let omega = transformed_dilatation(&f, a)?;
    let direct = dilatation(&t.map)?;
    let dilatation_mismatch = (0..50)
        .map(|j| {
            let z = Complex::from_polar(0.1 + 0.8 * (j % 5) as f64 / 4.0, TAU * j as f64 / 50.0);
            (omega.eval(z) - direct.eval(z)).norm()
        })
        .fold(0.0, f64::max);
    let mut coefficients = vec![];
    for (part, series) in [
        ("H", t.map.h().series()),
        ("G", t.map.g().series()),
        ("omega", omega.series()),
    ] {
        coefficients.extend((1..=TRANSFORM_COEFFS).map(|n| {
            let c = series.coeff(n);
            CoeffRow {
                part,
                n,
                re: c.re,
                im: c.im,
            }
        }));
    }
    match g.format {
        Format::Json => Sink::json(
            g,
            &TransformOutput {
                schema: SCHEMA,
                map: f.label(),
                a: t.a,
                mu: t.mu,
                omega_at_a: t.omega_at_a,
                residuals: t.residuals,
                dilatation_mismatch,
                coefficients,
            },
        ),
        Format::Csv => {
            let r = t.residuals;
            for (part, value) in [
                ("residual-f0", r.f_at_zero),
                ("residual-h1", r.h_prime_minus_one),
                ("residual-g1", r.g_prime_at_zero),
                ("dilatation-mismatch", dilatation_mismatch),
            ] {
                coefficients.push(CoeffRow {
                    part,
                    n: 0,
                    re: value,
                    im: 0.0,
                });
            }
            Sink::csv(g, &["part", "n", "re", "im"], &coefficients)
        }
    }
}
