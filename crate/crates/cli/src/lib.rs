//! The `conj` command line: argument parsing, dispatch and JSON reports.
//!
//! Every invocation produces one JSON document on stdout. Exit codes: 0 when
//! the requested decision completed, 1 when `verify-suite` finds a failing
//! property, 2 on a parse failure, 3 when a module precondition fails.

pub mod schema;

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::builder::TypedValueParser;
use clap::{Args, Parser, Subcommand};
use conjalg::charspace::build_catalog;
use conjalg::diskmaps::{
    analytically_conjugate, classify, disk_samples, map_from_json, map_to_json, normal_form,
    semicrossed_iso_verdict, verify_point_maps, MapInput, MobiusMap, WITNESS_TOL,
};
use conjalg::dynsys::{are_conjugate, canonical_form, fixed_points, orbit_structure, FiniteDynSys};
use conjalg::json::{poly_from_json, system_from_json};
use conjalg::random::{case_rng, random_poly_upto, DEFAULT_SEED};
use conjalg::repr::{build_pencil, norm_estimate, Convention, TruncatedRep, DEFAULT_TRUNC};
use conjalg::skewpoly::SkewPoly;
use conjalg::suite::{verify_suite, SuiteSizes};
use conjalg::{Complex64, Error, Execution};
use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PROPERTY_FAILURE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;

/// Decide conjugacy questions about finite dynamical systems and Möbius
/// self-maps of the disk.
#[derive(Debug, Parser)]
#[command(name = "conj", version, about)]
pub struct Cli {
    /// Seed for randomized checks; overrides CONJ_SEED.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Run sample loops on one thread.
    #[arg(long, global = true)]
    pub sequential: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide conjugacy of two finite systems and give a witness.
    Finite { a: String, b: String },
    /// Canonical form, orbit structure and fixed points of a finite system.
    Canon { system: String },
    /// The character catalog of a finite system.
    CharSpace {
        system: String,
        #[arg(long, default_value_t = 1.0, value_parser = positive_f64)]
        radius: f64,
    },
    /// Truncated shift-model norm estimate of a polynomial.
    Norms {
        poly: String,
        #[arg(long, default_value_t = DEFAULT_TRUNC, value_parser = clap::value_parser!(u64).range(1..=4096).map(|v| v as usize))]
        trunc: usize,
        #[arg(long, default_value = "backward", value_parser = parse_convention)]
        convention: Convention,
        /// Base points (default: every point).
        #[arg(long, value_delimiter = ',')]
        points: Option<Vec<usize>>,
    },
    /// Build a pencil representation and check it on random polynomials.
    PencilCheck(PencilArgs),
    /// Möbius disk maps.
    Disk {
        #[command(subcommand)]
        command: DiskCommand,
    },
    /// Run every property sweep.
    VerifySuite(SuiteArgs),
    /// Check a report produced by this tool against its schema.
    ValidateReport { report: String },
}

#[derive(Debug, Args)]
pub struct PencilArgs {
    pub system: String,
    #[arg(long)]
    pub x: usize,
    /// Disc parameter as `re,im`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub z: Complex64,
    #[arg(long, default_value_t = 1.0, value_parser = positive_f64)]
    pub radius: f64,
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..).map(|v| v as usize))]
    pub samples: usize,
    #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(0..=64).map(|v| v as usize))]
    pub degree: usize,
}

#[derive(Debug, Args)]
pub struct SuiteArgs {
    /// Largest finite system in the sweeps.
    #[arg(long, default_value_t = 7, value_parser = clap::value_parser!(u64).range(1..=9).map(|v| v as usize))]
    pub max_n: usize,
    /// Multiplies every case count.
    #[arg(long, default_value_t = 1.0, value_parser = positive_f64)]
    pub scale: f64,
}

#[derive(Debug, Subcommand)]
pub enum DiskCommand {
    /// Kind, fixed points, multiplier and normal form.
    Classify { map: String },
    /// Analytic conjugacy with a witness automorphism.
    Conjugate { m1: String, m2: String },
    /// Isomorphism verdict for the semicrossed products.
    Iso { m1: String, m2: String },
    /// Maximum deviation of `gamma . m1 = m2 . gamma` on disk samples.
    VerifyWitness {
        gamma: String,
        m1: String,
        m2: String,
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..).map(|v| v as usize))]
        samples: usize,
        /// Radius of the sample disk.
        #[arg(long, default_value_t = 1.0, value_parser = positive_f64)]
        radius: f64,
    },
}

fn positive_f64(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        Ok(v) => Err(format!("expected a positive number, got {v}")),
        Err(e) => Err(e.to_string()),
    }
}

fn parse_convention(s: &str) -> Result<Convention, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [re] => re
            .parse()
            .map(|re| Complex64::new(re, 0.0))
            .map_err(|e| format!("{e}")),
        [re, im] => match (re.parse(), im.parse()) {
            (Ok(re), Ok(im)) => Ok(Complex64::new(re, im)),
            _ => Err(format!("expected `re,im`, got {s:?}")),
        },
        _ => Err(format!("expected `re,im`, got {s:?}")),
    }
}

/// A failed invocation: exit code plus the error payload.
#[derive(Debug)]
pub struct Failure {
    pub exit_code: i32,
    pub code: String,
    pub message: String,
}

impl Failure {
    fn parse(message: impl Into<String>) -> Self {
        Failure {
            exit_code: EXIT_PARSE,
            code: "Parse".into(),
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let exit_code = if matches!(e, Error::Parse(_)) {
            EXIT_PARSE
        } else {
            EXIT_PRECONDITION
        };
        Failure {
            exit_code,
            code: e.code().into(),
            message: e.to_string(),
        }
    }
}

type Outcome = Result<(Value, i32), Failure>;

/// Parses `args` (including the program name) and runs the command.
/// Returns the report and the exit code; help and version requests are
/// passed through as `Err` with clap's own rendering.
pub fn run_args<I, T>(args: I, env_seed: Option<String>) -> Result<(Value, i32), clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e)
            if matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp
                    | clap::error::ErrorKind::DisplayVersion
                    | clap::error::ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand
            ) =>
        {
            return Err(e)
        }
        Err(e) => {
            let msg = e.render().to_string();
            return Ok(error_report("usage", &Failure::parse(msg.trim())));
        }
    };
    Ok(run(&cli, env_seed))
}

pub fn run(cli: &Cli, env_seed: Option<String>) -> (Value, i32) {
    let name = command_name(&cli.command);
    let outcome = resolve_seed(cli.seed, env_seed).and_then(|seed| dispatch(cli, seed));
    match outcome {
        Ok((mut report, code)) => {
            if let Value::Object(map) = &mut report {
                map.insert("command".into(), json!(name));
                map.insert("exit_code".into(), json!(code));
            }
            (report, code)
        }
        Err(f) => error_report(name, &f),
    }
}

fn error_report(command: &str, f: &Failure) -> (Value, i32) {
    (
        json!({
            "command": command,
            "exit_code": f.exit_code,
            "error": {"code": f.code, "message": f.message},
        }),
        f.exit_code,
    )
}

fn resolve_seed(flag: Option<u64>, env: Option<String>) -> Result<u64, Failure> {
    match (flag, env) {
        (Some(s), _) => Ok(s),
        (None, Some(v)) => v.trim().parse().map_err(|_| {
            Failure::parse(format!("CONJ_SEED must be an unsigned integer, got {v:?}"))
        }),
        (None, None) => Ok(DEFAULT_SEED),
    }
}

pub fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Finite { .. } => "finite",
        Command::Canon { .. } => "canon",
        Command::CharSpace { .. } => "char-space",
        Command::Norms { .. } => "norms",
        Command::PencilCheck(_) => "pencil-check",
        Command::Disk { command } => match command {
            DiskCommand::Classify { .. } => "disk classify",
            DiskCommand::Conjugate { .. } => "disk conjugate",
            DiskCommand::Iso { .. } => "disk iso",
            DiskCommand::VerifyWitness { .. } => "disk verify-witness",
        },
        Command::VerifySuite(_) => "verify-suite",
        Command::ValidateReport { .. } => "validate-report",
    }
}

/// Reads a JSON argument: inline when it starts with `{` or `[`, otherwise
/// a file path. Returns the value and the directory relative references
/// resolve against.
fn load_json(arg: &str) -> Result<(Value, PathBuf), Failure> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        let v = serde_json::from_str(trimmed)
            .map_err(|e| Failure::parse(format!("inline JSON: {e}")))?;
        return Ok((v, PathBuf::from(".")));
    }
    let path = Path::new(arg);
    let text = std::fs::read_to_string(path).map_err(|e| Failure::parse(format!("{arg}: {e}")))?;
    let v = serde_json::from_str(&text).map_err(|e| Failure::parse(format!("{arg}: {e}")))?;
    let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    Ok((v, dir))
}

fn load_system(arg: &str) -> Result<FiniteDynSys, Failure> {
    let (v, _) = load_json(arg)?;
    Ok(system_from_json(&v)?)
}

fn load_poly(arg: &str) -> Result<SkewPoly, Failure> {
    let (v, dir) = load_json(arg)?;
    let mut nested: Option<Failure> = None;
    let resolved = poly_from_json(&v, |reference| {
        let path = dir.join(reference);
        load_system(&path.to_string_lossy()).map_err(|f| {
            let msg = f.message.clone();
            nested = Some(f);
            Error::Parse(msg)
        })
    });
    match (resolved, nested) {
        (Ok(p), _) => Ok(p),
        (Err(_), Some(f)) => Err(f),
        (Err(e), None) => Err(e.into()),
    }
}

/// Map arguments: inline JSON, a file, or a bare preset name.
fn load_map(arg: &str) -> Result<MapInput, Failure> {
    const BARE: [&str; 5] = [
        "identity",
        "radial_square",
        "cayley",
        "remark_eta1",
        "remark_eta2",
    ];
    let v = if BARE.contains(&arg) {
        json!({ "preset": arg })
    } else {
        load_json(arg)?.0
    };
    Ok(map_from_json(&v)?)
}

fn load_mobius(arg: &str) -> Result<MobiusMap, Failure> {
    Ok(load_map(arg)?.mobius()?)
}

fn matrix_json(m: &MobiusMap) -> Value {
    json!({ "matrix": map_to_json(m) })
}

fn complex_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn dispatch(cli: &Cli, seed: u64) -> Outcome {
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    match &cli.command {
        Command::Finite { a, b } => {
            let (a, b) = (load_system(a)?, load_system(b)?);
            let w = are_conjugate(&a, &b);
            Ok((
                json!({
                    "conjugate": w.is_some(),
                    "witness": w.as_ref().map(|w| w.bijection().to_vec()),
                    "canonical": [canonical_form(&a), canonical_form(&b)],
                }),
                EXIT_OK,
            ))
        }
        Command::Canon { system } => {
            let s = load_system(system)?;
            Ok((
                json!({
                    "canonical": canonical_form(&s),
                    "orbit_structure": orbit_structure(&s),
                    "fixed_points": fixed_points(&s),
                }),
                EXIT_OK,
            ))
        }
        Command::CharSpace { system, radius } => {
            let s = load_system(system)?;
            let mut v = build_catalog(&s, *radius)?.to_json();
            v["radius"] = json!(radius);
            Ok((v, EXIT_OK))
        }
        Command::Norms {
            poly,
            trunc,
            convention,
            points,
        } => norms(&load_poly(poly)?, *trunc, *convention, points.clone(), exec),
        Command::PencilCheck(args) => pencil_check(args, seed),
        Command::Disk { command } => disk(command, exec),
        Command::VerifySuite(args) => {
            let d = SuiteSizes::default();
            let scale = |k: usize| ((k as f64 * args.scale).ceil() as usize).max(1);
            let sizes = SuiteSizes {
                max_n: args.max_n,
                oracle_pairs: scale(d.oracle_pairs),
                product_pairs: scale(d.product_pairs),
                pencil_cases: scale(d.pencil_cases),
                elliptic_maps: scale(d.elliptic_maps),
                rotations: scale(d.rotations),
                norm_polys: scale(d.norm_polys),
                shift_systems: scale(d.shift_systems),
                misc_cases: scale(d.misc_cases),
            };
            let report = verify_suite(seed, sizes, exec);
            let code = if report.passed {
                EXIT_OK
            } else {
                EXIT_PROPERTY_FAILURE
            };
            let v = serde_json::to_value(&report).map_err(|e| Failure::parse(e.to_string()))?;
            Ok((v, code))
        }
        Command::ValidateReport { report } => {
            let (v, _) = load_json(report)?;
            match schema::validate(&v) {
                Ok(kind) => Ok((json!({"valid": true, "report_command": kind}), EXIT_OK)),
                Err(problem) => Ok((
                    json!({"valid": false, "problem": problem}),
                    EXIT_PROPERTY_FAILURE,
                )),
            }
        }
    }
}

fn norms(
    p: &SkewPoly,
    trunc: usize,
    convention: Convention,
    points: Option<Vec<usize>>,
    exec: Execution,
) -> Outcome {
    let points = points.unwrap_or_else(|| (0..p.system().size()).collect());
    let estimate = norm_estimate(p, trunc, &points, convention, exec)?;
    let l1 = p.l1_norm();
    // along 1, 2, 4, .., trunc the estimates must not decrease nor pass l1
    let mut chain: Vec<usize> = std::iter::successors(Some(1usize), |n| Some(n * 2))
        .take_while(|&n| n < trunc)
        .collect();
    chain.push(trunc);
    let mut monotone = true;
    let mut prev = 0.0;
    for n in chain {
        let e = if n == trunc {
            estimate
        } else {
            norm_estimate(p, n, &points, convention, exec)?
        };
        monotone &= e + 1e-12 >= prev && e <= l1 + 1e-12;
        prev = e;
    }
    let edge_warning = match points.first() {
        Some(&x) => {
            TruncatedRep::new(p.system().clone(), x, trunc, convention)?
                .rep_matrix(p)?
                .edge_warning
        }
        None => false,
    };
    Ok((
        json!({
            "estimate": estimate,
            "N": trunc,
            "monotone_check": monotone,
            "l1_norm": l1,
            "convention": convention,
            "points": points,
            "edge_warning": edge_warning,
        }),
        EXIT_OK,
    ))
}

fn pencil_check(args: &PencilArgs, seed: u64) -> Outcome {
    let sys = Arc::new(load_system(&args.system)?);
    let pi = build_pencil(sys.clone(), args.x, args.z, args.radius)?;
    let (t1, t2) = pi.extract_characters();
    let mut max_dev: f64 = 0.0;
    for i in 0..args.samples {
        let mut rng = case_rng(seed, "pencil-check", i as u64);
        let p = random_poly_upto(&mut rng, &sys, args.degree);
        let q = random_poly_upto(&mut rng, &sys, args.degree);
        let d = pi.apply(&(&p * &q))? - pi.apply(&p)? * pi.apply(&q)?;
        max_dev = d.iter().fold(max_dev, |m, v| m.max(v.norm()));
    }
    let u = pi.apply(&SkewPoly::shift(sys.clone()))?;
    let shift_image: Vec<Value> = u.transpose().iter().map(|z| complex_json(*z)).collect();
    let homomorphism = max_dev <= 1e-12;
    Ok((
        json!({
            "seed": seed,
            "x": args.x,
            "z": complex_json(args.z),
            "radius": args.radius,
            "characters": [
                {"x": t1.point(), "z": complex_json(t1.disc_param())},
                {"x": t2.point(), "z": complex_json(t2.disc_param())},
            ],
            "second_over_eta_x": t2.point() == sys.apply(t1.point()),
            "shift_image": shift_image,
            "samples": args.samples,
            "max_deviation": max_dev,
            "homomorphism": homomorphism,
        }),
        EXIT_OK,
    ))
}

fn disk(command: &DiskCommand, exec: Execution) -> Outcome {
    match command {
        DiskCommand::Classify { map } => {
            let m = load_mobius(map)?;
            let cls = classify(&m)?;
            let nf = normal_form(&m)?;
            Ok((
                json!({
                    "map": matrix_json(&m),
                    "kind": cls.kind,
                    "fixed_points": cls.fixed_points,
                    "multiplier": complex_json(cls.multiplier),
                    "distinguished": cls.distinguished_point().map(complex_json),
                    "normal_form": nf.form,
                    "chart": matrix_json(&nf.chart),
                }),
                EXIT_OK,
            ))
        }
        DiskCommand::Conjugate { m1, m2 } => {
            let (a, b) = (load_mobius(m1)?, load_mobius(m2)?);
            let w = analytically_conjugate(&a, &b)?;
            Ok((
                json!({
                    "conjugate": w.is_some(),
                    "witness": w.map(|w| matrix_json(&w.gamma)),
                    "deviation": w.map(|w| w.deviation),
                    "tolerance": WITNESS_TOL,
                }),
                EXIT_OK,
            ))
        }
        DiskCommand::Iso { m1, m2 } => {
            let (a, b) = (load_mobius(m1)?, load_mobius(m2)?);
            let d = semicrossed_iso_verdict(&a, &b)?;
            Ok((
                json!({
                    "verdict": d.verdict,
                    "witness": d.witness.map(|w| matrix_json(&w.gamma)),
                    "deviation": d.witness.map(|w| w.deviation),
                }),
                EXIT_OK,
            ))
        }
        DiskCommand::VerifyWitness {
            gamma,
            m1,
            m2,
            samples,
            radius,
        } => {
            let (g, a, b) = (load_map(gamma)?, load_map(m1)?, load_map(m2)?);
            let pts = disk_samples(*samples, *radius);
            let dev = verify_point_maps(
                &g.as_point_map(),
                &a.as_point_map(),
                &b.as_point_map(),
                &pts,
                exec,
            );
            Ok((
                json!({
                    "deviation": if dev.is_finite() { json!(dev) } else { Value::Null },
                    "samples": samples,
                    "radius": radius,
                    "finite": dev.is_finite(),
                }),
                EXIT_OK,
            ))
        }
    }
}
