use crate::manifest::ManifestBuilder;
use crate::parse;
use clap::Args;
use num_complex::Complex64;
use serde_json::json;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use tanlab_core::rotation::RotationNumber;
use tanlab_core::scan::{self, Palette, ProbeConfig, ScanConfig};
use tanlab_core::siegel::{self, BoundedScanConfig, IndicatorConfig, SiegelError};
use tanlab_core::tangent::{Polyline, TangentError, TangentMap};

pub struct Context {
    pub out_dir: PathBuf,
    pub precision: u32,
}

pub struct CmdError {
    pub code: u8,
    pub message: String,
}

type CmdResult = Result<(), CmdError>;

fn fail(code: u8, message: impl Into<String>) -> CmdError {
    CmdError {
        code,
        message: message.into(),
    }
}

fn io_err(e: impl std::fmt::Display) -> CmdError {
    fail(5, format!("output failed: {e}"))
}

fn siegel_err(e: SiegelError) -> CmdError {
    match e {
        SiegelError::ResonantMultiplier { .. } => fail(3, e.to_string()),
        SiegelError::InsufficientData { .. } => fail(4, e.to_string()),
        _ => fail(1, e.to_string()),
    }
}

/// Resolve --lambda / --theta into the map parameter.
fn resolve_lambda(lambda: &Option<String>, theta: Option<f64>) -> Result<Complex64, CmdError> {
    match (lambda, theta) {
        (Some(s), None) => parse::complex(s).map_err(|m| fail(2, m)),
        (None, Some(t)) => Ok(Complex64::from_polar(1.0, 2.0 * PI * t)),
        _ => Err(fail(2, "provide exactly one of --lambda or --theta")),
    }
}

fn resolve_rotation(
    theta: Option<f64>,
    quadratic: &Option<String>,
    depth: usize,
    precision: u32,
) -> Result<RotationNumber, CmdError> {
    match (theta, quadratic) {
        (Some(t), None) => RotationNumber::from_real(t, depth, precision).map_err(|e| fail(2, e.to_string())),
        (None, Some(name)) => match name.as_str() {
            "golden" => Ok(RotationNumber::golden(depth, precision)),
            "sqrt2m1" => Ok(RotationNumber::sqrt2_minus_1(depth, precision)),
            other => Err(fail(2, format!("unknown quadratic '{other}' (expected golden or sqrt2m1)"))),
        },
        _ => Err(fail(2, "provide exactly one of --theta or --quadratic")),
    }
}

#[derive(Args)]
pub struct EvalArgs {
    /// Map parameter as a complex literal "a+bi".
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
    /// Rotation number; implies lambda = e^{2 pi i theta}.
    #[arg(long)]
    theta: Option<f64>,
    /// Evaluation point "a+bi".
    #[arg(long, allow_hyphen_values = true)]
    z: String,
}

pub fn cmd_eval(_ctx: &Context, args: &EvalArgs) -> CmdResult {
    let lambda = resolve_lambda(&args.lambda, args.theta)?;
    let map = TangentMap::new(lambda).map_err(|_| fail(2, "lambda must be nonzero"))?;
    let z = parse::complex(&args.z).map_err(|m| fail(2, m))?;
    let (av1, av2) = map.asymptotic_values();
    let fmt = |r: tanlab_core::EvalResult| match r.finite() {
        Some(v) => json!({"re": v.re, "im": v.im}),
        None => json!("pole"),
    };
    let doc = json!({
        "lambda": {"re": lambda.re, "im": lambda.im},
        "z": {"re": z.re, "im": z.im},
        "value": fmt(map.evaluate(z)),
        "derivative": fmt(map.derivative(z)),
        "asymptotic_values": [
            {"re": av1.re, "im": av1.im},
            {"re": av2.re, "im": av2.im}
        ],
    });
    println!("{doc}");
    Ok(())
}

#[derive(Args)]
pub struct SiegelArgs {
    #[arg(long)]
    theta: Option<f64>,
    /// Exact quadratic irrational: golden | sqrt2m1.
    #[arg(long)]
    quadratic: Option<String>,
    /// Number of linearizer coefficients.
    #[arg(long, default_value_t = 200)]
    coeffs: usize,
    /// Trace radii as fractions of the estimated conformal radius.
    #[arg(long, value_delimiter = ',', default_value = "0.5,0.9,0.95,0.995")]
    rhos: Vec<f64>,
    /// Continued-fraction depth used for the rotation number.
    #[arg(long, default_value_t = 40)]
    depth: usize,
}

pub fn cmd_siegel(ctx: &Context, args: &SiegelArgs) -> CmdResult {
    let manifest = ManifestBuilder::new("siegel");
    let rn = resolve_rotation(args.theta, &args.quadratic, args.depth, ctx.precision)?;
    if rn.is_rational() {
        return Err(fail(3, format!("theta = {} is rational; multiplier is resonant", rn.theta())));
    }
    let series = siegel::linearizer(&rn, args.coeffs, ctx.precision).map_err(siegel_err)?;
    let estimate = siegel::unboundedness_indicators(&series, &args.rhos, &IndicatorConfig::default())
        .map_err(siegel_err)?;

    std::fs::create_dir_all(&ctx.out_dir).map_err(io_err)?;
    let json_path = ctx.out_dir.join("siegel.json");
    std::fs::write(&json_path, serde_json::to_string_pretty(&estimate).unwrap()).map_err(io_err)?;
    let csv_path = ctx.out_dir.join("traces.csv");
    std::fs::write(&csv_path, siegel::traces_to_csv(&estimate)).map_err(io_err)?;

    manifest
        .write(
            &json_path,
            json!({
                "theta": rn.theta(),
                "quadratic": args.quadratic,
                "coeffs": args.coeffs,
                "rhos": args.rhos,
                "precision": ctx.precision,
            }),
            json!({
                "verdict": estimate.verdict,
                "radius_estimate": estimate.radius_estimate,
                "smallest_denominator": series.smallest_denominator(),
            }),
        )
        .map_err(io_err)?;
    println!(
        "{}",
        json!({
            "verdict": estimate.verdict,
            "radius_estimate": estimate.radius_estimate,
            "extent": estimate.extent,
            "image_gap": estimate.image_gap,
            "heuristic": true,
            "report": json_path,
            "traces": csv_path,
        })
    );
    Ok(())
}

#[derive(Args)]
pub struct ScanArgs {
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
    #[arg(long)]
    theta: Option<f64>,
    /// Rectangle "x0,y0,x1,y1".
    #[arg(long, value_parser = parse::rect, allow_hyphen_values = true)]
    rect: (Complex64, Complex64),
    /// Resolution: "n" or "nx,ny".
    #[arg(long)]
    res: String,
    #[arg(long)]
    max_iter: Option<u32>,
    #[arg(long)]
    escape_im: Option<f64>,
    /// Also write a PNG next to the PPM.
    #[arg(long, default_value_t = false)]
    png: bool,
}

pub fn cmd_scan(ctx: &Context, args: &ScanArgs) -> CmdResult {
    let manifest = ManifestBuilder::new("scan");
    let lambda = resolve_lambda(&args.lambda, args.theta)?;
    let map = TangentMap::new(lambda).map_err(|_| fail(2, "lambda must be nonzero"))?;
    let res = parse_resolution(&args.res)?;
    let mut config = ScanConfig::for_map(&map);
    if let Some(m) = args.max_iter {
        config.max_iter = m;
    }
    if let Some(e) = args.escape_im {
        config.escape_im = e;
    }
    let grid = scan::scan_dynamical(&map, args.rect, res, &config).map_err(|e| fail(2, e.to_string()))?;

    std::fs::create_dir_all(&ctx.out_dir).map_err(io_err)?;
    let image_path = ctx.out_dir.join(if args.png { "scan.png" } else { "scan.ppm" });
    scan::render(&grid, &Palette::default(), &image_path).map_err(io_err)?;

    for (class, count) in grid.histogram() {
        println!("{class}: {count}");
    }
    manifest
        .write(
            &image_path,
            json!({
                "lambda": {"re": lambda.re, "im": lambda.im},
                "rect": [args.rect.0.re, args.rect.0.im, args.rect.1.re, args.rect.1.im],
                "res": [res.0, res.1],
                "config": config,
            }),
            json!({ "histogram": grid.histogram() }),
        )
        .map_err(io_err)?;
    Ok(())
}

fn parse_resolution(s: &str) -> Result<(usize, usize), CmdError> {
    let parts: Vec<&str> = s.split(',').collect();
    let parse_one = |p: &str| p.trim().parse::<usize>().map_err(|_| fail(2, format!("bad resolution '{s}'")));
    match parts.as_slice() {
        [n] => {
            let n = parse_one(n)?;
            Ok((n, n))
        }
        [nx, ny] => Ok((parse_one(nx)?, parse_one(ny)?)),
        _ => Err(fail(2, format!("bad resolution '{s}'"))),
    }
}

#[derive(Args)]
pub struct ParamScanArgs {
    /// Theta range "a,b" swept over [a, b).
    #[arg(long, value_delimiter = ',', default_value = "0,1")]
    range: Vec<f64>,
    #[arg(long, default_value_t = 64)]
    samples: usize,
    /// Radial probe offset: probes at (1 - epsilon) e^{2 pi i theta}.
    #[arg(long, default_value_t = 0.05)]
    epsilon: f64,
}

pub fn cmd_param_scan(ctx: &Context, args: &ParamScanArgs) -> CmdResult {
    let manifest = ManifestBuilder::new("param-scan");
    if args.range.len() != 2 || args.range[0] >= args.range[1] {
        return Err(fail(2, "range must be 'a,b' with a < b"));
    }
    if !(args.epsilon > 0.0 && args.epsilon < 1.0) {
        return Err(fail(2, "epsilon must lie in (0,1)"));
    }
    let probe = ProbeConfig {
        epsilon: args.epsilon,
        precision_digits: ctx.precision,
        ..ProbeConfig::default()
    };
    let samples = scan::scan_parameter((args.range[0], args.range[1]), args.samples, &probe);

    std::fs::create_dir_all(&ctx.out_dir).map_err(io_err)?;
    let csv_path = ctx.out_dir.join("param_scan.csv");
    std::fs::write(&csv_path, scan::param_sweep_csv(&samples)).map_err(io_err)?;
    manifest
        .write(
            &csv_path,
            json!({
                "range": args.range,
                "samples": args.samples,
                "epsilon": args.epsilon,
                "precision": ctx.precision,
            }),
            json!({
                "siegel_flags": samples.iter().filter(|s| s.siegel_flag).count(),
                "cycles_found": samples.iter().filter(|s| s.period.is_some()).count(),
            }),
        )
        .map_err(io_err)?;
    println!("{}", json!({ "output": csv_path, "samples": samples.len() }));
    Ok(())
}

#[derive(Args)]
pub struct CfArgs {
    /// Real in (0,1) to expand.
    #[arg(long)]
    x: Option<f64>,
    /// Exact quadratic irrational: golden | sqrt2m1.
    #[arg(long)]
    quadratic: Option<String>,
    #[arg(long, default_value_t = 30)]
    depth: usize,
    /// Number of Brjuno partial sums to report.
    #[arg(long, default_value_t = 10)]
    brjuno_terms: usize,
}

pub fn cmd_cf(ctx: &Context, args: &CfArgs) -> CmdResult {
    let rn = resolve_rotation(args.x, &args.quadratic, args.depth, ctx.precision)?;
    let convergents: Vec<[String; 2]> = rn
        .convergents()
        .iter()
        .map(|(p, q)| [p.to_string(), q.to_string()])
        .collect();
    let brjuno: Vec<serde_json::Value> = (1..=args.brjuno_terms)
        .map_while(|n| rn.brjuno_partial(n).ok())
        .map(|b| json!({"n": b.n, "value": b.value, "beta_tail": b.beta_tail}))
        .collect();
    let doc = json!({
        "theta": rn.theta(),
        "quotients": rn.quotients(),
        "convergents": convergents,
        "max_quotient": rn.bounded_type_prefix().max_quotient,
        "rational": rn.is_rational(),
        "brjuno_partials": brjuno,
    });
    println!("{doc}");
    Ok(())
}

#[derive(Args)]
pub struct LiftArgs {
    /// CSV with header re,im describing the curve to lift.
    #[arg(long)]
    curve: PathBuf,
    /// Base preimage "a+bi" with f(base) equal to the curve's first point.
    #[arg(long, allow_hyphen_values = true)]
    base: String,
    #[arg(long, allow_hyphen_values = true)]
    lambda: String,
}

pub fn cmd_lift(ctx: &Context, args: &LiftArgs) -> CmdResult {
    let mut manifest = ManifestBuilder::new("lift");
    let lambda = parse::complex(&args.lambda).map_err(|m| fail(2, m))?;
    let map = TangentMap::new(lambda).map_err(|_| fail(2, "lambda must be nonzero"))?;
    let base = parse::complex(&args.base).map_err(|m| fail(2, m))?;
    manifest.hash_input(&args.curve).map_err(io_err)?;
    let curve = read_curve_csv(&args.curve)?;

    let lift = map.lift_curve(&curve, base).map_err(|e| match e {
        TangentError::ClearanceViolation { dist, .. } => {
            fail(6, format!("{e}; nearest approach {dist:.6e}"))
        }
        other => fail(2, other.to_string()),
    })?;

    // round-trip deviation |f(lift) - curve| at the original samples
    let mut max_dev: f64 = 0.0;
    for &z in lift.points() {
        if let Some(w) = map.evaluate(z).finite() {
            let nearest = curve
                .points()
                .iter()
                .map(|&c| (w - c).norm())
                .fold(f64::INFINITY, f64::min);
            max_dev = max_dev.max(nearest);
        }
    }

    std::fs::create_dir_all(&ctx.out_dir).map_err(io_err)?;
    let out_path = ctx.out_dir.join("lift.csv");
    let mut csv = String::from("re,im\n");
    for p in lift.points() {
        csv.push_str(&format!("{},{}\n", p.re, p.im));
    }
    std::fs::write(&out_path, csv).map_err(io_err)?;
    manifest
        .write(
            &out_path,
            json!({
                "curve": args.curve,
                "base": {"re": base.re, "im": base.im},
                "lambda": {"re": lambda.re, "im": lambda.im},
            }),
            json!({ "max_roundtrip_deviation": max_dev, "points": lift.len() }),
        )
        .map_err(io_err)?;
    println!("{}", json!({ "output": out_path, "points": lift.len(), "max_roundtrip_deviation": max_dev }));
    Ok(())
}

fn read_curve_csv(path: &Path) -> Result<Polyline, CmdError> {
    let text = std::fs::read_to_string(path).map_err(io_err)?;
    let mut pts = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || (i == 0 && line.starts_with("re")) {
            continue;
        }
        let mut cols = line.split(',');
        let re: f64 = cols
            .next()
            .and_then(|c| c.trim().parse().ok())
            .ok_or_else(|| fail(2, format!("bad curve row {}", i + 1)))?;
        let im: f64 = cols
            .next()
            .and_then(|c| c.trim().parse().ok())
            .ok_or_else(|| fail(2, format!("bad curve row {}", i + 1)))?;
        pts.push(Complex64::new(re, im));
    }
    Polyline::new(pts, false).map_err(|e| fail(2, e.to_string()))
}

#[derive(Args)]
pub struct BoundedScanArgs {
    /// Candidates: quadratic names (golden, sqrt2m1) and/or decimals in (0,1).
    #[arg(long, value_delimiter = ',', required = true)]
    candidates: Vec<String>,
    #[arg(long, default_value_t = 200)]
    coeffs: usize,
    #[arg(long, value_delimiter = ',', default_value = "0.9,0.95,0.99,0.995")]
    rhos: Vec<f64>,
    #[arg(long, default_value_t = 40)]
    depth: usize,
}

pub fn cmd_bounded_scan(ctx: &Context, args: &BoundedScanArgs) -> CmdResult {
    let manifest = ManifestBuilder::new("bounded-scan");
    let mut candidates = Vec::new();
    for raw in &args.candidates {
        let rn = match raw.as_str() {
            "golden" => RotationNumber::golden(args.depth, ctx.precision),
            "sqrt2m1" => RotationNumber::sqrt2_minus_1(args.depth, ctx.precision),
            other => {
                let x: f64 = other
                    .parse()
                    .map_err(|_| fail(2, format!("candidate '{other}' is neither a name nor a real")))?;
                RotationNumber::from_real(x, args.depth, ctx.precision)
                    .map_err(|e| fail(2, e.to_string()))?
            }
        };
        candidates.push((raw.clone(), rn));
    }
    let config = BoundedScanConfig {
        n_coeffs: args.coeffs,
        precision_digits: ctx.precision,
        rhos: args.rhos.clone(),
        ..BoundedScanConfig::default()
    };
    let report = siegel::bounded_disk_scan(&candidates, &config);

    std::fs::create_dir_all(&ctx.out_dir).map_err(io_err)?;
    let out_path = ctx.out_dir.join("bounded_scan.json");
    std::fs::write(&out_path, serde_json::to_string_pretty(&report).unwrap()).map_err(io_err)?;
    manifest
        .write(
            &out_path,
            json!({
                "candidates": args.candidates,
                "coeffs": args.coeffs,
                "rhos": args.rhos,
                "precision": ctx.precision,
            }),
            json!({ "heuristic": true }),
        )
        .map_err(io_err)?;
    println!("{}", serde_json::to_string(&report).unwrap());
    Ok(())
}
