//! Command-line front end. [`run`] parses arguments, writes JSON to the
//! given writer and returns the process exit code.

use std::io::Write;

use clap::{Args, Parser, Subcommand};
use floatbody_core::detkit::{
    BorderedVector, bordered_matrix, change_of_variables_matrix, determinant, j, jacobian_sqrtq,
    k as k_identity, rank_one_matrix,
};
use floatbody_core::flotation::{self, FlotationSurface, cut_volume};
use floatbody_core::geometry::{SurfaceShape, cut_params};
use floatbody_core::kernels::kernel;
use floatbody_core::oracle::{rng, slice_volume};
use floatbody_core::{Dim, Error, Family, Hyperplane, QuadricBody};
use serde::Serialize;

use crate::json::{Num, nums};
use crate::parallel;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "floatbody", version, about = "Cut volumes of quadric bodies and their surfaces of flotation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a cut-volume kernel at --t.
    Kernel(Params),
    /// Volume cut from a body by --plane.
    Cut(Params),
    /// Flotation parameter k for --volume.
    Invert(Params),
    /// Surface of flotation for --volume (or --k), optionally meshed.
    Surface(Params),
    /// Plane with normal --direction cutting --volume.
    Waterline(Params),
    /// Stream tangent-plane volumes of the surface at --k (or --volume).
    Verify(Params),
    /// Closed form, slice quadrature and Monte Carlo for --plane.
    Oracle(Params),
    /// Section centroid of the tangent plane at --point against the tangency point.
    Dupin(Params),
    /// Determinant identities against elimination.
    Identities(Params),
}

#[derive(Args, Debug, Clone)]
struct Params {
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    /// Semiaxes a1,…
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    semiaxes: Option<Vec<f64>>,
    /// Paraboloid coefficients p1,…
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    coeffs: Option<Vec<f64>>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    k: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    t: Option<f64>,
    #[arg(long)]
    volume: Option<f64>,
    /// "p1,…,pn;c" for z = Σ p_i x_i + c.
    #[arg(long, allow_hyphen_values = true)]
    plane: Option<String>,
    /// Unit normal of the waterline, n + 1 components.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    direction: Option<Vec<f64>>,
    /// Tangent point x̄ for `dupin`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    point: Option<Vec<f64>>,
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 4)]
    nodes: usize,
    /// Number of random vectors for `identities`.
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Worker threads; results do not depend on it.
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// Number of points of the exported surface profile.
    #[arg(long)]
    mesh: Option<usize>,
    /// JSON output (the default and only format).
    #[arg(long)]
    json: bool,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Lib(Error),
    Io(std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

type Outcome = Result<(), Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

#[derive(Serialize)]
struct ErrorOut<'a> {
    error: ErrorBody<'a>,
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    kind: &'a str,
    message: String,
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return EXIT_OK;
            }
            let _ = write!(err, "{e}");
            report(out, "usage", e.kind().to_string());
            return EXIT_USAGE;
        }
    };
    let threads = params(&cli.command).threads;
    let result = parallel::with_threads(threads, || {
        let mut buf = Vec::new();
        let r = dispatch(&cli.command, &mut buf);
        (r, buf)
    });
    let (result, buf) = result;
    if let Err(e) = out.write_all(&buf) {
        let _ = writeln!(err, "{e}");
        return EXIT_INTERNAL;
    }
    match result {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "usage: {msg}");
            report(out, "usage", msg);
            EXIT_USAGE
        }
        Err(Failure::Lib(e)) => {
            let _ = writeln!(err, "{e}");
            let kind = error_kind(&e);
            report(out, kind, e.to_string());
            if e.is_domain() { EXIT_USAGE } else { EXIT_INTERNAL }
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "{e}");
            EXIT_INTERNAL
        }
    }
}

fn report(out: &mut dyn Write, kind: &str, message: String) {
    let body = ErrorOut {
        error: ErrorBody { kind, message },
    };
    let _ = writeln!(out, "{}", serde_json::to_string(&body).expect("serializable"));
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::InvalidInput(_) => "invalid_input",
        Error::Domain { .. } => "domain",
        Error::Infeasible(_) => "infeasible",
        Error::VolumeOutOfRange { .. } => "volume_out_of_range",
        Error::Sampling { .. } => "sampling",
        Error::HitRate { .. } => "hit_rate",
        Error::Accuracy { .. } => "accuracy",
        Error::SurfaceOutsideBody { .. } => "surface_outside_body",
    }
}

fn params(c: &Command) -> &Params {
    match c {
        Command::Kernel(p)
        | Command::Cut(p)
        | Command::Invert(p)
        | Command::Surface(p)
        | Command::Waterline(p)
        | Command::Verify(p)
        | Command::Oracle(p)
        | Command::Dupin(p)
        | Command::Identities(p) => p,
    }
}

fn dispatch(c: &Command, out: &mut Vec<u8>) -> Outcome {
    match c {
        Command::Kernel(p) => cmd_kernel(p, out),
        Command::Cut(p) => cmd_cut(p, out),
        Command::Invert(p) => cmd_invert(p, out),
        Command::Surface(p) => cmd_surface(p, out),
        Command::Waterline(p) => cmd_waterline(p, out),
        Command::Verify(p) => cmd_verify(p, out),
        Command::Oracle(p) => cmd_oracle(p, out),
        Command::Dupin(p) => cmd_dupin(p, out),
        Command::Identities(p) => cmd_identities(p, out),
    }
}

fn emit<T: Serialize>(out: &mut Vec<u8>, value: &T) -> Outcome {
    serde_json::to_writer(&mut *out, value).map_err(|e| Failure::Io(e.into()))?;
    out.push(b'\n');
    Ok(())
}

fn family(p: &Params) -> Result<Family, Failure> {
    let name = p.family.as_deref().ok_or_else(|| usage("--family is required"))?;
    Family::from_name(name).ok_or_else(|| {
        usage(format!(
            "unknown family `{name}` (expected paraboloid, hyperboloid2, hyperboloid1, cone or ellipsoid)"
        ))
    })
}

fn dim(p: &Params) -> Result<Dim, Failure> {
    let n = p.n.ok_or_else(|| usage("--n is required"))?;
    Ok(Dim::new(n)?)
}

fn body(p: &Params) -> Result<QuadricBody, Failure> {
    let family = family(p)?;
    let d = dim(p)?;
    let given = if family == Family::Paraboloid {
        if p.semiaxes.is_some() {
            return Err(usage("paraboloids take --coeffs, not --semiaxes"));
        }
        p.coeffs.clone()
    } else {
        if p.coeffs.is_some() {
            return Err(usage("--coeffs only applies to paraboloids"));
        }
        p.semiaxes.clone()
    };
    let axes = given.unwrap_or_else(|| vec![1.0; family.semiaxis_count(d)]);
    let eps = match family {
        Family::OneSheetTruncated => Some(p.epsilon.ok_or_else(|| usage("--epsilon is required for hyperboloid1"))?),
        _ if p.epsilon.is_some() => return Err(usage("--epsilon only applies to hyperboloid1")),
        _ => None,
    };
    Ok(QuadricBody::new(family, d, axes, eps)?)
}

fn plane(p: &Params, d: Dim) -> Result<Hyperplane, Failure> {
    let text = p.plane.as_deref().ok_or_else(|| usage("--plane is required"))?;
    let (slope, c) = text
        .split_once(';')
        .ok_or_else(|| usage("--plane must look like \"p1,...,pn;c\""))?;
    let number = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| usage(format!("bad number `{}` in --plane", s.trim())))
    };
    let slope = slope.split(',').map(number).collect::<Result<Vec<_>, _>>()?;
    if slope.len() != d.n() {
        return Err(usage(format!("--plane needs {} slopes", d.n())));
    }
    Ok(Hyperplane::new(slope, number(c)?)?)
}

fn surface(p: &Params, b: &QuadricBody) -> Result<FlotationSurface, Failure> {
    match (p.k, p.volume) {
        (Some(k), None) => Ok(FlotationSurface::homothetic(b, k)?),
        (None, Some(v)) => Ok(flotation::flotation_surface(b, v)?),
        _ => Err(usage("give exactly one of --k and --volume")),
    }
}

fn samples(p: &Params) -> Result<u64, Failure> {
    match p.samples {
        Some(0) => Err(usage("--samples must be positive")),
        Some(s) => Ok(s),
        None => Err(usage("--samples is required")),
    }
}

#[derive(Serialize)]
struct KernelOut {
    family: &'static str,
    n: usize,
    t: Num,
    value: Num,
}

fn cmd_kernel(p: &Params, out: &mut Vec<u8>) -> Outcome {
    let family = family(p)?;
    let d = dim(p)?;
    let t = p.t.ok_or_else(|| usage("--t is required"))?;
    if family != Family::OneSheetTruncated && p.epsilon.is_some() {
        return Err(usage("--epsilon only applies to hyperboloid1"));
    }
    let eval = kernel(family, d, p.epsilon, t)?;
    emit(
        out,
        &KernelOut {
            family: family.name(),
            n: d.n(),
            t: Num(t),
            value: Num(eval.value),
        },
    )
}

#[derive(Serialize)]
struct PlaneOut {
    slope: Vec<Num>,
    intercept: Num,
}

impl From<&Hyperplane> for PlaneOut {
    fn from(h: &Hyperplane) -> Self {
        PlaneOut {
            slope: nums(h.slope()),
            intercept: Num(h.intercept()),
        }
    }
}

#[derive(Serialize)]
struct CutOut {
    family: &'static str,
    n: usize,
    volume: Num,
    zeta: Num,
    d: Num,
    q: Num,
}

fn cmd_cut(p: &Params, out: &mut Vec<u8>) -> Outcome {
    let b = body(p)?;
    let h = plane(p, b.dim())?;
    let params = cut_params(&b, &h)?;
    let volume = cut_volume(&b, &h)?;
    emit(
        out,
        &CutOut {
            family: b.family().name(),
            n: b.dim().n(),
            volume: Num(volume),
            zeta: Num(params.zeta),
            d: Num(params.d),
            q: Num(params.q),
        },
    )
}

#[derive(Serialize)]
struct InvertOut {
    family: &'static str,
    n: usize,
    volume: Num,
    k: Num,
}

fn cmd_invert(p: &Params, out: &mut Vec<u8>) -> Outcome {
    let b = body(p)?;
    let v = p.volume.ok_or_else(|| usage("--volume is required"))?;
    let k = flotation::invert_volume(b.family(), b.dim(), b.semiaxes(), b.epsilon(), v)?;
    emit(
        out,
        &InvertOut {
            family: b.family().name(),
            n: b.dim().n(),
            volume: Num(v),
            k: Num(k),
        },
    )
}

#[derive(Serialize)]
struct SurfaceOut {
    family: &'static str,
    shape: &'static str,
    n: usize,
    k: Num,
    semiaxes: Vec<Num>,
    translation: Num,
    #[serde(skip_serializing_if = "Option::is_none")]
    truncation: Option<Num>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mesh: Option<Vec<Vec<Num>>>,
}

/// `m` points of the surface's profile in the `(x_1, z)` plane.
fn profile(s: &FlotationSurface, m: usize) -> Vec<Vec<f64>> {
    let n = s.dim().n();
    let a = s.semiaxes();
    let at = |i: usize| if m == 1 { 0.5 } else { i as f64 / (m - 1) as f64 };
    (0..m)
        .map(|i| {
            let mut x = vec![0.0; n];
            let z = match s.shape() {
                SurfaceShape::Elliptic { .. } => {
                    let th = std::f64::consts::PI * (at(i) - 0.5);
                    x[0] = a[0] * th.sin();
                    a[n] * th.cos()
                }
                shape => {
                    let reach = match (s.truncation(), &shape) {
                        (Some(top), _) => a[0] * ((top / a[n]).powi(2) - 1.0).max(0.0).sqrt(),
                        (None, SurfaceShape::Paraboloid { coeffs, lift }) => {
                            (1.0 + lift).sqrt() / coeffs[0]
                        }
                        _ => 2.0 * a[0],
                    };
                    x[0] = reach * (2.0 * at(i) - 1.0);
                    shape.lift(&x).map(|pt| pt[n]).unwrap_or(f64::NAN)
                }
            };
            let mut pt = x;
            pt.push(z);
            pt
        })
        .collect()
}

fn cmd_surface(p: &Params, out: &mut Vec<u8>) -> Outcome {
    let b = body(p)?;
    let s = surface(p, &b)?;
    let shape = match s.shape() {
        SurfaceShape::Paraboloid { .. } => "paraboloid",
        SurfaceShape::Hyperbolic { .. } => "hyperboloid2",
        SurfaceShape::Elliptic { .. } => "ellipsoid",
    };
    let mesh = match p.mesh {
        Some(0) => return Err(usage("--mesh must be positive")),
        Some(m) => Some(profile(&s, m).iter().map(|pt| nums(pt)).collect()),
        None => None,
    };
    emit(
        out,
        &SurfaceOut {
            family: b.family().name(),
            shape,
            n: b.dim().n(),
            k: Num(s.k()),
            semiaxes: nums(s.semiaxes()),
            translation: Num(s.translation()),
            truncation: s.truncation().map(Num),
            mesh,
        },
    )
}

#[derive(Serialize)]
struct WaterlineOut {
    plane: PlaneOut,
    submerged_volume: Num,
    iterations: u32,
    residual: Num,
}

fn cmd_waterline(p: &Params, out: &mut Vec<u8>) -> Outcome {
    let b = body(p)?;
    let dir = p.direction.as_ref().ok_or_else(|| usage("--direction is required"))?;
    let v = p.volume.ok_or_else(|| usage("--volume is required"))?;
    let sol = flotation::waterline(&b, dir, v)?;
    emit(
        out,
        &WaterlineOut {
            plane: (&sol.plane).into(),
            submerged_volume: Num(sol.submerged_volume),
            iterations: sol.iterations,
            residual: Num(sol.residual),
        },
    )
}

#[derive(Serialize)]
struct VerifyLine {
    index: u64,
    point: Vec<Num>,
    volume: Num,
}

#[derive(Serialize)]
struct VerifySummary {
    summary: bool,
    family: &'static str,
    n: usize,
    k: Num,
    samples: u64,
    seed: u64,
    reference: Num,
    max_rel_dev: Num,
}

fn cmd_verify(p: &Params, out: &mut Vec<u8>) -> Outcome {
    let b = body(p)?;
    let s = surface(p, &b)?;
    let count = samples(p)?;
    let report = parallel::verify_constancy(&b, &s, count, p.seed)?;
    for (i, sample) in report.samples.iter().enumerate() {
        emit(
            out,
            &VerifyLine {
                index: i as u64,
                point: nums(&sample.point),
                volume: Num(sample.volume),
            },
        )?;
    }
    emit(
        out,
        &VerifySummary {
            summary: true,
            family: b.family().name(),
            n: b.dim().n(),
            k: Num(s.k()),
            samples: count,
            seed: p.seed,
            reference: Num(report.reference),
            max_rel_dev: Num(report.max_rel_dev),
        },
    )
}

#[derive(Serialize)]
struct OracleLine {
    method: &'static str,
    value: Num,
    #[serde(skip_serializing_if = "Option::is_none")]
    std_error: Option<Num>,
    #[serde(skip_serializing_if = "Option::is_none")]
    samples: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rel_err: Option<Num>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sigmas: Option<Num>,
}

fn cmd_oracle(p: &Params, out: &mut Vec<u8>) -> Outcome {
    let b = body(p)?;
    let h = plane(p, b.dim())?;
    let exact = cut_volume(&b, &h)?;
    emit(
        out,
        &OracleLine {
            method: "closed_form",
            value: Num(exact),
            std_error: None,
            samples: None,
            seed: None,
            rel_err: None,
            sigmas: None,
        },
    )?;
    let slices = slice_volume(&b, &h, p.nodes.max(1))?;
    emit(
        out,
        &OracleLine {
            method: slices.method.name(),
            value: Num(slices.value),
            std_error: Some(Num(slices.std_error)),
            samples: Some(slices.samples),
            seed: None,
            rel_err: Some(Num((slices.value - exact).abs() / exact)),
            sigmas: None,
        },
    )?;
    if let Some(count) = p.samples {
        if count == 0 {
            return Err(usage("--samples must be positive"));
        }
        let mc = parallel::mc_volume(&b, &h, count, p.seed)?;
        emit(
            out,
            &OracleLine {
                method: mc.method.name(),
                value: Num(mc.value),
                std_error: Some(Num(mc.std_error)),
                samples: Some(mc.samples),
                seed: Some(mc.seed),
                rel_err: Some(Num((mc.value - exact).abs() / exact)),
                sigmas: Some(Num((mc.value - exact).abs() / mc.std_error)),
            },
        )?;
    }
    Ok(())
}

#[derive(Serialize)]
struct DupinOut {
    tangent_point: Vec<Num>,
    plane: PlaneOut,
    centroid: Vec<Num>,
    std_error: Vec<Num>,
    max_sigmas: Num,
    samples: u64,
    seed: u64,
}

fn cmd_dupin(p: &Params, out: &mut Vec<u8>) -> Outcome {
    let b = body(p)?;
    let s = surface(p, &b)?;
    let x = p.point.clone().unwrap_or_else(|| vec![0.0; b.dim().n()]);
    if x.len() != b.dim().n() {
        return Err(usage(format!("--point needs {} coordinates", b.dim().n())));
    }
    let count = samples(p)?;
    let touch = s.point_at(&x)?;
    let h = s.tangent_plane(&x)?;
    let est = parallel::mc_section_centroid(&b, &h, count, p.seed)?;
    let max_sigmas = est
        .point
        .iter()
        .zip(&touch)
        .zip(&est.std_error)
        .map(|((c, t), e)| if *e > 0.0 { (c - t).abs() / e } else if c == t { 0.0 } else { f64::INFINITY })
        .fold(0.0, f64::max);
    emit(
        out,
        &DupinOut {
            tangent_point: nums(&touch),
            plane: (&h).into(),
            centroid: nums(&est.point),
            std_error: nums(&est.std_error),
            max_sigmas: Num(max_sigmas),
            samples: est.samples,
            seed: est.seed,
        },
    )
}

#[derive(Serialize)]
struct IdentitiesOut {
    n: usize,
    trials: usize,
    seed: u64,
    #[serde(rename = "max_abs_err_J")]
    max_abs_err_j: Num,
    #[serde(rename = "max_abs_err_K")]
    max_abs_err_k: Num,
    max_abs_err_jacobian: Num,
}

fn cmd_identities(p: &Params, out: &mut Vec<u8>) -> Outcome {
    let d = dim(p)?;
    let n = d.n();
    let (mut ej, mut ek, mut ejac) = (0.0f64, 0.0f64, 0.0f64);
    for i in 0..p.trials as u64 {
        let mut g = rng::stream(p.seed, i);
        let reach = 1.0 / (n as f64).sqrt();
        let a: Vec<f64> = (0..n).map(|_| reach * (2.0 * rng::unit(&mut g) - 1.0)).collect();
        let v = BorderedVector::new(a.clone())?;
        ej = ej.max((j(&v) - determinant(&bordered_matrix(&v))).abs());
        ek = ek.max((k_identity(&v) - determinant(&rank_one_matrix(&v))).abs());
        let shrunk: Vec<f64> = a.iter().map(|x| 0.99 * x).collect();
        let m = change_of_variables_matrix(&shrunk)?;
        ejac = ejac.max((jacobian_sqrtq(&shrunk)? - determinant(&m)).abs());
    }
    emit(
        out,
        &IdentitiesOut {
            n,
            trials: p.trials,
            seed: p.seed,
            max_abs_err_j: Num(ej),
            max_abs_err_k: Num(ek),
            max_abs_err_jacobian: Num(ejac),
        },
    )
}
