//! Command-line front end. Exit codes: 0 success, 1 numerical or
//! verification failure, 2 usage error.

pub mod csv;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::equilibria::{cartan_classify, origin_stability_certificate, CartanType, Stability, StabilityCertificate};
use crate::integrate::{drift_report, integrate, DriftReport, IntegratorConfig, Trajectory};
use crate::invariant_sets::{invariance_probe, rank_f, M1Point};
use crate::solutions::{
    homoclinic, homoclinic_derivative, periodic_derivative, periodic_solution, puncture_times, Branch,
    HomoclinicParams, PeriodicParams,
};
use crate::system::{conserved, vector_field, State5};
use crate::verify::{self, Level};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Grid points per closed-form orbit are capped to keep output files sane.
const MAX_GRID_POINTS: usize = 50_000_000;

#[derive(Debug, Parser)]
#[command(name = "maxwell-bloch", version, about = "Five-component Maxwell-Bloch system toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Integrate the system and report drift of H, I, C.
    Simulate(SimulateArgs),
    /// Cartan type and stability of the equilibrium (0,0,0,0,c).
    Classify(ClassifyArgs),
    /// Sample a closed-form homoclinic orbit.
    Homoclinic(HomoclinicArgs),
    /// Sample the closed-form periodic orbit.
    Periodic(PeriodicArgs),
    /// Rank of the Jacobian of (H, I, C) at a point.
    Rank(RankArgs),
    /// Integrate from a point of M1 and measure the distance to M1 ∪ M2.
    #[command(name = "invariant-probe", alias = "probe")]
    InvariantProbe(ProbeArgs),
    /// Run the seeded self-verification suites.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Rk4,
    Rk45,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
struct SimulateArgs {
    #[arg(long, value_parser = finite)]
    x1: f64,
    #[arg(long, value_parser = finite)]
    y1: f64,
    #[arg(long, value_parser = finite)]
    x2: f64,
    #[arg(long, value_parser = finite)]
    y2: f64,
    #[arg(long, value_parser = finite)]
    z: f64,
    #[arg(long, value_parser = non_negative, default_value_t = 10.0)]
    t_end: f64,
    #[arg(long, value_enum, default_value_t = MethodArg::Rk45)]
    method: MethodArg,
    /// Step size for rk4.
    #[arg(long, value_parser = positive, default_value_t = 1e-3)]
    dt: f64,
    /// Absolute and relative tolerance for rk45.
    #[arg(long, value_parser = positive, default_value_t = 1e-10)]
    tol: f64,
    /// Keep every n-th accepted step (the endpoints are always kept).
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    stride: u64,
    /// CSV destination; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
struct ClassifyArgs {
    #[arg(long, value_parser = finite)]
    c: f64,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
struct HomoclinicArgs {
    #[arg(long, value_parser = positive)]
    c: f64,
    #[arg(long, value_parser = finite, default_value_t = 0.0)]
    theta0: f64,
    #[arg(long, value_parser = parse_branch, default_value = "+", allow_hyphen_values = true)]
    sign: Branch,
    #[arg(long, value_parser = finite, default_value_t = -10.0)]
    t_min: f64,
    #[arg(long, value_parser = finite, default_value_t = 10.0)]
    t_max: f64,
    #[arg(long, value_parser = positive, default_value_t = 0.01)]
    dt: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
struct PeriodicArgs {
    #[arg(long, value_parser = finite, default_value_t = 0.0)]
    x1: f64,
    #[arg(long, value_parser = finite)]
    y1: f64,
    #[arg(long, value_parser = finite)]
    x2: f64,
    /// Defaults to one period.
    #[arg(long, value_parser = positive)]
    t_max: Option<f64>,
    #[arg(long, value_parser = positive, default_value_t = 0.01)]
    dt: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RankArgs {
    /// x1,y1,x2,y2,z
    #[arg(long, value_parser = point::<5>, allow_hyphen_values = true)]
    point: [f64; 5],
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
struct ProbeArgs {
    /// x1,y1,x2 with x2 ≠ 0
    #[arg(long, value_parser = point::<3>, allow_hyphen_values = true)]
    m1: [f64; 3],
    #[arg(long, value_parser = positive, default_value_t = 20.0)]
    t_end: f64,
    #[arg(long, value_parser = positive, default_value_t = 1e-10)]
    tol: f64,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Level::Quick)]
    level: Level,
}

fn finite(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|e| format!("{e}"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err("value must be finite".into())
    }
}

fn positive(s: &str) -> Result<f64, String> {
    let v = finite(s)?;
    if v > 0.0 {
        Ok(v)
    } else {
        Err("value must be > 0".into())
    }
}

fn non_negative(s: &str) -> Result<f64, String> {
    let v = finite(s)?;
    if v >= 0.0 {
        Ok(v)
    } else {
        Err("value must be ≥ 0".into())
    }
}

fn parse_branch(s: &str) -> Result<Branch, String> {
    s.parse::<Branch>().map_err(|e| e.to_string())
}

fn point<const N: usize>(s: &str) -> Result<[f64; N], String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != N {
        return Err(format!("expected {N} comma-separated numbers"));
    }
    let mut out = [0.0; N];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = finite(p)?;
    }
    Ok(out)
}

enum Failure {
    Usage(String),
    Numerical(String),
    Io(io::Error),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

type Outcome = std::result::Result<(), Failure>;

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{rendered}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{rendered}");
                    EXIT_USAGE
                }
            };
        }
    };
    let outcome = match cli.command {
        Command::Simulate(a) => cmd_simulate(&a, out),
        Command::Classify(a) => cmd_classify(&a, out),
        Command::Homoclinic(a) => cmd_homoclinic(&a, out),
        Command::Periodic(a) => cmd_periodic(&a, out),
        Command::Rank(a) => cmd_rank(&a, out),
        Command::InvariantProbe(a) => cmd_invariant_probe(&a, out),
        Command::Verify(a) => cmd_verify(&a, out),
    };
    let _ = out.flush();
    match outcome {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Numerical(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_FAILURE
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_FAILURE
        }
    }
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> io::Result<()> {
    let s = serde_json::to_string(value).map_err(io::Error::other)?;
    writeln!(out, "{s}")
}

/// Runs `body` against the `--out` file when given, otherwise against `out`.
fn with_csv_sink<R>(
    path: &Option<PathBuf>,
    out: &mut dyn Write,
    body: impl FnOnce(&mut dyn Write) -> io::Result<R>,
) -> io::Result<R> {
    match path {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p)?);
            let r = body(&mut w)?;
            w.flush()?;
            Ok(r)
        }
        None => body(out),
    }
}

fn write_trajectory(w: &mut dyn Write, traj: &Trajectory) -> io::Result<()> {
    csv::write_header(w)?;
    for (t, p) in traj.times.iter().zip(&traj.states) {
        csv::write_row(w, *t, p)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct SimulateError {
    error: String,
    t_reached: f64,
    samples: usize,
    drift: DriftReport,
}

fn cmd_simulate(a: &SimulateArgs, out: &mut dyn Write) -> Outcome {
    let p0 = State5::new(a.x1, a.y1, a.x2, a.y2, a.z);
    let cfg = match a.method {
        MethodArg::Rk4 => IntegratorConfig::rk4(a.dt, a.t_end),
        MethodArg::Rk45 => IntegratorConfig::rk45(a.tol, a.t_end),
    }
    .with_stride(a.stride as usize);
    cfg.validate().map_err(|e| Failure::Usage(e.to_string()))?;

    match integrate(&p0, &cfg) {
        Ok(traj) => {
            with_csv_sink(&a.out, out, |w| write_trajectory(w, &traj))?;
            let drift = drift_report(&traj).map_err(|e| Failure::Numerical(e.to_string()))?;
            write_json(out, &drift)?;
            Ok(())
        }
        Err(fail) => {
            let traj = fail.partial;
            with_csv_sink(&a.out, out, |w| write_trajectory(w, &traj))?;
            let record = SimulateError {
                error: fail.error.to_string(),
                t_reached: traj.last().map_or(0.0, |(t, _)| t),
                samples: traj.len(),
                drift: drift_report(&traj).unwrap_or_default(),
            };
            write_json(out, &record)?;
            Err(Failure::Numerical(fail.error.to_string()))
        }
    }
}

#[derive(Serialize)]
struct ClassifyReport {
    c: f64,
    kind: CartanType,
    alpha: Option<f64>,
    roots: Vec<[f64; 2]>,
    #[serde(rename = "A")]
    a: Option<f64>,
    #[serde(rename = "B")]
    b: Option<f64>,
    discriminant: Option<f64>,
    stable: Stability,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<StabilityCertificate>,
}

/// Half-width and resolution of the scan backing the degenerate stability claim.
const CERTIFICATE_BOX: f64 = 2.0;
const CERTIFICATE_GRID: usize = 21;

fn cmd_classify(a: &ClassifyArgs, out: &mut dyn Write) -> Outcome {
    let e = State5::new(0.0, 0.0, 0.0, 0.0, a.c);
    let r = cartan_classify(&e, a.c).map_err(|e| Failure::Numerical(e.to_string()))?;
    let mut stable = r.stable;
    let mut certificate = None;
    if r.kind == CartanType::Degenerate {
        let cert = origin_stability_certificate(CERTIFICATE_BOX, CERTIFICATE_GRID)
            .map_err(|e| Failure::Numerical(e.to_string()))?;
        if cert.unique_solution {
            stable = Stability::Stable;
        }
        certificate = Some(cert);
    }
    let report = ClassifyReport {
        c: a.c,
        kind: r.kind,
        alpha: r.alpha,
        roots: r.roots.iter().map(|z| [z.re, z.im]).collect(),
        a: r.a,
        b: r.b,
        discriminant: r.discriminant,
        stable,
        certificate,
    };
    write_json(out, &report)?;
    Ok(())
}

fn time_grid(t_min: f64, t_max: f64, dt: f64) -> std::result::Result<Vec<f64>, Failure> {
    if t_max < t_min {
        return Err(Failure::Usage("t-max must not be below t-min".into()));
    }
    let steps = ((t_max - t_min) / dt * (1.0 + 1e-12)).floor();
    if !(steps < MAX_GRID_POINTS as f64) {
        return Err(Failure::Usage(format!("grid exceeds {MAX_GRID_POINTS} points")));
    }
    Ok((0..=steps as usize).map(|k| t_min + k as f64 * dt).collect())
}

#[derive(Serialize)]
struct ResidualSummary {
    samples: usize,
    max_ode_residual: f64,
    max_conserved_deviation: f64,
    threshold: f64,
    passed: bool,
}

/// Samples a closed-form orbit, writes it as CSV, then appends the residual
/// summary. `expected` holds the conserved values the orbit should carry.
fn emit_closed_form(
    out: &mut dyn Write,
    path: &Option<PathBuf>,
    times: &[f64],
    orbit: impl Fn(f64) -> State5,
    derivative: impl Fn(f64) -> State5,
    expected: [f64; 3],
    threshold: f64,
) -> Outcome {
    let (ode, dev) = with_csv_sink(path, out, |w| {
        csv::write_header(w)?;
        let (mut ode, mut dev) = (0.0f64, 0.0f64);
        for &t in times {
            let p = orbit(t);
            csv::write_row(w, t, &p)?;
            let r = match vector_field(&p) {
                Ok(x) => (derivative(t) - x).norm_inf(),
                Err(_) => f64::INFINITY,
            };
            ode = ode.max(r);
            let q = conserved(&p);
            dev = dev
                .max((q.h - expected[0]).abs())
                .max((q.i - expected[1]).abs())
                .max((q.c - expected[2]).abs());
        }
        Ok((ode, dev))
    })?;
    let passed = ode < threshold && dev < threshold;
    let summary = ResidualSummary {
        samples: times.len(),
        max_ode_residual: ode,
        max_conserved_deviation: dev,
        threshold,
        passed,
    };
    write_json(out, &summary)?;
    if passed {
        Ok(())
    } else {
        Err(Failure::Numerical(format!(
            "closed-form residual {:.3e} exceeds {threshold:.3e}",
            ode.max(dev)
        )))
    }
}

fn cmd_homoclinic(a: &HomoclinicArgs, out: &mut dyn Write) -> Outcome {
    let params = HomoclinicParams::new(a.c, a.theta0, a.sign).map_err(|e| Failure::Usage(e.to_string()))?;
    let times = time_grid(a.t_min, a.t_max, a.dt)?;
    let c = params.c;
    emit_closed_form(
        out,
        &a.out,
        &times,
        |t| homoclinic(&params, t),
        |t| homoclinic_derivative(&params, t),
        [0.5 * c * c, 0.0, c],
        1e-10 * (1.0 + c * c),
    )
}

fn cmd_periodic(a: &PeriodicArgs, out: &mut dyn Write) -> Outcome {
    let params = PeriodicParams::new(a.x1, a.y1, a.x2).map_err(|e| Failure::Usage(e.to_string()))?;
    let t_max = a.t_max.unwrap_or_else(|| params.period());
    let times = time_grid(0.0, t_max, a.dt)?;
    let q0 = conserved(&params.initial_state());
    let w = params.omega();
    emit_closed_form(
        out,
        &a.out,
        &times,
        |t| periodic_solution(&params, t),
        |t| periodic_derivative(&params, t),
        [q0.h, q0.i, q0.c],
        1e-12 * (1.0 + w * w) * (1.0 + params.f1()),
    )
}

#[derive(Serialize)]
struct RankOutput {
    point: [f64; 5],
    singular_values: [f64; 3],
    rank: usize,
    tol_used: f64,
}

fn cmd_rank(a: &RankArgs, out: &mut dyn Write) -> Outcome {
    let r = rank_f(&State5::from_array(a.point));
    write_json(
        out,
        &RankOutput {
            point: a.point,
            singular_values: r.singular_values,
            rank: r.rank,
            tol_used: r.tol_used,
        },
    )?;
    Ok(())
}

/// Defect bound under which the probe counts the orbit as staying on `M1 ∪ M2`.
const PROBE_DEFECT_TOL: f64 = 1e-6;

#[derive(Serialize)]
struct ProbeOutput {
    max_distance_to_union: f64,
    puncture_count: usize,
    predicted_punctures: usize,
    samples: usize,
    consistent: bool,
}

fn cmd_invariant_probe(a: &ProbeArgs, out: &mut dyn Write) -> Outcome {
    let [x1, y1, x2] = a.m1;
    let q0 = M1Point::new(x1, y1, x2).map_err(|e| Failure::Usage(e.to_string()))?;
    let predicted = match PeriodicParams::new(x1, y1, x2) {
        Ok(p) => puncture_times(&p).times_in(0.0, a.t_end).len(),
        // With y1 = 0 the orbit is the equilibrium (x1, 0, x2, 0, 0): no crossings.
        Err(_) => 0,
    };
    let cfg = IntegratorConfig::rk45(a.tol, a.t_end);
    let r = invariance_probe(&q0, a.t_end, &cfg).map_err(|f| Failure::Numerical(f.error.to_string()))?;
    let consistent = r.max_distance_to_union < PROBE_DEFECT_TOL && r.puncture_count == predicted;
    write_json(
        out,
        &ProbeOutput {
            max_distance_to_union: r.max_distance_to_union,
            puncture_count: r.puncture_count,
            predicted_punctures: predicted,
            samples: r.samples,
            consistent,
        },
    )?;
    if consistent {
        Ok(())
    } else {
        Err(Failure::Numerical("orbit left M1 ∪ M2 or puncture count disagrees".into()))
    }
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> Outcome {
    let report = verify::run(a.seed, a.level);
    write_json(out, &report)?;
    if report.passed {
        Ok(())
    } else {
        let failed: Vec<&str> = report.suites.iter().filter(|s| !s.passed).map(|s| s.name.as_str()).collect();
        Err(Failure::Numerical(format!("failed suites: {}", failed.join(", "))))
    }
}
