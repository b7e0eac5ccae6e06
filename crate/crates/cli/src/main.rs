//! `osclab`: batch front end for the oscillatory-integral toolkit.
//!
//! Exit status is 0 on success, 1 on a domain error (the error name leads the
//! message on stderr) and 2 on a usage error.

mod config;

use std::f64::consts::PI;
use std::fmt::Display;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use osclab_core::center::{newton_center_with, CenterConfig};
use osclab_core::classify::{oscillation_type, reduce_to_normal_form, versality_check, NormalKind, QuarticForm};
use osclab_core::dyadic::{beta_cutoff, dilate, dyadic_integrate, partition_weights, CutoffProfile, DyadicConfig};
use osclab_core::poly::{taylor_data, Square};
use osclab_core::quad::{integrate_2d, Amplitude, Bump1};
use osclab_core::verify::{airy_sweep, geometric_grid, uniform_sweep, SweepConfig};
use osclab_core::Poly;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::SweepFile;

/// Tolerance used by `check-partition`.
const PARTITION_TOL: f64 = 1e-10;
/// Environment variable holding the worker count for `sweep`.
const THREADS_VAR: &str = "OSCLAB_THREADS";

#[derive(Parser)]
#[command(name = "osclab", version, about = "Oscillatory integrals with quartic phases")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Normal form, oscillation type and versality of a quartic form.
    Classify {
        /// Homogeneous quartic, e.g. "x1^4 + 3*x1^2*x2^2 + x2^4".
        poly: String,
    },
    /// Direct quadrature of `\int a(x) exp(i lambda f(x)) dx` with a radial bump `a`.
    Integrate {
        poly: String,
        #[arg(long, allow_hyphen_values = true)]
        lambda: f64,
        #[arg(long, default_value_t = 0.5)]
        amp_radius: f64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Dyadic ring decomposition; one CSV row per piece.
    Decompose {
        /// Phase whose degree-4 part is the principal form.
        poly: String,
        #[arg(long)]
        lambda: f64,
        #[arg(long, default_value_t = 0.5)]
        amp_radius: f64,
        #[arg(long = "box", default_value_t = 0.5)]
        box_half_width: f64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Expand at the origin instead of the centered point.
        #[arg(long)]
        no_center: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lambda sweep over random deformations of a quartic form.
    Sweep {
        /// Flat TOML file; flags override its keys.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Principal quartic form (default x1^4 + x1^2*x2^2 + x2^4).
        #[arg(long)]
        f_pi: Option<String>,
        /// Fixed smooth addition.
        #[arg(long, allow_hyphen_values = true)]
        g: Option<String>,
        #[arg(long)]
        lambda_min: Option<f64>,
        #[arg(long)]
        lambda_max: Option<f64>,
        #[arg(long)]
        lambda_points: Option<usize>,
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long)]
        n_pert: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        amp_radius: Option<f64>,
        #[arg(long = "box")]
        box_half_width: Option<f64>,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        no_cross_check: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Airy family `x^3 + sigma x` against the envelope.
    Airy {
        #[arg(long, default_value_t = 10.0)]
        lambda_min: f64,
        #[arg(long, default_value_t = 1e4)]
        lambda_max: f64,
        #[arg(long, default_value_t = 7)]
        lambda_points: usize,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "-1,-0.3,0,0.3,1")]
        sigma: Vec<f64>,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Largest deviation of the dyadic partition sum at random points.
    CheckPartition {
        #[arg(long, default_value_t = 1000)]
        points: usize,
        #[arg(long = "K", default_value_t = 20)]
        k: i32,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Shift that removes the mixed cubic Taylor coefficients.
    Center {
        poly: String,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 50)]
        max_iter: usize,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Domain(String),
}

fn domain(e: impl Display) -> Failure {
    Failure::Domain(e.to_string())
}

fn parse_poly(text: &str) -> Result<Poly, Failure> {
    text.parse().map_err(|e| Failure::Usage(format!("invalid polynomial {text:?}: {e}")))
}

fn amplitude(radius: f64) -> Result<Amplitude<f64>, Failure> {
    if !(radius > 0.0) {
        return Err(Failure::Usage(format!("--amp-radius must be positive, got {radius}")));
    }
    Ok(Amplitude::bump([0.0, 0.0], radius))
}

/// Destination for tabular output; `None` means stdout.
fn sink(out: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    match out {
        Some(path) => {
            let f = File::create(path).map_err(|e| Failure::Usage(format!("--out {}: {e}", path.display())))?;
            Ok(Box::new(BufWriter::new(f)))
        }
        None => Ok(Box::new(io::stdout().lock())),
    }
}

/// Key=value summary, kept off stdout when stdout carries the CSV.
fn summary(csv_on_stdout: bool, text: &str) {
    if csv_on_stdout {
        eprintln!("{text}");
    } else {
        println!("{text}");
    }
}

fn io_failure(e: impl Display) -> Failure {
    Failure::Usage(format!("cannot write output: {e}"))
}

fn thread_pool(sweep: bool) -> Result<(), Failure> {
    let threads = match std::env::var(THREADS_VAR) {
        Ok(v) if sweep => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| Failure::Usage(format!("{THREADS_VAR} must be a positive integer, got {v:?}")))?,
        _ if sweep => 0,
        _ => 1,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Usage(e.to_string()))
}

fn classify(text: &str) -> Result<(), Failure> {
    let f = QuarticForm::from_poly(&parse_poly(text)?).map_err(domain)?;
    let nf = reduce_to_normal_form(&f, 1e-9).map_err(domain)?;
    let ty = oscillation_type(&nf);
    let v = versality_check(&nf.kind.representative());
    let mu = match nf.kind {
        NormalKind::Mu(mu) => format!(" mu={mu}"),
        _ => String::new(),
    };
    let m = nf.transform;
    println!(
        "kind={}{mu} beta={} p={} scale={} transform={},{},{},{} mismatch={:e} versal={} dim_intersection={}",
        nf.kind.name(),
        ty.beta,
        ty.p,
        nf.scale,
        m[0][0],
        m[0][1],
        m[1][0],
        m[1][1],
        nf.mismatch(&f),
        v.is_versal,
        v.dim_intersection
    );
    Ok(())
}

fn integrate(text: &str, lambda: f64, amp_radius: f64, tol: f64) -> Result<(), Failure> {
    let f = parse_poly(text)?;
    let r = integrate_2d(&f, &amplitude(amp_radius)?, lambda, tol).map_err(domain)?;
    println!(
        "lambda={lambda} re={} im={} abs={} error_estimate={:e} panels={}",
        r.value.re,
        r.value.im,
        r.value.norm(),
        r.abs_error_estimate,
        r.panels
    );
    Ok(())
}

#[derive(Serialize)]
struct RingRow {
    k: i32,
    regime: &'static str,
    abs_jk: f64,
    scaled: f64,
}

#[allow(clippy::too_many_arguments)]
fn decompose(
    text: &str,
    lambda: f64,
    amp_radius: f64,
    box_half_width: f64,
    tol: f64,
    no_center: bool,
    out: &Option<PathBuf>,
) -> Result<(), Failure> {
    let phase = parse_poly(text)?;
    let quartic = phase.homogeneous_part(4);
    let f = QuarticForm::from_poly(&quartic).map_err(domain)?;
    let rest = &phase - &quartic;
    let square = Square::new(box_half_width)
        .ok_or_else(|| Failure::Usage(format!("--box must be positive, got {box_half_width}")))?;
    let z = if no_center {
        [0.0, 0.0]
    } else {
        newton_center_with(&phase, [0.0, 0.0], &CenterConfig::default()).map_err(domain)?.z
    };
    let t = taylor_data(&quartic, Arc::new(rest), z, &square).map_err(domain)?;
    let cfg = DyadicConfig {
        tol,
        ..DyadicConfig::default()
    };
    let d = dyadic_integrate(&t, &f, &amplitude(amp_radius)?, lambda, &cfg).map_err(domain)?;

    let mut w = csv::Writer::from_writer(sink(out)?);
    let pieces = std::iter::once((d.nu0, d.j0)).chain(d.rings.iter().copied());
    for (k, v) in pieces {
        w.serialize(RingRow {
            k,
            regime: d.regime.name(),
            abs_jk: v.norm(),
            scaled: lambda.sqrt() * v.norm(),
        })
        .map_err(io_failure)?;
    }
    w.flush().map_err(io_failure)?;
    let total = d.total();
    summary(
        out.is_none(),
        &format!(
            "regime={} rho={:e} base={:e} z={},{} k_max={} complete={} total_re={} total_im={} total_abs={} error_estimate={:e}",
            d.regime.name(),
            d.rho,
            d.base,
            z[0],
            z[1],
            d.k_max,
            d.complete,
            total.re,
            total.im,
            total.norm(),
            d.abs_error_estimate
        ),
    );
    Ok(())
}

struct SweepFlags {
    config: Option<PathBuf>,
    f_pi: Option<String>,
    g: Option<String>,
    lambda_min: Option<f64>,
    lambda_max: Option<f64>,
    lambda_points: Option<usize>,
    epsilon: Option<f64>,
    n_pert: Option<usize>,
    seed: Option<u64>,
    amp_radius: Option<f64>,
    box_half_width: Option<f64>,
    tol: Option<f64>,
    no_cross_check: bool,
}

fn sweep_config(flags: SweepFlags) -> Result<SweepConfig, Failure> {
    let file = match &flags.config {
        Some(path) => SweepFile::load(path).map_err(Failure::Usage)?,
        None => SweepFile::default(),
    };
    let mut cfg = SweepConfig::default();
    if let Some(text) = flags.f_pi.or(file.f_pi) {
        cfg.f_pi = QuarticForm::from_poly(&parse_poly(&text)?).map_err(domain)?;
    }
    if let Some(text) = flags.g.or(file.g) {
        cfg.g = Some(parse_poly(&text)?);
    }
    cfg.epsilon = flags.epsilon.or(file.epsilon).unwrap_or(cfg.epsilon);
    cfg.n_perturbations = flags.n_pert.or(file.n_perturbations).unwrap_or(cfg.n_perturbations);
    cfg.seed = flags.seed.or(file.seed).unwrap_or(cfg.seed);
    cfg.lambda_min = flags.lambda_min.or(file.lambda_min).unwrap_or(cfg.lambda_min);
    cfg.lambda_max = flags.lambda_max.or(file.lambda_max).unwrap_or(cfg.lambda_max);
    cfg.lambda_points = flags.lambda_points.or(file.lambda_points).unwrap_or(cfg.lambda_points);
    cfg.amp_radius = flags.amp_radius.or(file.amp_radius).unwrap_or(cfg.amp_radius);
    cfg.box_half_width = flags.box_half_width.or(file.box_half_width).unwrap_or(cfg.box_half_width);
    cfg.recenter = file.recenter.unwrap_or(cfg.recenter);
    cfg.cross_check = !flags.no_cross_check && file.cross_check.unwrap_or(cfg.cross_check);
    cfg.dyadic.tol = flags.tol.or(file.tol).unwrap_or(cfg.dyadic.tol);
    cfg.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    Ok(cfg)
}

#[derive(Serialize)]
struct SweepCsvRow {
    lambda: f64,
    pert_id: usize,
    abs_j: f64,
    normalized: f64,
}

fn sweep(flags: SweepFlags, out: &Option<PathBuf>) -> Result<(), Failure> {
    let cfg = sweep_config(flags)?;
    let r = uniform_sweep(&cfg).map_err(domain)?;
    let mut w = csv::Writer::from_writer(sink(out)?);
    for row in &r.rows {
        w.serialize(SweepCsvRow {
            lambda: row.lambda,
            pert_id: row.pert_id,
            abs_j: row.abs_j,
            normalized: row.normalized,
        })
        .map_err(io_failure)?;
    }
    w.flush().map_err(io_failure)?;

    let mut lines = Vec::new();
    match &r.fit {
        Ok(fit) => {
            lines.push(format!("beta_hat={}", fit.beta_hat));
            lines.push(format!("p_hat={}", fit.p_hat));
            lines.push(format!("c_hat={}", fit.c_hat));
            lines.push(format!("residual_p0={:e}", fit.residual_p0));
            lines.push(format!("residual_p1={:e}", fit.residual_p1));
        }
        Err(e) => lines.push(format!("fit_error={e}")),
    }
    lines.push(format!("uniformity_ratio={}", r.uniformity_ratio()));
    lines.push(format!("failed_rows={}", r.failed));
    if !r.cross_checks.is_empty() {
        lines.push(format!("max_cross_check={:e}", r.max_cross_check()));
    }
    for row in r.rows.iter().filter(|row| row.failure.is_some()) {
        lines.push(format!(
            "failure lambda={} pert_id={}: {}",
            row.lambda,
            row.pert_id,
            row.failure.as_deref().unwrap_or_default()
        ));
    }
    summary(out.is_none(), &lines.join("\n"));
    Ok(())
}

#[derive(Serialize)]
struct AiryCsvRow {
    lambda: f64,
    sigma: f64,
    abs_j: f64,
    envelope: f64,
    ratio: f64,
}

fn airy(lambda_min: f64, lambda_max: f64, points: usize, sigmas: &[f64], tol: f64, out: &Option<PathBuf>) -> Result<(), Failure> {
    if !(lambda_min > 0.0) || !(lambda_max >= lambda_min) || points == 0 {
        return Err(Failure::Usage("need 0 < --lambda-min <= --lambda-max and --lambda-points >= 1".into()));
    }
    let lambdas = geometric_grid(lambda_min, lambda_max, points);
    let s = airy_sweep(&lambdas, sigmas, &Bump1::new(0.35, 0.65), tol).map_err(domain)?;
    let mut w = csv::Writer::from_writer(sink(out)?);
    for p in &s.points {
        w.serialize(AiryCsvRow {
            lambda: p.lambda,
            sigma: p.sigma,
            abs_j: p.abs_j,
            envelope: p.envelope,
            ratio: p.ratio,
        })
        .map_err(io_failure)?;
    }
    w.flush().map_err(io_failure)?;
    summary(out.is_none(), &format!("c={} sanity_ok={}", s.c, s.sanity_ok()));
    Ok(())
}

fn check_partition(points: usize, k: i32, seed: u64) -> Result<(), Failure> {
    let nu0 = DyadicConfig::default().nu0;
    if k < nu0 {
        return Err(Failure::Usage(format!("--K must be at least {nu0}, got {k}")));
    }
    let profile = CutoffProfile;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut worst, mut inside) = (0.0f64, 0usize);
    for _ in 0..points {
        let r = 10f64.powf(rng.gen_range(-3.0..2.0));
        let a = rng.gen_range(0.0..2.0 * PI);
        let x = [r * a.cos(), r * a.sin()];
        let sum: f64 = partition_weights(&profile, x, nu0, k).iter().sum();
        let scaled = dilate(2f64.powi(-k), x);
        worst = worst.max((sum - beta_cutoff(&profile, scaled)).abs());
        if scaled[0].hypot(scaled[1]) <= 1.0 {
            inside += 1;
            worst = worst.max((sum - 1.0).abs());
        }
    }
    println!("max_deviation={worst:e} points={points} inside={inside} tol={PARTITION_TOL:e}");
    if worst <= PARTITION_TOL {
        Ok(())
    } else {
        Err(Failure::Domain(format!("PartitionDeviation: {worst:e} exceeds {PARTITION_TOL:e}")))
    }
}

fn center(text: &str, tol: f64, max_iter: usize) -> Result<(), Failure> {
    let f = parse_poly(text)?;
    let cfg = CenterConfig {
        tol,
        max_iter,
        ..CenterConfig::default()
    };
    let c = newton_center_with(&f, [0.0, 0.0], &cfg).map_err(domain)?;
    println!("z1={} z2={} iterations={} residual={:e}", c.z[0], c.z[1], c.iterations, c.residual);
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    thread_pool(matches!(cli.command, Command::Sweep { .. }))?;
    match cli.command {
        Command::Classify { poly } => classify(&poly),
        Command::Integrate {
            poly,
            lambda,
            amp_radius,
            tol,
        } => integrate(&poly, lambda, amp_radius, tol),
        Command::Decompose {
            poly,
            lambda,
            amp_radius,
            box_half_width,
            tol,
            no_center,
            out,
        } => decompose(&poly, lambda, amp_radius, box_half_width, tol, no_center, &out),
        Command::Sweep {
            config,
            f_pi,
            g,
            lambda_min,
            lambda_max,
            lambda_points,
            epsilon,
            n_pert,
            seed,
            amp_radius,
            box_half_width,
            tol,
            no_cross_check,
            out,
        } => {
            let flags = SweepFlags {
                config,
                f_pi,
                g,
                lambda_min,
                lambda_max,
                lambda_points,
                epsilon,
                n_pert,
                seed,
                amp_radius,
                box_half_width,
                tol,
                no_cross_check,
            };
            sweep(flags, &out)
        }
        Command::Airy {
            lambda_min,
            lambda_max,
            lambda_points,
            sigma,
            tol,
            out,
        } => airy(lambda_min, lambda_max, lambda_points, &sigma, tol, &out),
        Command::CheckPartition { points, k, seed } => check_partition(points, k, seed),
        Command::Center { poly, tol, max_iter } => center(&poly, tol, max_iter),
    }
}

fn main() -> ExitCode {
    let cli = Cli::try_parse().unwrap_or_else(|e| e.exit());
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
