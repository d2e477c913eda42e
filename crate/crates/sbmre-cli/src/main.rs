//! `sbmre` — simulate scaled Brownian motion with a (random) anomalous
//! diffusion exponent, evaluate its analytic characteristics and asymptotic
//! regimes, and validate Monte Carlo ensembles against the formulas.
//!
//! Every run writes plot-ready CSV plus a `manifest.json` echoing the full
//! command; re-running the echoed command reproduces the outputs byte for
//! byte regardless of `--threads`.

// Same guard convention as the library: `!(x > 0.0)` also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod manifest;
mod ranges;

use clap::builder::PossibleValuesParser;
use clap::{Parser, Subcommand};
use manifest::RunManifest;
use ranges::RangeSpec;
use sbmre::estimators::{CurvePoint, CurveSeries};
use sbmre::numerics::QuadratureSpec;
use sbmre::validation;
use sbmre::{analytics, asymptotics, sim, Error, ExponentLaw, TimeGrid};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

const CHARACTERISTICS: &[&str] = &[
    "pdf", "msd", "qmoment", "autocov", "etamsd", "eb", "hitting",
];
const ASYMPTOTICS: &[&str] = &[
    "sbm-etamsd",
    "sbm-eb",
    "c-alpha",
    "tp-msd",
    "tp-etamsd",
    "tp-eb",
    "tp-eb-limit",
    "beta-msd",
    "hitting-tail",
];

const DEFAULT_SEED: u64 = 7;

#[derive(Parser)]
#[command(
    name = "sbmre",
    version,
    about = "Scaled Brownian motion with random anomalous diffusion exponent: \
             simulation, analytic characteristics, asymptotics, and Monte Carlo validation",
    after_help = "Law syntax:   degenerate:alpha=0.7 | twopoint:a1=0.5,a2=1.5,p=0.5 | \
                  beta:a1=0.5,a2=1.5,gamma=0.3,beta=0.7\n\
                  Grid syntax:  linear:T=10,N=1000 | log:tmin=0.01,T=1e4,N=1200\n\
                  Range syntax: lo:hi:count (linear), lo:hi:countL (log-spaced), or a number\n\
                  Environment:  SBMRE_SEED overrides the default seed, SBMRE_THREADS the thread cap"
)]
struct Cli {
    /// Base RNG seed (integer, or 'random'; default 7, env SBMRE_SEED)
    #[arg(long, global = true)]
    seed: Option<String>,

    /// Worker thread cap (default: available cores, env SBMRE_THREADS)
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Output directory for CSV files and the manifest
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,

    /// Relative tolerance for quadrature-backed evaluations
    #[arg(long, global = true, default_value_t = 1e-9)]
    rel_tol: f64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate an ensemble and write it as columnar CSV
    Simulate {
        /// Exponent law specification
        #[arg(long)]
        law: String,
        /// Sampling grid specification
        #[arg(long)]
        grid: String,
        /// Number of trajectories
        #[arg(long)]
        n: usize,
    },
    /// Evaluate an exact characteristic over a grid of abscissas
    Characteristic {
        /// Which characteristic to evaluate
        #[arg(value_parser = PossibleValuesParser::new(CHARACTERISTICS))]
        name: String,
        /// Exponent law specification
        #[arg(long)]
        law: String,
        /// Time value or range (pdf wants a single value here)
        #[arg(long)]
        t: Option<String>,
        /// Position range for pdf, e.g. -10:10:400
        #[arg(long, allow_hyphen_values = true)]
        x: Option<String>,
        /// Moment order q for qmoment (default 2)
        #[arg(long)]
        q: Option<f64>,
        /// First time argument for autocov
        #[arg(long)]
        s: Option<f64>,
        /// Lag value or range for etamsd/eb
        #[arg(long)]
        tau: Option<String>,
        /// Horizon T for etamsd/eb
        #[arg(long = "T")]
        horizon: Option<f64>,
        /// Barrier position for hitting
        #[arg(long)]
        b: Option<f64>,
    },
    /// Evaluate a closed-form asymptotic regime (with regime annotations)
    Asymptotic {
        /// Which asymptotic to evaluate
        #[arg(value_parser = PossibleValuesParser::new(ASYMPTOTICS))]
        name: String,
        /// Fixed SBM exponent for sbm-* and c-alpha
        #[arg(long)]
        alpha: Option<f64>,
        /// Exponent law specification for tp-*/beta-*/hitting-tail
        #[arg(long)]
        law: Option<String>,
        /// Time value or range
        #[arg(long)]
        t: Option<String>,
        /// Lag value or range
        #[arg(long)]
        tau: Option<String>,
        /// Horizon T (value, or range for tp-eb)
        #[arg(long = "T")]
        horizon: Option<String>,
        /// Two-point weight for tp-eb-limit
        #[arg(long)]
        p: Option<f64>,
        /// short or long (tp-msd, beta-msd)
        #[arg(long, value_parser = PossibleValuesParser::new(["short", "long"]))]
        regime: Option<String>,
        /// leading or taylor3 (tp-etamsd)
        #[arg(long, value_parser = PossibleValuesParser::new(["leading", "taylor3"]))]
        order: Option<String>,
    },
    /// Run Monte-Carlo-vs-analytic validation scenarios
    Validate {
        /// Scenario name, or 'all'
        #[arg(value_parser = scenario_parser())]
        scenario: String,
        /// Reduced trajectory counts (tolerances widen by the matching √n factor)
        #[arg(long)]
        quick: bool,
    },
}

fn scenario_parser() -> PossibleValuesParser {
    let mut names: Vec<&'static str> = vec!["all"];
    names.extend_from_slice(validation::SCENARIO_NAMES);
    PossibleValuesParser::new(names)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::Quadrature(_) | Error::Numerics(_) => ExitCode::from(3),
                Error::Parameter(_) | Error::Domain(_) => ExitCode::from(2),
            }
        }
    }
}

fn run(cli: Cli) -> sbmre::Result<ExitCode> {
    let started = Instant::now();
    let seed = resolve_seed(cli.seed.as_deref())?;
    let threads = cli.threads.or_else(|| {
        std::env::var("SBMRE_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    if let Some(n) = threads {
        if n == 0 {
            return Err(Error::Parameter("--threads must be at least 1".into()));
        }
        // Ignore the error if a pool already exists (e.g. in-process tests).
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    if !(cli.rel_tol > 0.0) {
        return Err(Error::Parameter("--rel-tol must be positive".into()));
    }
    std::fs::create_dir_all(&cli.out)
        .map_err(|e| Error::Parameter(format!("cannot create --out directory: {e}")))?;

    let spec = QuadratureSpec::default().with_rel_tol(cli.rel_tol);
    let mut manifest = RunManifest::new(seed, cli.rel_tol, threads);

    let exit = match &cli.command {
        Command::Simulate { law, grid, n } => {
            cmd_simulate(&cli.out, law, grid, *n, seed, &mut manifest)?
        }
        Command::Characteristic {
            name,
            law,
            t,
            x,
            q,
            s,
            tau,
            horizon,
            b,
        } => cmd_characteristic(
            &cli.out,
            name,
            law,
            t.as_deref(),
            x.as_deref(),
            *q,
            *s,
            tau.as_deref(),
            *horizon,
            *b,
            &spec,
            &mut manifest,
        )?,
        Command::Asymptotic {
            name,
            alpha,
            law,
            t,
            tau,
            horizon,
            p,
            regime,
            order,
        } => cmd_asymptotic(
            &cli.out,
            name,
            *alpha,
            law.as_deref(),
            t.as_deref(),
            tau.as_deref(),
            horizon.as_deref(),
            *p,
            regime.as_deref(),
            order.as_deref(),
            &spec,
            &mut manifest,
        )?,
        Command::Validate { scenario, quick } => {
            cmd_validate(&cli.out, scenario, *quick, seed, &mut manifest)?
        }
    };

    manifest.wall_clock_ms = started.elapsed().as_millis();
    manifest
        .write(&cli.out)
        .map_err(|e| Error::Parameter(format!("cannot write manifest: {e}")))?;
    Ok(exit)
}

fn resolve_seed(flag: Option<&str>) -> sbmre::Result<u64> {
    let text = match flag {
        Some(t) => t.to_string(),
        None => match std::env::var("SBMRE_SEED") {
            Ok(v) => v,
            Err(_) => return Ok(DEFAULT_SEED),
        },
    };
    if text == "random" {
        return Ok(rand::random::<u64>());
    }
    text.parse::<u64>().map_err(|_| {
        Error::Parameter(format!(
            "--seed must be an integer or 'random', got '{text}'"
        ))
    })
}

fn parse_grid(text: &str) -> sbmre::Result<TimeGrid> {
    let (kind, rest) = text
        .split_once(':')
        .ok_or_else(|| Error::Parameter(format!("grid spec '{text}' is missing ':'")))?;
    let mut kv = std::collections::BTreeMap::new();
    for pair in rest.split(',') {
        let (k, v) = pair.split_once('=').ok_or_else(|| {
            Error::Parameter(format!("grid spec field '{pair}' is not key=value"))
        })?;
        kv.insert(k.trim().to_string(), v.to_string());
    }
    let take_f64 = |kv: &mut std::collections::BTreeMap<String, String>, key: &str| {
        kv.remove(key)
            .ok_or_else(|| Error::Parameter(format!("grid spec is missing field '{key}'")))?
            .parse::<f64>()
            .map_err(|_| Error::Parameter(format!("grid spec field '{key}' is not a number")))
    };
    let take_usize = |kv: &mut std::collections::BTreeMap<String, String>, key: &str| {
        kv.remove(key)
            .ok_or_else(|| Error::Parameter(format!("grid spec is missing field '{key}'")))?
            .parse::<usize>()
            .map_err(|_| Error::Parameter(format!("grid spec field '{key}' is not an integer")))
    };
    let grid = match kind.trim() {
        "linear" => {
            let horizon = take_f64(&mut kv, "T")?;
            let steps = take_usize(&mut kv, "N")?;
            TimeGrid::linear(horizon, steps)?
        }
        "log" | "logarithmic" => {
            let t_min = take_f64(&mut kv, "tmin")?;
            let horizon = take_f64(&mut kv, "T")?;
            let points = take_usize(&mut kv, "N")?;
            TimeGrid::logarithmic(t_min, horizon, points)?
        }
        other => {
            return Err(Error::Parameter(format!(
                "unknown grid kind '{other}'; expected linear or log"
            )))
        }
    };
    if let Some(extra) = kv.keys().next() {
        return Err(Error::Parameter(format!(
            "grid spec has unknown field '{extra}'"
        )));
    }
    Ok(grid)
}

fn cmd_simulate(
    out: &Path,
    law_text: &str,
    grid_text: &str,
    n: usize,
    seed: u64,
    manifest: &mut RunManifest,
) -> sbmre::Result<ExitCode> {
    if n < 1 {
        return Err(Error::Parameter("--n must be at least 1".into()));
    }
    let law: ExponentLaw = law_text.parse()?;
    let grid = Arc::new(parse_grid(grid_text)?);
    let ensemble = sim::simulate_ensemble(&law, &grid, n, seed)?;
    let path = out.join("ensemble.csv");
    let mut file = std::io::BufWriter::new(
        std::fs::File::create(&path)
            .map_err(|e| Error::Parameter(format!("cannot write {}: {e}", path.display())))?,
    );
    sim::write_ensemble_csv(&ensemble, &mut file)
        .map_err(|e| Error::Parameter(format!("write failed: {e}")))?;
    manifest.law = Some(law.to_string());
    manifest.grid = Some(grid_text.to_string());
    manifest.n_traj = Some(n);
    manifest.files.push("ensemble.csv".into());
    println!("wrote {} ({} trajectories)", path.display(), n);
    Ok(ExitCode::SUCCESS)
}

fn require<T>(value: Option<T>, flag: &str, ctx: &str) -> sbmre::Result<T> {
    value.ok_or_else(|| Error::Parameter(format!("{ctx} requires {flag}")))
}

fn scalar(range: &str, flag: &str) -> sbmre::Result<f64> {
    match RangeSpec::parse(range)? {
        RangeSpec::Scalar(v) => Ok(v),
        _ => Err(Error::Parameter(format!(
            "{flag} must be a single value here"
        ))),
    }
}

fn write_curve(
    out: &Path,
    stem: &str,
    curve: &CurveSeries,
    comments: &[String],
) -> sbmre::Result<String> {
    let name = format!("{stem}.csv");
    let path = out.join(&name);
    let mut file = std::io::BufWriter::new(
        std::fs::File::create(&path)
            .map_err(|e| Error::Parameter(format!("cannot write {}: {e}", path.display())))?,
    );
    curve
        .write_csv_with_comments(&mut file, comments)
        .map_err(|e| Error::Parameter(format!("write failed: {e}")))?;
    println!("wrote {}", path.display());
    Ok(name)
}

fn curve_from<F: FnMut(f64) -> sbmre::Result<f64>>(
    label: String,
    xs: &[f64],
    mut f: F,
) -> sbmre::Result<CurveSeries> {
    let points = xs
        .iter()
        .map(|&x| {
            Ok(CurvePoint {
                x,
                value: f(x)?,
                stderr: None,
            })
        })
        .collect::<sbmre::Result<Vec<_>>>()?;
    CurveSeries::new(label, points)
}

#[allow(clippy::too_many_arguments)]
fn cmd_characteristic(
    out: &Path,
    name: &str,
    law_text: &str,
    t: Option<&str>,
    x: Option<&str>,
    q: Option<f64>,
    s: Option<f64>,
    tau: Option<&str>,
    horizon: Option<f64>,
    b: Option<f64>,
    spec: &QuadratureSpec,
    manifest: &mut RunManifest,
) -> sbmre::Result<ExitCode> {
    let law: ExponentLaw = law_text.parse()?;
    let ctx = format!("characteristic {name}");
    let curve = match name {
        "pdf" => {
            let t = scalar(require(t, "--t", &ctx)?, "--t")?;
            let xs = RangeSpec::parse(require(x, "--x", &ctx)?)?.values();
            curve_from(format!("pdf {law} t={t}"), &xs, |x| {
                analytics::pdf(&law, x, t, spec)
            })?
        }
        "msd" => {
            let ts = RangeSpec::parse(require(t, "--t", &ctx)?)?.values();
            curve_from(format!("msd {law}"), &ts, |t| law.mean_power(t))?
        }
        "qmoment" => {
            let order = q.unwrap_or(2.0);
            let ts = RangeSpec::parse(require(t, "--t", &ctx)?)?.values();
            curve_from(format!("qmoment {law} q={order}"), &ts, |t| {
                analytics::abs_moment(&law, order, t)
            })?
        }
        "autocov" => {
            let s = require(s, "--s", &ctx)?;
            let ts = RangeSpec::parse(require(t, "--t", &ctx)?)?.values();
            curve_from(format!("autocov {law} s={s}"), &ts, |t| {
                analytics::autocovariance(&law, s, t)
            })?
        }
        "etamsd" => {
            let horizon = require(horizon, "--T", &ctx)?;
            let taus = RangeSpec::parse(require(tau, "--tau", &ctx)?)?.values();
            curve_from(format!("etamsd {law} T={horizon}"), &taus, |tau| {
                analytics::etamsd(&law, tau, horizon, spec)
            })?
        }
        "eb" => {
            let horizon = require(horizon, "--T", &ctx)?;
            let taus = RangeSpec::parse(require(tau, "--tau", &ctx)?)?.values();
            curve_from(format!("eb {law} T={horizon}"), &taus, |tau| {
                Ok(analytics::eb(&law, tau, horizon, spec)?.eb)
            })?
        }
        "hitting" => {
            let b = require(b, "--b", &ctx)?;
            let ts = RangeSpec::parse(require(t, "--t", &ctx)?)?.values();
            curve_from(format!("hitting {law} b={b}"), &ts, |t| {
                analytics::hitting_pdf(&law, b, t, spec)
            })?
        }
        other => unreachable!("clap filtered characteristic '{other}'"),
    };
    let file = write_curve(out, &format!("characteristic_{name}"), &curve, &[])?;
    manifest.law = Some(law.to_string());
    manifest.files.push(file);
    Ok(ExitCode::SUCCESS)
}

fn regime_kind(text: &str) -> asymptotics::RegimeKind {
    match text {
        "short" => asymptotics::RegimeKind::ShortTime,
        _ => asymptotics::RegimeKind::LongTime,
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_asymptotic(
    out: &Path,
    name: &str,
    alpha: Option<f64>,
    law_text: Option<&str>,
    t: Option<&str>,
    tau: Option<&str>,
    horizon: Option<&str>,
    p: Option<f64>,
    regime: Option<&str>,
    order: Option<&str>,
    spec: &QuadratureSpec,
    manifest: &mut RunManifest,
) -> sbmre::Result<ExitCode> {
    let ctx = format!("asymptotic {name}");
    let law: Option<ExponentLaw> = match law_text {
        Some(text) => Some(text.parse()?),
        None => None,
    };
    let mut comments: Vec<String> = Vec::new();
    let mut warnings: Vec<String> = Vec::new();
    let curve = match name {
        "sbm-etamsd" => {
            let alpha = require(alpha, "--alpha", &ctx)?;
            let horizon = scalar(require(horizon, "--T", &ctx)?, "--T")?;
            let taus = RangeSpec::parse(require(tau, "--tau", &ctx)?)?.values();
            comments.push("regime: small lag ratio (tau/T < 0.1)".into());
            curve_from(
                format!("sbm-etamsd alpha={alpha} T={horizon}"),
                &taus,
                |tau| {
                    let v = asymptotics::sbm_etamsd_asymp(alpha, tau, horizon);
                    if let Some(w) = v.warning {
                        warnings.push(w);
                    }
                    Ok(v.value)
                },
            )?
        }
        "sbm-eb" => {
            let alpha = require(alpha, "--alpha", &ctx)?;
            let horizon = scalar(require(horizon, "--T", &ctx)?, "--T")?;
            let taus = RangeSpec::parse(require(tau, "--tau", &ctx)?)?.values();
            comments.push("regime: small lag ratio (tau/T < 0.1)".into());
            let fit = asymptotics::eb_prefactor_fit(alpha, spec)?;
            comments.push(format!(
                "prefactor cross-check: printed {:.6e}, fitted from exact EB {:.6e}, ratio {:.4}",
                fit.printed, fit.fitted, fit.ratio
            ));
            curve_from(format!("sbm-eb alpha={alpha} T={horizon}"), &taus, |tau| {
                let v = asymptotics::sbm_eb_asymp(alpha, tau, horizon)?;
                if let Some(w) = v.warning {
                    warnings.push(w);
                }
                Ok(v.value)
            })?
        }
        "c-alpha" => {
            let alpha = require(alpha, "--alpha", &ctx)?;
            let value = asymptotics::c_alpha(alpha)?;
            let fit = asymptotics::eb_prefactor_fit(alpha, spec)?;
            comments.push(format!(
                "prefactor cross-check: printed {:.6e}, fitted from exact EB {:.6e}, ratio {:.4}",
                fit.printed, fit.fitted, fit.ratio
            ));
            CurveSeries::new(
                "c-alpha".to_string(),
                vec![CurvePoint {
                    x: alpha,
                    value,
                    stderr: None,
                }],
            )?
        }
        "tp-msd" => {
            let law = require(law.clone(), "--law", &ctx)?;
            let regime = regime_kind(require(regime, "--regime", &ctx)?);
            let ts = RangeSpec::parse(require(t, "--t", &ctx)?)?.values();
            comments.push(format!("regime: {regime:?}"));
            curve_from(format!("tp-msd {law} {regime:?}"), &ts, |t| {
                asymptotics::tp_msd_asymp(&law, t, regime)
            })?
        }
        "tp-etamsd" => {
            let law = require(law.clone(), "--law", &ctx)?;
            let horizon = scalar(require(horizon, "--T", &ctx)?, "--T")?;
            let taus = RangeSpec::parse(require(tau, "--tau", &ctx)?)?.values();
            let order = match order.unwrap_or("leading") {
                "taylor3" => asymptotics::EtamsdOrder::Taylor3,
                _ => asymptotics::EtamsdOrder::Leading,
            };
            comments.push(format!("order: {order:?}; regime: small lag ratio"));
            curve_from(format!("tp-etamsd {law} T={horizon}"), &taus, |tau| {
                let v = asymptotics::tp_etamsd_asymp(&law, tau, horizon, order)?;
                if let Some(w) = v.warning {
                    warnings.push(w);
                }
                Ok(v.value)
            })?
        }
        "tp-eb" => {
            let law = require(law.clone(), "--law", &ctx)?;
            let tau = scalar(require(tau, "--tau", &ctx)?, "--tau")?;
            let horizons = RangeSpec::parse(require(horizon, "--T", &ctx)?)?.values();
            comments.push("regime: fixed tau, large T".into());
            curve_from(format!("tp-eb {law} tau={tau}"), &horizons, |horizon| {
                asymptotics::tp_eb_asymp(&law, tau, horizon)
            })?
        }
        "tp-eb-limit" => {
            let p = require(p, "--p", &ctx)?;
            let value = asymptotics::tp_eb_limit(p)?;
            comments.push("T -> infinity limit of the two-point EB".into());
            CurveSeries::new(
                "tp-eb-limit".to_string(),
                vec![CurvePoint {
                    x: p,
                    value,
                    stderr: None,
                }],
            )?
        }
        "beta-msd" => {
            let law = require(law.clone(), "--law", &ctx)?;
            let regime = regime_kind(require(regime, "--regime", &ctx)?);
            let ts = RangeSpec::parse(require(t, "--t", &ctx)?)?.values();
            comments.push(format!("regime: {regime:?}"));
            curve_from(format!("beta-msd {law} {regime:?}"), &ts, |t| {
                asymptotics::beta_msd_asymp(&law, t, regime)
            })?
        }
        "hitting-tail" => {
            let law = require(law.clone(), "--law", &ctx)?;
            let value = asymptotics::hitting_tail_exponent(&law);
            comments.push("tail exponent of the hitting-time density, t^value".into());
            CurveSeries::new(
                format!("hitting-tail {law}"),
                vec![CurvePoint {
                    x: law.a_min(),
                    value,
                    stderr: None,
                }],
            )?
        }
        other => unreachable!("clap filtered asymptotic '{other}'"),
    };
    if !warnings.is_empty() {
        comments.push(format!(
            "warning: {} (first of {} points outside the regime)",
            warnings[0],
            warnings.len()
        ));
    }
    let file = write_curve(out, &format!("asymptotic_{name}"), &curve, &comments)?;
    if let Some(law) = law {
        manifest.law = Some(law.to_string());
    }
    manifest.files.push(file);
    Ok(ExitCode::SUCCESS)
}

fn cmd_validate(
    out: &Path,
    scenario: &str,
    quick: bool,
    seed: u64,
    manifest: &mut RunManifest,
) -> sbmre::Result<ExitCode> {
    let report = if scenario == "all" {
        validation::run_all(seed, quick)?
    } else {
        let single = validation::run_scenario(scenario, seed, quick)?;
        validation::ValidationReport {
            seed,
            quick,
            pass: single.pass,
            scenarios: vec![single],
        }
    };
    for s in &report.scenarios {
        for line in s.summary_lines() {
            println!("{line}");
        }
    }
    let passed = report.scenarios.iter().filter(|s| s.pass).count();
    println!(
        "VALIDATION {}: {passed}/{} scenarios passed (seed {seed}{})",
        if report.pass { "PASS" } else { "FAIL" },
        report.scenarios.len(),
        if quick { ", quick" } else { "" }
    );
    let path = out.join("validation_report.json");
    let body = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
    std::fs::write(&path, body)
        .map_err(|e| Error::Parameter(format!("cannot write {}: {e}", path.display())))?;
    println!("wrote {}", path.display());
    manifest.files.push("validation_report.json".into());
    Ok(if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
