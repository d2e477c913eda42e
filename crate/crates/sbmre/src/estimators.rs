//! Ensemble statistics — the Monte Carlo side of every analytic-vs-empirical
//! comparison.

use crate::error::{Error, Result};
use crate::rng::{RngStream, BOOTSTRAP_STREAM_BASE};
use crate::sim::{Ensemble, Trajectory};
use rand::RngCore;
use rayon::prelude::*;
use std::io::Write;

/// One point of a curve: abscissa, value, and the standard error when the
/// value is Monte Carlo derived.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct CurvePoint {
    pub x: f64,
    pub value: f64,
    pub stderr: Option<f64>,
}

/// A labelled `(abscissa, value, stderr)` series — the universal output
/// record for characteristics vs time or lag.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct CurveSeries {
    pub label: String,
    pub points: Vec<CurvePoint>,
}

impl CurveSeries {
    /// Builds a series, enforcing strictly increasing abscissas.
    pub fn new(label: impl Into<String>, points: Vec<CurvePoint>) -> Result<Self> {
        for w in points.windows(2) {
            if !(w[1].x > w[0].x) {
                return Err(Error::Parameter(format!(
                    "curve abscissas must be strictly increasing, got {} then {}",
                    w[0].x, w[1].x
                )));
            }
        }
        Ok(CurveSeries {
            label: label.into(),
            points,
        })
    }

    /// CSV with a `# label:` comment line and `abscissa,value,stderr` rows;
    /// the stderr field is left empty for analytic curves.
    pub fn write_csv<W: Write>(&self, out: &mut W) -> std::io::Result<()> {
        self.write_csv_with_comments(out, &[])
    }

    /// Like [`CurveSeries::write_csv`], with extra `#`-prefixed annotation
    /// lines (regime notes, warnings) after the label.
    pub fn write_csv_with_comments<W: Write>(
        &self,
        out: &mut W,
        comments: &[String],
    ) -> std::io::Result<()> {
        writeln!(out, "# label: {}", self.label)?;
        for c in comments {
            writeln!(out, "# {c}")?;
        }
        writeln!(out, "abscissa,value,stderr")?;
        for p in &self.points {
            match p.stderr {
                Some(se) => writeln!(out, "{},{},{}", p.x, p.value, se)?,
                None => writeln!(out, "{},{},", p.x, p.value)?,
            }
        }
        Ok(())
    }
}

fn mean_and_se(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

fn check_increasing(xs: &[f64], what: &str) -> Result<()> {
    for w in xs.windows(2) {
        if !(w[1] > w[0]) {
            return Err(Error::Parameter(format!(
                "{what} must be strictly increasing"
            )));
        }
    }
    Ok(())
}

/// Time-averaged mean squared displacement of one trajectory at lag `tau`:
/// the discrete (trapezoid-weighted) version of
/// `(T−τ)^{-1} ∫₀^{T−τ} (X(t+τ) − X(t))² dt`.
///
/// Lags must be an integer multiple of the step of a uniform grid; running
/// TAMSD on a log grid would require interpolation, which corrupts the
/// increment distribution, so it is rejected instead.
pub fn tamsd(traj: &Trajectory, tau: f64) -> Result<f64> {
    let m = traj.grid.lag_steps(tau)?;
    let x = &traj.positions;
    let last = x.len() - 1 - m;
    let inc = |k: usize| (x[k + m] - x[k]) * (x[k + m] - x[k]);
    if last == 0 {
        return Ok(inc(0));
    }
    let mut acc = 0.5 * (inc(0) + inc(last));
    for k in 1..last {
        acc += inc(k);
    }
    Ok(acc / last as f64)
}

/// Per-lag mean TAMSD across an ensemble, with standard errors.
pub fn ensemble_mean_tamsd(ensemble: &Ensemble, taus: &[f64]) -> Result<CurveSeries> {
    check_increasing(taus, "taus")?;
    let deltas = tamsd_matrix(ensemble, taus)?;
    let points = taus
        .iter()
        .enumerate()
        .map(|(j, &tau)| {
            let col: Vec<f64> = deltas.iter().map(|row| row[j]).collect();
            let (mean, se) = mean_and_se(&col);
            CurvePoint {
                x: tau,
                value: mean,
                stderr: Some(se),
            }
        })
        .collect();
    CurveSeries::new("ensemble_mean_tamsd", points)
}

/// TAMSD of every trajectory at every lag; row = trajectory.
pub fn tamsd_matrix(ensemble: &Ensemble, taus: &[f64]) -> Result<Vec<Vec<f64>>> {
    ensemble
        .trajectories
        .par_iter()
        .map(|traj| taus.iter().map(|&tau| tamsd(traj, tau)).collect())
        .collect()
}

/// EB point estimate from per-trajectory TAMSD values:
/// sample variance over squared sample mean.
pub fn eb_point_estimate(deltas: &[f64]) -> f64 {
    let (mean, _) = mean_and_se(deltas);
    let n = deltas.len() as f64;
    let var = deltas.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (n - 1.0);
    var / (mean * mean)
}

/// Bootstrap standard error of the EB estimate (seeded, `resamples` draws).
pub fn eb_bootstrap_se(deltas: &[f64], stream: &mut RngStream, resamples: usize) -> f64 {
    let n = deltas.len();
    let mut estimates = Vec::with_capacity(resamples);
    let mut resample = vec![0.0; n];
    for _ in 0..resamples {
        for slot in resample.iter_mut() {
            *slot = deltas[(stream.next_u64() % n as u64) as usize];
        }
        estimates.push(eb_point_estimate(&resample));
    }
    let m = estimates.len() as f64;
    let mean = estimates.iter().sum::<f64>() / m;
    (estimates.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (m - 1.0)).sqrt()
}

/// Per-lag empirical EB parameter with seeded bootstrap standard errors
/// (10³ resamples on dedicated RNG stream indices).
pub fn ensemble_eb(ensemble: &Ensemble, taus: &[f64]) -> Result<CurveSeries> {
    if ensemble.trajectories.len() < 2 {
        return Err(Error::Domain(
            "ensemble_eb needs at least 2 trajectories".into(),
        ));
    }
    check_increasing(taus, "taus")?;
    let deltas = tamsd_matrix(ensemble, taus)?;
    let points = taus
        .iter()
        .enumerate()
        .map(|(j, &tau)| {
            let col: Vec<f64> = deltas.iter().map(|row| row[j]).collect();
            let eb = eb_point_estimate(&col);
            let mut stream = RngStream::new(ensemble.base_seed, BOOTSTRAP_STREAM_BASE + j as u64);
            let se = eb_bootstrap_se(&col, &mut stream, 1000);
            CurvePoint {
                x: tau,
                value: eb,
                stderr: Some(se),
            }
        })
        .collect();
    CurveSeries::new("ensemble_eb", points)
}

/// Empirical second moment `E[X²(t)]` at grid times.
pub fn empirical_msd(ensemble: &Ensemble, times: &[f64]) -> Result<CurveSeries> {
    check_increasing(times, "times")?;
    let indices: Vec<usize> = times
        .iter()
        .map(|&t| {
            ensemble
                .grid
                .index_of(t)
                .ok_or_else(|| Error::Domain(format!("time {t} is not on the grid")))
        })
        .collect::<Result<_>>()?;
    let points = times
        .iter()
        .zip(&indices)
        .map(|(&t, &k)| {
            let sq: Vec<f64> = ensemble
                .trajectories
                .iter()
                .map(|traj| traj.positions[k] * traj.positions[k])
                .collect();
            let (mean, se) = mean_and_se(&sq);
            CurvePoint {
                x: t,
                value: mean,
                stderr: Some(se),
            }
        })
        .collect();
    CurveSeries::new("empirical_msd", points)
}

/// Histogram binning specification.
#[derive(Debug, Clone, Copy)]
pub struct BinSpec {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl BinSpec {
    pub fn new(lo: f64, hi: f64, count: usize) -> Result<Self> {
        if !(hi > lo) || count == 0 {
            return Err(Error::Parameter(format!(
                "bin spec requires lo < hi and count > 0, got [{lo}, {hi}] x{count}"
            )));
        }
        Ok(BinSpec { lo, hi, count })
    }

    /// Bins covering the sample range (padded when the range is degenerate).
    pub fn covering(samples: &[f64], count: usize) -> Result<Self> {
        let lo = samples.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = samples.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if !lo.is_finite() || !hi.is_finite() {
            return Err(Error::Domain("samples contain non-finite values".into()));
        }
        if hi > lo {
            BinSpec::new(lo, hi, count)
        } else {
            BinSpec::new(lo - 0.5, hi + 0.5, count)
        }
    }
}

/// Density-normalized histogram: bin masses sum to 1 after width weighting,
/// with per-bin multinomial standard errors.
pub fn histogram_pdf(samples: &[f64], bins: BinSpec) -> Result<CurveSeries> {
    if samples.len() < 100 {
        return Err(Error::Domain(format!(
            "histogram_pdf needs at least 100 samples, got {}",
            samples.len()
        )));
    }
    let width = (bins.hi - bins.lo) / bins.count as f64;
    let mut counts = vec![0usize; bins.count];
    let mut inside = 0usize;
    for &s in samples {
        if s >= bins.lo && s <= bins.hi {
            let mut idx = ((s - bins.lo) / width) as usize;
            if idx >= bins.count {
                idx = bins.count - 1;
            }
            counts[idx] += 1;
            inside += 1;
        }
    }
    if inside == 0 {
        return Err(Error::Domain("no samples fall inside the bins".into()));
    }
    let n = inside as f64;
    let points = counts
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            let p_hat = c as f64 / n;
            CurvePoint {
                x: bins.lo + (i as f64 + 0.5) * width,
                value: p_hat / width,
                stderr: Some((p_hat * (1.0 - p_hat) / n).sqrt() / width),
            }
        })
        .collect();
    CurveSeries::new("histogram_pdf", points)
}

/// Running quadratic variation `Σ (Δx)²` of one trajectory vs time.
pub fn quadratic_variation(traj: &Trajectory) -> CurveSeries {
    let times = traj.grid.times();
    let mut acc = 0.0;
    let points = traj
        .positions
        .iter()
        .enumerate()
        .map(|(k, &x)| {
            if k > 0 {
                let d = x - traj.positions[k - 1];
                acc += d * d;
            }
            CurvePoint {
                x: times[k],
                value: acc,
                stderr: None,
            }
        })
        .collect();
    CurveSeries::new("quadratic_variation", points).expect("grid times are increasing")
}

/// Ensemble mean of the stochastic exponential at one grid time.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct StochExpMean {
    pub mean: f64,
    pub stderr: f64,
    /// Recorded when stderr/mean exceeds 0.1 — the estimator variance grows
    /// like `exp(λ² t^𝒜)` and the value stops being informative.
    pub variance_warning: bool,
}

/// `E[exp(λX(t) − λ²·t^𝒜/2)]`, using each trajectory's recorded exponent
/// for its own quadratic variation `t^a`. Unit mean for a martingale.
pub fn stoch_exp_mean(ensemble: &Ensemble, lambda: f64, t: f64) -> Result<StochExpMean> {
    if !(lambda >= 0.0) {
        return Err(Error::Domain(format!(
            "stoch_exp_mean requires lambda >= 0, got {lambda}"
        )));
    }
    let k = ensemble
        .grid
        .index_of(t)
        .ok_or_else(|| Error::Domain(format!("time {t} is not on the grid")))?;
    let ys: Vec<f64> = ensemble
        .trajectories
        .iter()
        .map(|traj| {
            (lambda * traj.positions[k] - 0.5 * lambda * lambda * t.powf(traj.exponent)).exp()
        })
        .collect();
    let (mean, stderr) = mean_and_se(&ys);
    Ok(StochExpMean {
        mean,
        stderr,
        variance_warning: stderr > 0.1 * mean.abs(),
    })
}

/// Result of a power-law tail fit.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct TailFit {
    pub slope: f64,
    pub stderr: f64,
    pub bins_used: usize,
    pub samples_in_range: usize,
}

/// Least-squares slope of the log empirical tail density over log-spaced
/// bins in `[fit_lo, fit_hi]`.
///
/// `censored_count` enters only the density normalization; censored paths
/// never contribute invented hit times, and the caller keeps `fit_hi` at or
/// below the censoring horizon so no bin is truncated.
pub fn hitting_tail_fit(
    hits: &[f64],
    censored_count: usize,
    fit_lo: f64,
    fit_hi: f64,
    n_bins: usize,
) -> Result<TailFit> {
    if !(fit_lo > 0.0 && fit_hi > fit_lo) {
        return Err(Error::Domain(format!(
            "fit range must satisfy 0 < lo < hi, got [{fit_lo}, {fit_hi}]"
        )));
    }
    if n_bins < 3 {
        return Err(Error::Domain("tail fit needs at least 3 bins".into()));
    }
    let in_range = hits.iter().filter(|&&t| t >= fit_lo && t <= fit_hi).count();
    if in_range < 1000 {
        return Err(Error::Domain(format!(
            "tail fit needs at least 1000 uncensored samples in range, got {in_range}"
        )));
    }
    let n_total = (hits.len() + censored_count) as f64;
    let log_lo = fit_lo.ln();
    let step = (fit_hi.ln() - log_lo) / n_bins as f64;
    let mut counts = vec![0usize; n_bins];
    for &t in hits {
        if t >= fit_lo && t <= fit_hi {
            let mut idx = ((t.ln() - log_lo) / step) as usize;
            if idx >= n_bins {
                idx = n_bins - 1;
            }
            counts[idx] += 1;
        }
    }
    let pts: Vec<(f64, f64)> = counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(i, &c)| {
            let lo = (log_lo + i as f64 * step).exp();
            let hi = (log_lo + (i as f64 + 1.0) * step).exp();
            let density = c as f64 / (n_total * (hi - lo));
            // geometric bin midpoint: the right abscissa for a power law
            (0.5 * (lo.ln() + hi.ln()), density.ln())
        })
        .collect();
    if pts.len() < 3 {
        return Err(Error::Domain(
            "tail fit needs at least 3 non-empty bins".into(),
        ));
    }
    let (slope, _intercept) = least_squares_slope(&pts);
    // Residual-based slope standard error.
    let n = pts.len() as f64;
    let mean_x = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let sxx = pts.iter().map(|p| (p.0 - mean_x).powi(2)).sum::<f64>();
    let intercept = pts.iter().map(|p| p.1).sum::<f64>() / n - slope * mean_x;
    let ss_res = pts
        .iter()
        .map(|p| (p.1 - (slope * p.0 + intercept)).powi(2))
        .sum::<f64>();
    let stderr = if pts.len() > 2 {
        (ss_res / (n - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    Ok(TailFit {
        slope,
        stderr,
        bins_used: pts.len(),
        samples_in_range: in_range,
    })
}

/// Ordinary least squares on `(x, y)` pairs; returns `(slope, intercept)`.
pub fn least_squares_slope(pts: &[(f64, f64)]) -> (f64, f64) {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>();
    let sxx = pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytics;
    use crate::grid::TimeGrid;
    use crate::law::ExponentLaw;
    use crate::sim::{self, simulate_ensemble};
    use std::sync::Arc;

    fn tp() -> ExponentLaw {
        ExponentLaw::two_point(0.5, 1.5, 0.5).unwrap()
    }

    #[test]
    fn tamsd_trivial_cases() {
        let grid = Arc::new(TimeGrid::linear(1.0, 10).unwrap());
        let zero = Trajectory {
            grid: Arc::clone(&grid),
            positions: vec![0.0; 11],
            exponent: 1.0,
        };
        assert_eq!(tamsd(&zero, 0.5).unwrap(), 0.0);

        // Single-increment grid {0, τ}: δ(τ) = x(τ)².
        let g2 = Arc::new(TimeGrid::linear(0.7, 1).unwrap());
        let one = Trajectory {
            grid: g2,
            positions: vec![0.0, 1.3],
            exponent: 1.0,
        };
        assert_eq!(tamsd(&one, 0.7).unwrap(), 1.3 * 1.3);
    }

    #[test]
    fn tamsd_rejects_bad_lags() {
        let grid = Arc::new(TimeGrid::linear(1.0, 10).unwrap());
        let traj = Trajectory {
            grid: Arc::clone(&grid),
            positions: vec![0.0; 11],
            exponent: 1.0,
        };
        assert!(tamsd(&traj, 1.1).is_err()); // tau > T
        assert!(tamsd(&traj, 0.05).is_err()); // not a multiple of dt
        let log_grid = Arc::new(TimeGrid::logarithmic(0.01, 10.0, 100).unwrap());
        let lt = Trajectory {
            grid: log_grid,
            positions: vec![0.0; 101],
            exponent: 1.0,
        };
        assert!(tamsd(&lt, 1.0).is_err()); // non-uniform grid
    }

    #[test]
    fn tamsd_is_shift_invariant() {
        let grid = Arc::new(TimeGrid::linear(2.0, 40).unwrap());
        let law = tp();
        let mut stream = crate::rng::RngStream::new(3, 0);
        let traj = sim::simulate_sbmre(&law, &grid, &mut stream);
        let shifted = Trajectory {
            grid: Arc::clone(&grid),
            positions: traj.positions.iter().map(|x| x + 7.25).collect(),
            exponent: traj.exponent,
        };
        let a = tamsd(&traj, 0.5).unwrap();
        let b = tamsd(&shifted, 0.5).unwrap();
        assert!((a - b).abs() <= 1e-12 * a.abs());
    }

    #[test]
    fn bm_mean_tamsd_matches_tau() {
        // E[δ(τ)] = τ exactly for BM; 3·SE over 4000 paths.
        let grid = Arc::new(TimeGrid::linear(10.0, 500).unwrap());
        let law = ExponentLaw::degenerate(1.0).unwrap();
        let ens = simulate_ensemble(&law, &grid, 4000, 17).unwrap();
        let curve = ensemble_mean_tamsd(&ens, &[1.0]).unwrap();
        let p = curve.points[0];
        assert!(
            (p.value - 1.0).abs() <= 3.0 * p.stderr.unwrap(),
            "mean {} se {}",
            p.value,
            p.stderr.unwrap()
        );
    }

    #[test]
    fn degenerate_mean_tamsd_matches_closed_form() {
        let grid = Arc::new(TimeGrid::linear(10.0, 1000).unwrap());
        let law = ExponentLaw::degenerate(0.5).unwrap();
        let ens = simulate_ensemble(&law, &grid, 4000, 19).unwrap();
        let taus = [0.5, 1.0, 2.0, 5.0];
        let curve = ensemble_mean_tamsd(&ens, &taus).unwrap();
        for p in &curve.points {
            let analytic = analytics::sbm_etamsd(0.5, p.x, 10.0);
            assert!(
                (p.value - analytic).abs() <= 3.0 * p.stderr.unwrap(),
                "tau={}: {} vs {} (3SE {})",
                p.x,
                p.value,
                analytic,
                3.0 * p.stderr.unwrap()
            );
        }
    }

    #[test]
    fn single_trajectory_mean_tamsd_flags_zero_stderr() {
        let grid = Arc::new(TimeGrid::linear(1.0, 50).unwrap());
        let ens = simulate_ensemble(&tp(), &grid, 1, 5).unwrap();
        let curve = ensemble_mean_tamsd(&ens, &[0.1]).unwrap();
        assert_eq!(curve.points[0].stderr, Some(0.0));
        let direct = tamsd(&ens.trajectories[0], 0.1).unwrap();
        assert_eq!(curve.points[0].value, direct);
    }

    #[test]
    fn ensemble_eb_zero_for_identical_trajectories() {
        let grid = Arc::new(TimeGrid::linear(1.0, 20).unwrap());
        let mut stream = crate::rng::RngStream::new(9, 0);
        let traj = sim::simulate_sbmre(&tp(), &grid, &mut stream);
        let ens = Ensemble {
            law: tp(),
            grid: Arc::clone(&grid),
            trajectories: vec![traj.clone(), traj.clone(), traj],
            base_seed: 9,
        };
        let curve = ensemble_eb(&ens, &[0.25]).unwrap();
        assert!(curve.points[0].value.abs() < 1e-12);
    }

    #[test]
    fn ensemble_eb_requires_two_trajectories() {
        let grid = Arc::new(TimeGrid::linear(1.0, 20).unwrap());
        let ens = simulate_ensemble(&tp(), &grid, 1, 5).unwrap();
        assert!(ensemble_eb(&ens, &[0.25]).is_err());
    }

    #[test]
    fn ensemble_eb_is_scale_invariant() {
        // Rescaling every path by c scales Var(δ) and E[δ]² by c⁴ alike.
        let grid = Arc::new(TimeGrid::linear(5.0, 100).unwrap());
        let ens = simulate_ensemble(&tp(), &grid, 200, 23).unwrap();
        let scaled = Ensemble {
            law: ens.law.clone(),
            grid: Arc::clone(&ens.grid),
            trajectories: ens
                .trajectories
                .iter()
                .map(|t| Trajectory {
                    grid: Arc::clone(&t.grid),
                    positions: t.positions.iter().map(|x| 2.0 * x).collect(),
                    exponent: t.exponent,
                })
                .collect(),
            base_seed: ens.base_seed,
        };
        let a = ensemble_eb(&ens, &[0.5, 1.0]).unwrap();
        let b = ensemble_eb(&scaled, &[0.5, 1.0]).unwrap();
        for (p, q) in a.points.iter().zip(&b.points) {
            assert!((p.value - q.value).abs() <= 1e-12 * p.value.abs());
        }
    }

    #[test]
    fn empirical_msd_basics() {
        let grid = Arc::new(TimeGrid::linear(4.0, 100).unwrap());
        let ens = simulate_ensemble(&tp(), &grid, 8000, 29).unwrap();
        let curve = empirical_msd(&ens, &[0.0, 4.0]).unwrap();
        assert_eq!(curve.points[0].value, 0.0);
        assert_eq!(curve.points[0].stderr, Some(0.0));
        let p = curve.points[1];
        // E[x²(4)] = mean_power(4) = 5 for the example two-point law.
        assert!(
            (p.value - 5.0).abs() <= 3.0 * p.stderr.unwrap(),
            "{} vs 5 (3SE {})",
            p.value,
            3.0 * p.stderr.unwrap()
        );
        assert!(empirical_msd(&ens, &[0.123456]).is_err());
    }

    #[test]
    fn empirical_msd_loglog_slope() {
        let grid = Arc::new(TimeGrid::linear(10.0, 200).unwrap());
        let law = ExponentLaw::degenerate(1.5).unwrap();
        let ens = simulate_ensemble(&law, &grid, 20_000, 31).unwrap();
        let times: Vec<f64> = (1..=10).map(|k| k as f64).collect();
        let curve = empirical_msd(&ens, &times).unwrap();
        let pts: Vec<(f64, f64)> = curve
            .points
            .iter()
            .map(|p| (p.x.ln(), p.value.ln()))
            .collect();
        let (slope, _) = least_squares_slope(&pts);
        assert!((slope - 1.5).abs() < 0.05, "slope {slope}");
    }

    #[test]
    fn histogram_density_normalizes() {
        let samples: Vec<f64> = (0..1000).map(|i| (i % 17) as f64 / 4.0).collect();
        let curve = histogram_pdf(&samples, BinSpec::new(0.0, 4.0, 8).unwrap()).unwrap();
        let width = 0.5;
        let mass: f64 = curve.points.iter().map(|p| p.value * width).sum();
        assert!((mass - 1.0).abs() < 1e-12);
    }

    #[test]
    fn histogram_all_equal_samples() {
        let samples = vec![2.5; 500];
        let bins = BinSpec::covering(&samples, 1).unwrap();
        let curve = histogram_pdf(&samples, bins).unwrap();
        let width = bins.hi - bins.lo;
        assert_eq!(curve.points.len(), 1);
        assert!((curve.points[0].value - 1.0 / width).abs() < 1e-12);
        assert!(histogram_pdf(&samples[..50], bins).is_err());
    }

    #[test]
    fn histogram_skewness_of_symmetric_law() {
        let grid = Arc::new(TimeGrid::linear(10.0, 50).unwrap());
        let ens = simulate_ensemble(&tp(), &grid, 20_000, 41).unwrap();
        let finals: Vec<f64> = ens
            .trajectories
            .iter()
            .map(|t| *t.positions.last().unwrap())
            .collect();
        let n = finals.len() as f64;
        let mean = finals.iter().sum::<f64>() / n;
        let m2 = finals.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
        let m3 = finals.iter().map(|x| (x - mean).powi(3)).sum::<f64>() / n;
        let skew = m3 / m2.powf(1.5);
        // Mixture kurtosis inflates the skewness SE over the Gaussian √(6/n).
        let m6 = finals.iter().map(|x| (x - mean).powi(6)).sum::<f64>() / n;
        let se = (m6 / m2.powi(3) / n).sqrt();
        assert!(skew.abs() <= 3.0 * se, "skew {skew} (3SE {})", 3.0 * se);
    }

    #[test]
    fn quadratic_variation_zero_path_and_tracking() {
        let grid = Arc::new(TimeGrid::linear(1.0, 5).unwrap());
        let zero = Trajectory {
            grid: Arc::clone(&grid),
            positions: vec![0.0; 6],
            exponent: 0.5,
        };
        assert!(quadratic_variation(&zero)
            .points
            .iter()
            .all(|p| p.value == 0.0));

        // With 10⁵ steps, QV(t)/t^a stays within 2% of 1.
        let fine = Arc::new(TimeGrid::linear(1.0, 100_000).unwrap());
        let law = ExponentLaw::degenerate(0.5).unwrap();
        let mut stream = crate::rng::RngStream::new(4, 2);
        let traj = sim::simulate_sbm(0.5, &fine, &mut stream);
        let qv = quadratic_variation(&traj);
        let last = qv.points.last().unwrap();
        assert!((last.value - 1.0).abs() < 0.02, "QV {}", last.value);
        let _ = law;
    }

    #[test]
    fn quadratic_variation_tracks_recorded_exponent() {
        // SBMRE paths: QV(t)/t^a within 2% at t in {1, 2, 4}, each with a
        // dedicated 10⁵-step grid over [0, t].
        let law = tp();
        for (i, &t_end) in [1.0, 2.0, 4.0].iter().enumerate() {
            let grid = Arc::new(TimeGrid::linear(t_end, 100_000).unwrap());
            let mut stream = crate::rng::RngStream::new(1213, i as u64);
            let traj = sim::simulate_sbmre(&law, &grid, &mut stream);
            let qv = quadratic_variation(&traj);
            let expected = t_end.powf(traj.exponent);
            let observed = qv.points.last().unwrap().value;
            assert!(
                (observed / expected - 1.0).abs() < 0.02,
                "t={t_end} a={}: {} vs {}",
                traj.exponent,
                observed,
                expected
            );
        }
    }

    #[test]
    fn stoch_exp_unit_mean() {
        let grid = Arc::new(TimeGrid::linear(4.0, 8).unwrap());
        let ens = simulate_ensemble(&tp(), &grid, 50_000, 101).unwrap();
        // λ → 0 gives exactly 1 for every trajectory.
        let trivial = stoch_exp_mean(&ens, 0.0, 4.0).unwrap();
        assert_eq!(trivial.mean, 1.0);
        assert_eq!(trivial.stderr, 0.0);
        for &t in &[1.0, 4.0] {
            let r = stoch_exp_mean(&ens, 0.5, t).unwrap();
            assert!(
                (r.mean - 1.0).abs() <= 3.0 * r.stderr,
                "t={t}: mean {} (3SE {})",
                r.mean,
                3.0 * r.stderr
            );
        }
        assert!(stoch_exp_mean(&ens, 0.5, 3.3).is_err());
    }

    #[test]
    fn tail_fit_recovers_synthetic_power_law() {
        // Inverse-CDF samples of f ∝ t^{-1.25} on [1, ∞).
        let mut stream = crate::rng::RngStream::new(7, 0);
        let hits: Vec<f64> = (0..200_000)
            .map(|_| (1.0 - stream.uniform()).powf(-4.0))
            .collect();
        let fit = hitting_tail_fit(&hits, 0, 10.0, 1e4, 8).unwrap();
        assert!(
            (fit.slope + 1.25).abs() <= 0.02,
            "slope {} ± {}",
            fit.slope,
            fit.stderr
        );
    }

    #[test]
    fn tail_fit_input_validation() {
        let hits = vec![2.0; 500];
        assert!(hitting_tail_fit(&hits, 0, 1.0, 100.0, 8).is_err()); // too few
        let ok: Vec<f64> = (0..2000).map(|i| 1.0 + i as f64).collect();
        assert!(hitting_tail_fit(&ok, 0, -1.0, 100.0, 8).is_err());
        assert!(hitting_tail_fit(&ok, 0, 5.0, 5.0, 8).is_err());
        assert!(hitting_tail_fit(&ok, 0, 1.0, 2000.0, 2).is_err());
    }

    #[test]
    fn stderr_shrinks_like_inverse_sqrt_n() {
        let grid = Arc::new(TimeGrid::linear(4.0, 100).unwrap());
        let small = simulate_ensemble(&tp(), &grid, 2000, 61).unwrap();
        let large = simulate_ensemble(&tp(), &grid, 4000, 61).unwrap();
        let times = [1.0, 2.0, 4.0];
        let a = empirical_msd(&small, &times).unwrap();
        let b = empirical_msd(&large, &times).unwrap();
        let mut ratio_sum = 0.0;
        for (p, q) in a.points.iter().zip(&b.points) {
            ratio_sum += q.stderr.unwrap() / p.stderr.unwrap();
        }
        let mean_ratio = ratio_sum / times.len() as f64;
        let target = 1.0 / 2.0_f64.sqrt();
        assert!(
            (mean_ratio - target).abs() <= 0.1,
            "mean stderr ratio {mean_ratio}"
        );
    }

    #[test]
    fn curve_csv_format() {
        let curve = CurveSeries::new(
            "demo",
            vec![
                CurvePoint {
                    x: 0.5,
                    value: 1.25,
                    stderr: Some(0.01),
                },
                CurvePoint {
                    x: 1.0,
                    value: 2.5,
                    stderr: None,
                },
            ],
        )
        .unwrap();
        let mut buf = Vec::new();
        curve.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "# label: demo\nabscissa,value,stderr\n0.5,1.25,0.01\n1,2.5,\n"
        );
        assert!(CurveSeries::new(
            "bad",
            vec![
                CurvePoint {
                    x: 1.0,
                    value: 0.0,
                    stderr: None
                },
                CurvePoint {
                    x: 1.0,
                    value: 0.0,
                    stderr: None
                },
            ],
        )
        .is_err());
    }
}
