//! Sampling time grids.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// How a grid was constructed. Kept for manifests and lag bookkeeping.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum GridKind {
    /// `N` equal steps on `[0, T]` (N+1 points).
    Linear {
        horizon: f64,
        steps: usize,
    },
    /// `t₀ = 0` followed by `N` log-spaced points from `t_min` to `T`.
    Logarithmic {
        t_min: f64,
        horizon: f64,
        points: usize,
    },
    Explicit,
}

/// Strictly increasing sampling times with `times[0] = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    times: Vec<f64>,
    kind: GridKind,
}

impl TimeGrid {
    /// Uniform grid: `t_k = k·T/N` for `k = 0..=N`.
    pub fn linear(horizon: f64, steps: usize) -> Result<Self> {
        if !(horizon > 0.0) {
            return Err(Error::Parameter(format!(
                "linear grid horizon must be positive, got {horizon}"
            )));
        }
        if steps < 1 {
            return Err(Error::Parameter("linear grid needs at least 1 step".into()));
        }
        let dt = horizon / steps as f64;
        let times = (0..=steps).map(|k| k as f64 * dt).collect();
        Ok(TimeGrid {
            times,
            kind: GridKind::Linear { horizon, steps },
        })
    }

    /// `0` followed by `points` log-spaced times from `t_min` to `horizon`.
    pub fn logarithmic(t_min: f64, horizon: f64, points: usize) -> Result<Self> {
        if !(t_min > 0.0) || !(horizon > t_min) {
            return Err(Error::Parameter(format!(
                "logarithmic grid requires 0 < t_min < horizon, got ({t_min}, {horizon})"
            )));
        }
        if points < 2 {
            return Err(Error::Parameter(
                "logarithmic grid needs at least 2 points".into(),
            ));
        }
        let log_lo = t_min.ln();
        let log_hi = horizon.ln();
        let mut times = Vec::with_capacity(points + 1);
        times.push(0.0);
        for k in 0..points {
            let f = k as f64 / (points - 1) as f64;
            times.push((log_lo + f * (log_hi - log_lo)).exp());
        }
        // Pin both endpoints so they are exact despite exp/ln rounding.
        times[1] = t_min;
        *times.last_mut().unwrap() = horizon;
        let grid = TimeGrid {
            times,
            kind: GridKind::Logarithmic {
                t_min,
                horizon,
                points,
            },
        };
        grid.check_monotone()?;
        Ok(grid)
    }

    pub fn explicit(times: Vec<f64>) -> Result<Self> {
        if times.is_empty() || times[0] != 0.0 {
            return Err(Error::Parameter("grid must start at t = 0".into()));
        }
        let grid = TimeGrid {
            times,
            kind: GridKind::Explicit,
        };
        grid.check_monotone()?;
        Ok(grid)
    }

    fn check_monotone(&self) -> Result<()> {
        for w in self.times.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::Parameter(format!(
                    "grid times must be strictly increasing, got {} then {}",
                    w[0], w[1]
                )));
            }
        }
        Ok(())
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn kind(&self) -> &GridKind {
        &self.kind
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn horizon(&self) -> f64 {
        *self.times.last().unwrap()
    }

    /// Step size if the grid is uniform.
    pub fn uniform_step(&self) -> Option<f64> {
        match self.kind {
            GridKind::Linear { horizon, steps } => Some(horizon / steps as f64),
            _ => {
                if self.times.len() < 2 {
                    return None;
                }
                let dt = self.times[1] - self.times[0];
                let ok = self.times.windows(2).all(|w| {
                    let d = w[1] - w[0];
                    (d - dt).abs() <= 1e-9 * dt
                });
                ok.then_some(dt)
            }
        }
    }

    /// Index of a grid node equal to `t` (relative tolerance 1e-9).
    pub fn index_of(&self, t: f64) -> Option<usize> {
        let idx = self
            .times
            .partition_point(|&x| x < t - 1e-9 * t.abs().max(1.0));
        if idx < self.times.len() {
            let x = self.times[idx];
            if (x - t).abs() <= 1e-9 * t.abs().max(1.0) {
                return Some(idx);
            }
        }
        None
    }

    /// Number of grid steps representing lag `tau` on a uniform grid.
    ///
    /// `tau = horizon` is allowed and leaves exactly one increment (the
    /// single-term TAMSD boundary case); anything beyond is rejected.
    pub fn lag_steps(&self, tau: f64) -> Result<usize> {
        let dt = self.uniform_step().ok_or_else(|| {
            Error::Domain("lags are only representable on uniform (linear) grids".into())
        })?;
        let m = tau / dt;
        let rounded = m.round();
        if rounded < 1.0 || (m - rounded).abs() > 1e-6 {
            return Err(Error::Domain(format!(
                "lag {tau} is not an integer multiple of the grid step {dt}"
            )));
        }
        let steps = rounded as usize;
        if steps >= self.times.len() {
            return Err(Error::Domain(format!(
                "lag {tau} is beyond the horizon {}",
                self.horizon()
            )));
        }
        Ok(steps)
    }
}
