//! Scaled Brownian motion with random anomalous diffusion exponent.
//!
//! Scaled Brownian motion (SBM) is the time-changed Wiener process
//! `B_α(t) = B(t^α)`. This crate simulates SBM and its randomized-exponent
//! variant SBMRE — where the exponent 𝒜 is drawn once per trajectory from a
//! law on `(0, K)` — and evaluates every analytic characteristic of both
//! processes: the position pdf, q-th absolute moments, autocovariance, the
//! expected time-averaged MSD, the ergodicity breaking parameter, and the
//! first-hitting-time density, together with their closed-form asymptotic
//! regimes. Monte Carlo estimators and a named validation suite cross-check
//! the ensembles against the formulas.
//!
//! Organization:
//!
//! - [`law`] — exponent laws (degenerate, two-point, beta on `[A₁, A₂]`)
//! - [`numerics`] — log-gamma, beta function, ₁F₁, adaptive quadrature
//! - [`grid`], [`rng`], [`sim`] — grids, reproducible streams, exact path
//!   simulation, hitting-time sampling
//! - [`analytics`] — exact characteristics (pdf, moments, TAMSD, EB, hitting)
//! - [`asymptotics`] — closed-form limit regimes, kept separate from the
//!   exact evaluators so the two can be compared
//! - [`estimators`] — ensemble statistics and curve output
//! - [`validation`] — the Monte-Carlo-vs-analytic scenario suite

// Validation guards are written as `!(x > 0.0)` on purpose: unlike
// `x <= 0.0`, the negated form also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytics;
pub mod asymptotics;
pub mod error;
pub mod estimators;
pub mod grid;
pub mod law;
pub mod numerics;
pub mod rng;
pub mod sim;
pub mod validation;

pub use error::{Error, Result};
pub use grid::TimeGrid;
pub use law::ExponentLaw;
pub use rng::RngStream;
pub use sim::{Ensemble, Trajectory};
