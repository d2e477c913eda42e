//! Laws of the random anomalous diffusion exponent 𝒜.
//!
//! Three families are supported: a point mass (plain scaled Brownian motion),
//! a two-point mixture, and a beta distribution rescaled to `[A₁, A₂]`. The
//! law carries its density/mass, moment generating function `M_𝒜`, the mixing
//! functional `E[g(𝒜)]`, and an exact sampler.
//!
//! Atomic laws never expose a pointwise density. Every mixture formula in the
//! crate routes through [`ExponentLaw::expect`], which dispatches to weighted
//! sums for atoms and to quadrature for the beta family.

use crate::error::{Error, Result};
use crate::numerics::{self, QuadratureSpec};
use crate::rng::RngStream;
use rand_distr::{Distribution, Gamma};
use std::fmt;

/// Distribution of the anomalous diffusion exponent, supported in `(0, K)`.
#[derive(Debug, Clone, PartialEq)]
pub enum ExponentLaw {
    /// Point mass at `alpha`: plain SBM.
    Degenerate { alpha: f64, k_bound: f64 },
    /// Mass `p` at `a1`, mass `1-p` at `a2`.
    TwoPoint {
        a1: f64,
        a2: f64,
        p: f64,
        k_bound: f64,
    },
    /// Beta(gamma, beta) rescaled to `[a1, a2]`.
    Beta {
        a1: f64,
        a2: f64,
        gamma: f64,
        beta: f64,
        k_bound: f64,
    },
}

/// The default support bound: the largest exponent plus one. `K` only has to
/// dominate the support, so it is never binding for these finite families.
fn default_k(a_max: f64) -> f64 {
    a_max + 1.0
}

impl ExponentLaw {
    pub fn degenerate(alpha: f64) -> Result<Self> {
        validate(ExponentLaw::Degenerate {
            alpha,
            k_bound: default_k(alpha),
        })
    }

    pub fn two_point(a1: f64, a2: f64, p: f64) -> Result<Self> {
        validate(ExponentLaw::TwoPoint {
            a1,
            a2,
            p,
            k_bound: default_k(a2),
        })
    }

    pub fn beta(a1: f64, a2: f64, gamma: f64, beta: f64) -> Result<Self> {
        validate(ExponentLaw::Beta {
            a1,
            a2,
            gamma,
            beta,
            k_bound: default_k(a2),
        })
    }

    /// Smallest exponent in the support.
    pub fn a_min(&self) -> f64 {
        match *self {
            ExponentLaw::Degenerate { alpha, .. } => alpha,
            ExponentLaw::TwoPoint { a1, .. } | ExponentLaw::Beta { a1, .. } => a1,
        }
    }

    /// Largest exponent in the support.
    pub fn a_max(&self) -> f64 {
        match *self {
            ExponentLaw::Degenerate { alpha, .. } => alpha,
            ExponentLaw::TwoPoint { a2, .. } | ExponentLaw::Beta { a2, .. } => a2,
        }
    }

    pub fn k_bound(&self) -> f64 {
        match *self {
            ExponentLaw::Degenerate { k_bound, .. }
            | ExponentLaw::TwoPoint { k_bound, .. }
            | ExponentLaw::Beta { k_bound, .. } => k_bound,
        }
    }

    /// Moment generating function `M_𝒜(s) = E[e^{s𝒜}]`.
    ///
    /// Degenerate: `e^{αs}`. Two-point: `p·e^{A₁s} + (1−p)·e^{A₂s}`.
    /// Beta: `e^{A₁s} ₁F₁(γ, γ+β, s(A₂−A₁))`.
    pub fn mgf(&self, s: f64) -> Result<f64> {
        match *self {
            ExponentLaw::Degenerate { alpha, .. } => Ok((alpha * s).exp()),
            ExponentLaw::TwoPoint { a1, a2, p, .. } => {
                Ok(p * (a1 * s).exp() + (1.0 - p) * (a2 * s).exp())
            }
            ExponentLaw::Beta {
                a1,
                a2,
                gamma,
                beta,
                ..
            } => Ok((a1 * s).exp() * numerics::kummer_1f1(gamma, gamma + beta, s * (a2 - a1))?),
        }
    }

    /// `E[t^𝒜]`, i.e. `M_𝒜(log t)` extended to `t = 0` by `E[0^𝒜] = 0`
    /// (the exponent is positive almost surely). Never evaluates `log 0`.
    pub fn mean_power(&self, t: f64) -> Result<f64> {
        if !(t >= 0.0) {
            return Err(Error::Domain(format!(
                "mean_power requires t >= 0, got {t}"
            )));
        }
        if t == 0.0 {
            return Ok(0.0);
        }
        if t == 1.0 {
            return Ok(1.0);
        }
        self.mgf(t.ln())
    }

    /// `E[t^{c𝒜}]` with the same `t = 0` convention; the workhorse behind
    /// the q-th moment formula.
    pub fn mean_power_scaled(&self, t: f64, c: f64) -> Result<f64> {
        if !(t >= 0.0) {
            return Err(Error::Domain(format!(
                "mean_power_scaled requires t >= 0, got {t}"
            )));
        }
        if t == 0.0 {
            return Ok(if c == 0.0 { 1.0 } else { 0.0 });
        }
        if t == 1.0 {
            return Ok(1.0);
        }
        self.mgf(c * t.ln())
    }

    /// Mixing functional `E[g(𝒜)] = ∫₀ᴷ g(a) f_𝒜(a) da`.
    ///
    /// Weighted sum for the atomic laws; for the beta family, adaptive
    /// quadrature in `u`-space (`a = A₁ + (A₂−A₁)u`) over panels clustered
    /// geometrically toward both endpoints, so the integrable singularities
    /// of `u^{γ−1}(1−u)^{β−1}` with `γ, β < 1` converge.
    pub fn expect<F: Fn(f64) -> f64>(&self, g: F, spec: &QuadratureSpec) -> Result<f64> {
        match *self {
            ExponentLaw::Degenerate { alpha, .. } => Ok(g(alpha)),
            ExponentLaw::TwoPoint { a1, a2, p, .. } => Ok(p * g(a1) + (1.0 - p) * g(a2)),
            ExponentLaw::Beta {
                a1,
                a2,
                gamma,
                beta,
                ..
            } => {
                let norm = numerics::beta_fn(gamma, beta)?;
                let width = a2 - a1;
                // Each half is integrated in the variable measuring distance
                // to its own singular endpoint, so 1-u is never formed close
                // to 1 where f64 spacing would swallow it.
                let pts = half_breakpoints();
                let left = numerics::integrate_breakpoints(
                    |u| g(a1 + width * u) * u.powf(gamma - 1.0) * (1.0 - u).powf(beta - 1.0) / norm,
                    &pts,
                    spec,
                )?;
                let right = numerics::integrate_breakpoints(
                    |v| g(a2 - width * v) * v.powf(beta - 1.0) * (1.0 - v).powf(gamma - 1.0) / norm,
                    &pts,
                    spec,
                )?;
                Ok(left + right)
            }
        }
    }

    /// One exact draw from the law.
    ///
    /// Degenerate returns `alpha` without consuming randomness. Two-point
    /// uses a single uniform. Beta uses the two-gamma-ratio construction
    /// `Z = G(γ)/(G(γ)+G(β))`, which is exact for all shapes.
    pub fn sample(&self, stream: &mut RngStream) -> f64 {
        match *self {
            ExponentLaw::Degenerate { alpha, .. } => alpha,
            ExponentLaw::TwoPoint { a1, a2, p, .. } => {
                if stream.uniform() < p {
                    a1
                } else {
                    a2
                }
            }
            ExponentLaw::Beta {
                a1,
                a2,
                gamma,
                beta,
                ..
            } => {
                let g1 = Gamma::new(gamma, 1.0).expect("validated shape");
                let g2 = Gamma::new(beta, 1.0).expect("validated shape");
                loop {
                    let x: f64 = g1.sample(stream);
                    let y: f64 = g2.sample(stream);
                    if x + y > 0.0 {
                        return a1 + (a2 - a1) * x / (x + y);
                    }
                }
            }
        }
    }
}

/// Breakpoints on (0, 1/2] clustered geometrically toward 0. The first
/// rung sits at 2^-120, leaving at most ~2^-36 of unresolved mass for shape
/// parameters down to 0.3.
fn half_breakpoints() -> Vec<f64> {
    let mut pts = vec![0.0];
    let mut u = 0.25_f64.powi(60);
    while u < 0.25 {
        pts.push(u);
        u *= 4.0;
    }
    pts.push(0.25);
    pts.push(0.5);
    pts
}

/// Checks every invariant of the law and returns it unchanged.
pub fn validate(law: ExponentLaw) -> Result<ExponentLaw> {
    let finite = |v: f64, name: &str| -> Result<()> {
        if v.is_finite() {
            Ok(())
        } else {
            Err(Error::Parameter(format!("{name} must be finite, got {v}")))
        }
    };
    match law {
        ExponentLaw::Degenerate { alpha, k_bound } => {
            finite(alpha, "alpha")?;
            if !(alpha > 0.0 && alpha < k_bound) {
                return Err(Error::Parameter(format!(
                    "degenerate law requires 0 < alpha < K, got alpha={alpha}, K={k_bound}"
                )));
            }
        }
        ExponentLaw::TwoPoint { a1, a2, p, k_bound } => {
            finite(a1, "a1")?;
            finite(a2, "a2")?;
            finite(p, "p")?;
            if !(a1 > 0.0 && a1 < a2) {
                return Err(Error::Parameter(format!(
                    "two-point law requires 0 < a1 < a2, got a1={a1}, a2={a2}"
                )));
            }
            if !(a2 < k_bound) {
                return Err(Error::Parameter(format!(
                    "two-point law requires a2 < K, got a2={a2}, K={k_bound}"
                )));
            }
            if !(p > 0.0 && p < 1.0) {
                return Err(Error::Parameter(format!(
                    "two-point law requires p in (0, 1), got p={p}"
                )));
            }
        }
        ExponentLaw::Beta {
            a1,
            a2,
            gamma,
            beta,
            k_bound,
        } => {
            finite(a1, "a1")?;
            finite(a2, "a2")?;
            finite(gamma, "gamma")?;
            finite(beta, "beta")?;
            if !(a1 > 0.0 && a1 < a2) {
                return Err(Error::Parameter(format!(
                    "beta law requires 0 < a1 < a2, got a1={a1}, a2={a2}"
                )));
            }
            if !(a2 < k_bound) {
                return Err(Error::Parameter(format!(
                    "beta law requires a2 < K, got a2={a2}, K={k_bound}"
                )));
            }
            if !(gamma > 0.0) {
                return Err(Error::Parameter(format!(
                    "beta law requires gamma > 0, got {gamma}"
                )));
            }
            if !(beta > 0.0) {
                return Err(Error::Parameter(format!(
                    "beta law requires beta > 0, got {beta}"
                )));
            }
        }
    }
    Ok(law)
}

impl fmt::Display for ExponentLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExponentLaw::Degenerate { alpha, .. } => write!(f, "degenerate:alpha={alpha}"),
            ExponentLaw::TwoPoint { a1, a2, p, .. } => {
                write!(f, "twopoint:a1={a1},a2={a2},p={p}")
            }
            ExponentLaw::Beta {
                a1,
                a2,
                gamma,
                beta,
                ..
            } => write!(f, "beta:a1={a1},a2={a2},gamma={gamma},beta={beta}"),
        }
    }
}

impl std::str::FromStr for ExponentLaw {
    type Err = Error;

    /// Parses the law specification syntax, e.g. `degenerate:alpha=0.7`,
    /// `twopoint:a1=0.5,a2=1.5,p=0.5`, `beta:a1=0.5,a2=1.5,gamma=0.3,beta=0.7`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, rest) = s
            .split_once(':')
            .ok_or_else(|| Error::Parameter(format!("law spec '{s}' is missing ':'")))?;
        let mut kv = std::collections::BTreeMap::new();
        for pair in rest.split(',') {
            let (k, v) = pair.split_once('=').ok_or_else(|| {
                Error::Parameter(format!("law spec field '{pair}' is not key=value"))
            })?;
            let parsed: f64 = v.parse().map_err(|_| {
                Error::Parameter(format!("law spec field '{k}' has non-numeric value '{v}'"))
            })?;
            if kv.insert(k.trim().to_string(), parsed).is_some() {
                return Err(Error::Parameter(format!("law spec repeats field '{k}'")));
            }
        }
        let take = |kv: &mut std::collections::BTreeMap<String, f64>, key: &str| -> Result<f64> {
            kv.remove(key)
                .ok_or_else(|| Error::Parameter(format!("law spec is missing field '{key}'")))
        };
        let law = match name.trim() {
            "degenerate" => {
                let alpha = take(&mut kv, "alpha")?;
                ExponentLaw::degenerate(alpha)?
            }
            "twopoint" => {
                let a1 = take(&mut kv, "a1")?;
                let a2 = take(&mut kv, "a2")?;
                let p = take(&mut kv, "p")?;
                ExponentLaw::two_point(a1, a2, p)?
            }
            "beta" => {
                let a1 = take(&mut kv, "a1")?;
                let a2 = take(&mut kv, "a2")?;
                let gamma = take(&mut kv, "gamma")?;
                let beta = take(&mut kv, "beta")?;
                ExponentLaw::beta(a1, a2, gamma, beta)?
            }
            other => {
                return Err(Error::Parameter(format!(
                    "unknown law '{other}'; expected degenerate, twopoint, or beta"
                )))
            }
        };
        if let Some(extra) = kv.keys().next() {
            return Err(Error::Parameter(format!(
                "law spec has unknown field '{extra}'"
            )));
        }
        Ok(law)
    }
}
